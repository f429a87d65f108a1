import argparse

from src.cli.dependencies import Dependencies
from src.cli.flags import add_common_flags
from src.common.serializers import OrjsonSerializer
from src.services import CSV_SCHEMAS, jsonl_schemas


def cmd_report(deps: Dependencies, args: argparse.Namespace) -> int:
    summary = deps.report_service().summarize()
    print(f"results database: {deps.database.path}")
    print("records: " + ", ".join(f"{kind}={count}" for kind, count in summary.counts.items()))
    for title, frame in (("orbits", summary.orbits), ("brackets", summary.brackets), ("scans", summary.scans)):
        if not frame.empty:
            print(f"\n[{title}]")
            print(frame.to_string(index=False))

    print("\n[csv columns]")
    for name, columns in CSV_SCHEMAS.items():
        print(f"{name}: {','.join(columns)}")
    if args.schemas:
        print("\n[json-lines schemas]")
        print(OrjsonSerializer.dumps_str(jsonl_schemas()))
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    report = subparsers.add_parser("report", help="summarize the results database and print output schemas")
    add_common_flags(report, config_required=False)
    report.add_argument("--schemas", action="store_true", help="also print the JSON schema of every results line")
    report.set_defaults(handler=cmd_report)
