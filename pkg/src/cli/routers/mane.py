import argparse

from src.cli.dependencies import Dependencies
from src.cli.flags import add_common_flags
from src.common.constants import EXIT_NUMERICAL, EXIT_OK
from src.database.models import BracketStatus


def cmd_mane(deps: Dependencies, args: argparse.Namespace) -> int:
    record = deps.mane_service().estimate(deps.require_context())
    bracket = record.bracket
    label = "c_u" if bracket.contractible else "c"
    print(f"{label}({record.system}) in [{bracket.lower:.6f}, {bracket.upper:.6f}]  width {bracket.width:.2e}")
    print(f"pointwise {bracket.pointwise:.6f}  basis gap {bracket.gap:.2e}  bisection steps {bracket.steps}")
    if bracket.asymmetric:
        print("warning: y-dependent data, bracket is heuristic")
    if record.status == BracketStatus.BUDGET:
        print(f"warning: step budget exhausted before width {bracket.tol:g}")
        return EXIT_NUMERICAL
    return EXIT_OK


def register(subparsers: argparse._SubParsersAction) -> None:
    mane = subparsers.add_parser("mane", help="bracket the Mane critical value")
    add_common_flags(mane)
    mane.set_defaults(handler=cmd_mane)
