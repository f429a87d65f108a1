import argparse

import pandas as pd

from src.cli.dependencies import Dependencies
from src.cli.flags import add_common_flags
from src.common.exceptions import NoOrbitFound
from src.database.models import OrbitRecord


def orbit_table(records: list[OrbitRecord]) -> pd.DataFrame:
    rows = []
    for r in records:
        row = {
            "k": r.k,
            "winding": r.winding,
            "action": r.action,
            "T": r.loop["T"],
            "x_star": r.x_star,
            "el_residual": r.el_residual,
            "speed_residual": r.speed_residual,
        }
        if r.index is not None:
            row.update(
                m=r.index.m,
                m0=r.index.m0,
                m_T=r.index.m_fixed,
                m0_T=r.index.m0_fixed,
                mhat=r.index.mhat,
                checks="pass" if r.passed else "FAIL",
            )
        rows.append(row)
    return pd.DataFrame(rows)


def cmd_find(deps: Dependencies, args: argparse.Namespace) -> int:
    outcome = deps.orbit_service().find(deps.require_context())
    if outcome.records:
        print(orbit_table(outcome.records).to_string(index=False))
    if outcome.failures:
        for failure in outcome.failures:
            stages = "; ".join(
                f"sigma={s['sigma']:g}: {', '.join(s['outcomes'])}" for s in failure.get("stages", [])
            )
            print(f"no orbit at k={failure['k']:g} winding={failure['winding']}: {stages}")
        raise NoOrbitFound(
            f"{len(outcome.failures)} of {len(outcome.failures) + len(outcome.records)} searches found no orbit",
            {"failures": outcome.failures},
        )
    return 0


def cmd_index(deps: Dependencies, args: argparse.Namespace) -> int:
    records = deps.orbit_service().reindex(deps.require_context())
    print(orbit_table(records).to_string(index=False))
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    find = subparsers.add_parser("find", help="search closed magnetic geodesics and classify them")
    add_common_flags(find)
    find.set_defaults(handler=cmd_find)

    index = subparsers.add_parser("index", help="recompute index reports for stored orbits")
    add_common_flags(index)
    index.set_defaults(handler=cmd_index)
