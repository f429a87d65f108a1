import argparse

import pandas as pd

from src.cli.dependencies import Dependencies
from src.cli.flags import add_common_flags
from src.services import simulate_trajectory


def cmd_simulate(deps: Dependencies, args: argparse.Namespace) -> int:
    outcome = simulate_trajectory(deps.require_context())
    print(f"wrote {outcome.rows} samples to {outcome.csv}")
    print(f"energy {outcome.energy:.12g}  drift {outcome.energy_drift:.3e}  turning points {outcome.turning_points}")
    return 0


def cmd_scan(deps: Dependencies, args: argparse.Namespace) -> int:
    summaries = deps.scan_service().scan(deps.require_context())
    table = pd.DataFrame(
        [
            {
                "k": s.k,
                "winding": s.winding,
                "seeds": s.seeds,
                "no_return": s.no_return,
                "min_residual": s.min_residual,
                "fixed_points": len(s.fixed_points),
                "turning_points": s.turning_points,
                "convexity_violations": s.convexity_violations,
                "csv": s.csv,
            }
            for s in summaries
        ]
    )
    print(table.to_string(index=False))
    for s in summaries:
        for x, vx in s.fixed_points:
            print(f"fixed point k={s.k:g} winding={s.winding}: x={x:.10g} vx={vx:.10g}")
    return 0


def register(subparsers: argparse._SubParsersAction) -> None:
    simulate = subparsers.add_parser("simulate", help="integrate one magnetic geodesic and write its trajectory CSV")
    add_common_flags(simulate)
    simulate.set_defaults(handler=cmd_simulate)

    scan = subparsers.add_parser("scan", help="Poincare return-map scan on the section y = 0")
    add_common_flags(scan)
    scan.set_defaults(handler=cmd_scan)
