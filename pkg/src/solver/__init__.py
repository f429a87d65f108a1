from src.solver.bounds import PeriodWindow, energy_bound, length_bound, period_bounds, shifted_period_bound
from src.solver.descent import DescentResult, full_gradient, minimize_penalized
from src.solver.finder import OrbitSolution, Outcome, StageReport, StartReport, find_orbit, initial_loops
from src.solver.newton import newton_refine
from src.solver.options import SolveOptions

__all__ = (
    "DescentResult",
    "OrbitSolution",
    "Outcome",
    "PeriodWindow",
    "SolveOptions",
    "StageReport",
    "StartReport",
    "energy_bound",
    "find_orbit",
    "full_gradient",
    "initial_loops",
    "length_bound",
    "minimize_penalized",
    "newton_refine",
    "period_bounds",
    "shifted_period_bound",
)
