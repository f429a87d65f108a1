"""
The sigma-schedule search for closed magnetic geodesics in a winding class.

For each sigma every start loop is descended on the penalized action and
polished by Newton; a refined loop is accepted when it keeps a margin from the
penalty support and passes the Euler-Lagrange and speed checks. The first
sigma with an accepted loop wins; ties go to the lowest action, then the
lowest residual.
"""

from dataclasses import dataclass, field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from typing import Optional, Sequence

import numpy as np

from src.common.exceptions import (
    Diverged,
    InvalidArgument,
    NoConvergence,
    NoOrbitFound,
    PeriodCollapse,
    SingularHessian,
)
from src.core.logger import logger
from src.core.settings import ExecutorKind
from src.core.workers import run_parallel
from src.geometry.system import MagneticSystem, theta_norm_bounds
from src.loopspace.action import action, el_residual, loop_length, minimal_length, speed_residual
from src.loopspace.loop import DiscreteLoop
from src.loopspace.penalty import PenaltyFamily
from src.solver.bounds import PeriodWindow, length_bound, period_bounds
from src.solver.descent import minimize_penalized
from src.solver.newton import newton_refine
from src.solver.options import SolveOptions


class Outcome(StrEnum):
    ACCEPTED = "accepted"
    PENALTY_ACTIVE = "penalty-active"
    ESCAPED = "escaped"
    NOT_CRITICAL = "not-critical"
    NO_CONVERGENCE = "no-convergence"
    PERIOD_COLLAPSE = "period-collapse"
    NEWTON_FAILED = "newton-failed"


@dataclass(frozen=True)
class StartReport:
    start: int
    outcome: Outcome
    action: float = np.nan
    el_residual: float = np.nan
    speed_residual: float = np.nan
    x_range: tuple[float, float] = (np.nan, np.nan)
    loop: Optional[DiscreteLoop] = field(default=None, repr=False)


@dataclass(frozen=True)
class StageReport:
    sigma: float
    starts: list[StartReport]

    def outcomes(self) -> list[str]:
        return [s.outcome.value for s in self.starts]


@dataclass(frozen=True)
class OrbitSolution:
    loop: DiscreteLoop
    k: float
    winding: int
    sigma: float
    action: float
    el_residual: float
    speed_residual: float
    penalty_active: bool
    stages: list[StageReport]

    @property
    def x_star(self) -> float:
        return float(np.mean(self.loop.nodes[:, 0]))


@dataclass(frozen=True, eq=False)
class _StageTask:
    system: MagneticSystem
    k: float
    winding: int
    sigma: float
    opts: SolveOptions
    window: PeriodWindow
    speed_cap: float

    def __call__(self, indexed: tuple[int, DiscreteLoop]) -> StartReport:
        index, init = indexed
        opts = self.opts
        penalty = PenaltyFamily(self.sigma, profile=opts.penalty_profile)
        try:
            descent = minimize_penalized(self.system, self.k, self.winding, self.sigma, init, opts, self.window)
        except PeriodCollapse:
            return StartReport(index, Outcome.PERIOD_COLLAPSE)
        except NoConvergence as exc:
            loop = exc.best.loop if exc.best is not None else None
            return StartReport(index, Outcome.NO_CONVERGENCE, loop=loop)

        loop = descent.loop
        if descent.gradient_norm < opts.newton_gate:
            try:
                loop = newton_refine(self.system, self.k, loop, opts, penalty)
            except (SingularHessian, Diverged, InvalidArgument) as exc:
                logger.debug("start %d: newton failed at sigma=%g: %s", index, self.sigma, exc)
                return StartReport(index, Outcome.NEWTON_FAILED, loop=loop, x_range=loop.x_range)
        else:
            return StartReport(index, Outcome.NO_CONVERGENCE, loop=loop, x_range=loop.x_range)

        return self._judge(index, loop, penalty)

    def _judge(self, index: int, loop: DiscreteLoop, penalty: PenaltyFamily) -> StartReport:
        opts = self.opts
        residual = float(np.max(el_residual(self.system, loop, self.k)))
        speed = speed_residual(self.system, loop, self.k)
        value = action(self.system, loop, self.k)
        report = dict(action=value, el_residual=residual, speed_residual=speed, x_range=loop.x_range, loop=loop)

        if penalty.is_active(loop.nodes, margin=opts.penalty_margin):
            return StartReport(index, Outcome.PENALTY_ACTIVE, **report)
        if float(np.max(self.system.chart.norm(loop.midpoints(), loop.velocities()))) > self.speed_cap:
            return StartReport(index, Outcome.ESCAPED, **report)
        if residual >= opts.el_tol * np.sqrt(2.0 * self.k) or speed >= opts.speed_tol:
            return StartReport(index, Outcome.NOT_CRITICAL, **report)
        return StartReport(index, Outcome.ACCEPTED, **report)


def _theta_sup(system: MagneticSystem, reach: float) -> float:
    if system.theta_sup is not None:
        return system.theta_sup
    return theta_norm_bounds(system, (-reach, reach), 401).sup_theta


def initial_loops(
    system: MagneticSystem,
    k: float,
    winding: int,
    opts: SolveOptions,
    window: PeriodWindow,
) -> list[DiscreteLoop]:
    """Circles x = x0 over the start grid at their energy-k period, optionally jittered."""
    rng = np.random.default_rng(opts.seed)
    loops = []
    for x0 in opts.x_init_grid:
        unit = DiscreteLoop.circle(x0, winding, 1.0, opts.nodes)
        period = float(np.clip(loop_length(system, unit) / np.sqrt(2.0 * k), window.lower, window.upper))
        circle = unit.with_period(period)
        if opts.init_noise > 0:
            jitter = opts.init_noise * rng.standard_normal(circle.nodes.shape)
            circle = circle.with_nodes(circle.nodes + jitter)
        loops.append(circle)
    return loops


def find_orbit(
    system: MagneticSystem,
    k: float,
    winding: int,
    opts: SolveOptions,
    extra_starts: Sequence[DiscreteLoop] = (),
    workers: int = 1,
    executor: ExecutorKind = ExecutorKind.PROCESS,
) -> OrbitSolution:
    """
    Search the sigma schedule for a penalty-free critical point of S_k.

    NoOrbitFound carries the per-sigma diagnostics; it is not a proof of
    non-existence.
    """
    if winding == 0:
        raise InvalidArgument("find_orbit needs a noncontractible winding class")
    reach = max(opts.sigma_schedule)
    l_alpha = opts.l_alpha or minimal_length(system, winding, x_window=(-reach, reach))
    theta_inf = _theta_sup(system, reach)
    window = period_bounds(k, opts.action_cap, l_alpha, theta_inf, opts.c_u_estimate, opts.bound_b)
    speed_cap = length_bound(opts.action_cap, window.upper, theta_inf) / window.lower
    logger.info(
        "find_orbit: k=%g winding=%d l_alpha=%.6g T in [%.4g, %.4g]",
        k,
        winding,
        l_alpha,
        window.lower,
        window.upper,
    )

    starts = initial_loops(system, k, winding, opts, window) + list(extra_starts)
    stages: list[StageReport] = []
    for sigma in opts.sigma_schedule:
        task = _StageTask(system, k, winding, sigma, opts, window, speed_cap)
        reports = run_parallel(task, list(enumerate(starts)), workers=workers, executor=executor)
        stages.append(StageReport(sigma, reports))
        accepted = [r for r in reports if r.outcome == Outcome.ACCEPTED]
        logger.info("sigma=%g: %s", sigma, ", ".join(r.outcome.value for r in reports))
        if accepted:
            best = min(accepted, key=lambda r: (round(r.action, 10), r.el_residual))
            return OrbitSolution(
                loop=best.loop,
                k=k,
                winding=winding,
                sigma=sigma,
                action=best.action,
                el_residual=best.el_residual,
                speed_residual=best.speed_residual,
                penalty_active=False,
                stages=stages,
            )

    raise NoOrbitFound(
        f"no penalty-free orbit of energy {k} in winding class {winding}",
        {"stages": [{"sigma": s.sigma, "outcomes": s.outcomes()} for s in stages]},
    )
