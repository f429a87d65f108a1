from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from src.common.exceptions import NoConvergence, PeriodCollapse
from src.core.logger import logger
from src.geometry.chart import Array
from src.geometry.system import MagneticSystem
from src.loopspace.action import gradient, penalized_action
from src.loopspace.loop import DiscreteLoop
from src.loopspace.penalty import PenaltyFamily
from src.solver.bounds import PeriodWindow
from src.solver.options import SolveOptions


@dataclass(frozen=True)
class DescentResult:
    loop: DiscreteLoop
    value: float
    gradient_norm: float
    iterations: int
    converged: bool
    message: str = ""


def full_gradient(system: MagneticSystem, loop: DiscreteLoop, k: float, penalty: Optional[PenaltyFamily]) -> Array:
    return gradient(system, loop, k, penalty).as_vector()


def minimize_penalized(
    system: MagneticSystem,
    k: float,
    winding: int,
    sigma: float,
    init: DiscreteLoop,
    opts: SolveOptions,
    window: PeriodWindow,
) -> DescentResult:
    """
    Quasi-Newton descent of the penalized action over (nodes, log T).

    log T is box-constrained to the clamped period window. Raises NoConvergence
    at the iteration cap and PeriodCollapse when T stays pinned to the lower
    clamp.
    """
    if init.winding != winding:
        raise ValueError(f"initial loop has winding {init.winding}, expected {winding}")
    penalty = PenaltyFamily(sigma, profile=opts.penalty_profile)
    size = init.size

    start_grad = float(np.linalg.norm(full_gradient(system, init, k, penalty)))
    if start_grad < opts.g_tol:
        value = penalized_action(system, init, k, penalty)
        return DescentResult(init, value, start_grad, 0, True, "initial loop is critical")

    def unpack(u: Array) -> DiscreteLoop:
        return DiscreteLoop(u[:-1].reshape(size, 2), float(np.exp(u[-1])), winding)

    def objective(u: Array) -> tuple[float, Array]:
        loop = unpack(u)
        grad = gradient(system, loop, k, penalty)
        return penalized_action(system, loop, k, penalty), np.concatenate([grad.xi.ravel(), [loop.period * grad.alpha]])

    log_lower, log_upper = np.log(window.lower), np.log(window.upper)
    pinned = 0

    def watch(u: Array) -> None:
        nonlocal pinned
        pinned = pinned + 1 if u[-1] <= log_lower + 1e-9 else 0

    u0 = np.concatenate([init.nodes.ravel(), [np.clip(np.log(init.period), log_lower, log_upper)]])
    bounds = [(None, None)] * (2 * size) + [(log_lower, log_upper)]
    result = minimize(
        objective,
        u0,
        jac=True,
        method="L-BFGS-B",
        bounds=bounds,
        callback=watch,
        options={"maxiter": opts.max_iterations, "maxcor": 20, "gtol": opts.g_tol, "ftol": 1e-15},
    )
    loop = unpack(result.x)
    grad_norm = float(np.linalg.norm(full_gradient(system, loop, k, penalty)))
    best = DescentResult(loop, float(result.fun), grad_norm, int(result.nit), grad_norm < opts.g_tol, str(result.message))
    logger.debug(
        "descent sigma=%g: S=%.10g |grad|=%.3e T=%.6g after %d iterations",
        sigma,
        best.value,
        grad_norm,
        loop.period,
        best.iterations,
    )

    if pinned >= opts.collapse_limit and loop.period <= window.lower * (1 + 1e-9):
        raise PeriodCollapse(
            f"period pinned at the lower clamp {window.lower:.3e} for {pinned} iterations",
            {"sigma": sigma, "period": loop.period},
        )
    if result.nit >= opts.max_iterations and not best.converged:
        raise NoConvergence(f"descent hit the iteration cap {opts.max_iterations}", best=best)
    return best
