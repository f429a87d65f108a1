from typing import Optional

import numpy as np

from src.common.exceptions import Diverged, InvalidArgument, SingularHessian
from src.core.logger import logger
from src.geometry.system import MagneticSystem
from src.loopspace.action import hessian
from src.loopspace.loop import DiscreteLoop
from src.loopspace.penalty import PenaltyFamily
from src.solver.descent import full_gradient
from src.solver.options import SolveOptions

# translations in x and y, the circle rotation, and one spare
MAX_NULL_DIRECTIONS = 4


def newton_refine(
    system: MagneticSystem,
    k: float,
    candidate: DiscreteLoop,
    opts: SolveOptions,
    penalty: Optional[PenaltyFamily] = None,
) -> DiscreteLoop:
    """
    Newton iterations on the full gradient with a spectral pseudo-inverse.

    Near-null Hessian directions are left untouched; steps are cut to the
    trust radius.
    """
    grad = full_gradient(system, candidate, k, penalty)
    start = float(np.linalg.norm(grad))
    if start >= opts.newton_gate:
        raise InvalidArgument(f"gradient {start:.3e} is too large for Newton refinement")

    loop = candidate
    residual = start
    for step in range(opts.newton_max_iterations):
        if residual < opts.newton_tol:
            logger.debug("newton: converged to %.3e in %d steps", residual, step)
            return loop

        values, vectors = np.linalg.eigh(hessian(system, loop, k, penalty))
        scale = float(np.max(np.abs(values)))
        null = np.abs(values) <= opts.null_tol * scale
        if int(null.sum()) > MAX_NULL_DIRECTIONS:
            raise SingularHessian(
                f"{int(null.sum())} near-null Hessian directions",
                {"null": int(null.sum()), "scale": scale},
            )
        coefficients = vectors.T @ grad
        delta = -vectors[:, ~null] @ (coefficients[~null] / values[~null])
        length = float(np.linalg.norm(delta))
        if length > opts.trust_radius:
            delta *= opts.trust_radius / length
        while loop.period + delta[-1] <= 0:
            delta *= 0.5

        loop = DiscreteLoop.from_vector(loop.as_vector() + delta, loop.winding)
        grad = full_gradient(system, loop, k, penalty)
        residual = float(np.linalg.norm(grad))
        if not np.isfinite(residual) or residual > 1e3 * max(start, opts.newton_tol):
            raise Diverged(f"Newton residual grew to {residual:.3e}", {"step": step, "start": start})

    if residual < opts.newton_tol:
        return loop
    raise Diverged(
        f"Newton stalled at {residual:.3e} after {opts.newton_max_iterations} steps",
        {"residual": residual},
    )
