"""
Closed curves of negative S_{L+k}: each one certifies k <= c(L).

A loop with N sum |d|^2_g = K and magnetic term M = sum theta(m) . d has
discrete action K/(2T) + M + kT, minimized at T = sqrt(K / 2k) with value
sqrt(2kK) + M.
"""

from collections.abc import Sequence
from dataclasses import dataclass
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from src.common.exceptions import InvalidArgument
from src.core.logger import logger
from src.geometry.chart import Array
from src.geometry.system import MagneticSystem
from src.loopspace.action import action, gradient
from src.loopspace.loop import DiscreteLoop


class WitnessFamily(StrEnum):
    CIRCLES = "circles"
    CONTRACTIBLE = "contractible"


@dataclass(frozen=True)
class Witness:
    loop: DiscreteLoop
    k: float
    action: float
    family: WitnessFamily


def _optimal_period(system: MagneticSystem, shape: DiscreteLoop, k: float) -> DiscreteLoop:
    d = shape.differences()
    mid = shape.midpoints()
    kinetic = shape.size * float(np.einsum("ni,nij,nj->", d, system.chart.metric(mid), d))
    return shape.with_period(np.sqrt(kinetic / (2.0 * k)))


def circle_family(
    x_values: Sequence[float],
    windings: Sequence[int],
    size: int,
) -> list[DiscreteLoop]:
    return [DiscreteLoop.circle(x, w, 1.0, size) for x in x_values for w in windings]


def rectangle(x0: float, x1: float, height: float, size: int, clockwise: bool = False) -> DiscreteLoop:
    """
    The boundary of [x0, x1] x [0, height] as a contractible loop, nodes
    spread over the edges in proportion to their chart length.
    """
    corners = np.array([[x0, 0.0], [x1, 0.0], [x1, height], [x0, height]])
    if clockwise:
        corners = corners[::-1]
    closed = np.vstack([corners, corners[:1]])
    lengths = np.linalg.norm(np.diff(closed, axis=0), axis=1)
    counts = np.maximum(2, np.round(size * lengths / lengths.sum()).astype(int))
    nodes = [
        closed[i] + np.outer(np.arange(counts[i]) / counts[i], closed[i + 1] - closed[i])
        for i in range(4)
    ]
    return DiscreteLoop(np.vstack(nodes), 1.0, 0)


def contractible_family(
    x_values: Sequence[float],
    heights: Sequence[float],
    size: int,
) -> list[DiscreteLoop]:
    shapes = []
    for i, x0 in enumerate(x_values):
        for x1 in x_values[i + 1 :]:
            for h in heights:
                shapes.append(rectangle(x0, x1, h, size))
                shapes.append(rectangle(x0, x1, h, size, clockwise=True))
    return shapes


def _descend(system: MagneticSystem, loop: DiscreteLoop, k: float, iterations: int) -> DiscreteLoop:
    """Unconstrained action descent over (nodes, log T) from a family member."""
    size, winding_class = loop.size, loop.winding

    def unpack(u: Array) -> DiscreteLoop:
        return DiscreteLoop(u[:-1].reshape(size, 2), float(np.exp(u[-1])), winding_class)

    def objective(u: Array) -> tuple[float, Array]:
        current = unpack(u)
        grad = gradient(system, current, k)
        return action(system, current, k), np.concatenate([grad.xi.ravel(), [current.period * grad.alpha]])

    u0 = np.concatenate([loop.nodes.ravel(), [np.log(loop.period)]])
    result = minimize(objective, u0, jac=True, method="L-BFGS-B", options={"maxiter": iterations})
    return unpack(result.x)


def mane_lower_witness(
    system: MagneticSystem,
    k: float,
    family: WitnessFamily = WitnessFamily.CIRCLES,
    x_range: tuple[float, float] = (-20.0, 20.0),
    samples: int = 81,
    windings: Sequence[int] = (1, -1),
    heights: Sequence[float] = (0.5, 1.0, 4.0, 16.0, 64.0),
    size: int = 64,
    tol: float = 1e-9,
    descend: int = 0,
) -> Optional[Witness]:
    """
    The most negative member of the family at its optimal period, if below -tol.

    With ``descend`` > 0 the best member is further pushed down by that many
    quasi-Newton iterations when it is not yet a witness. No witness is not a
    certificate of anything.
    """
    if k <= 0:
        raise InvalidArgument(f"witness search needs k > 0, got {k}")
    xs = np.linspace(x_range[0], x_range[1], samples)
    if family == WitnessFamily.CIRCLES:
        shapes = circle_family(xs, windings, size)
    else:
        coarse = xs[:: max(1, samples // 17)]
        shapes = contractible_family(coarse, heights, size)

    best_loop, best_value = None, np.inf
    for shape in shapes:
        loop = _optimal_period(system, shape, k)
        value = action(system, loop, k)
        if value < best_value:
            best_loop, best_value = loop, value

    if best_loop is not None and best_value >= -tol and descend > 0:
        pushed = _descend(system, best_loop, k, descend)
        pushed_value = action(system, pushed, k)
        if pushed_value < best_value:
            best_loop, best_value = pushed, pushed_value

    logger.debug("witness search k=%.6g (%s): best action %.3e", k, family.value, best_value)
    if best_loop is None or best_value >= -tol:
        return None
    return Witness(best_loop, k, float(best_value), family)
