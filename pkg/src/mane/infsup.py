"""
Upper bounds for the critical value from c(L) = inf_u sup_q H(q, d_q u).

u is a function of x alone with u' piecewise constant on cells of a grid
over a compact window; each cell contributes the 1D minimax
min_w max_{q in cell} H(q, w dx).
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from src.common.constants import MANE_GRID, MANE_WINDOW
from src.common.exceptions import InvalidArgument
from src.core.logger import logger
from src.geometry.chart import Array
from src.geometry.system import MagneticSystem


@dataclass(frozen=True)
class UpperBound:
    value: float
    pointwise: float
    edges: Array
    slopes: Array
    asymmetric: bool

    @property
    def gap(self) -> float:
        """Finite-basis value minus the pointwise sup_x min_w H."""
        return self.value - self.pointwise

    def potential(self) -> tuple[Array, Array]:
        """Samples (x, u(x)) of the potential with u(x_min) = 0."""
        u = np.concatenate([[0.0], np.cumsum(self.slopes * np.diff(self.edges))])
        return self.edges, u


@dataclass(frozen=True)
class _Samples:
    x: Array
    column: Array
    inv11: Array
    inv12: Array
    inv22: Array
    theta1: Array
    theta2: Array

    def hamiltonian(self, w: float, mask: Array) -> Array:
        a = w - self.theta1[mask]
        b = -self.theta2[mask]
        return 0.5 * (self.inv11[mask] * a * a + 2.0 * self.inv12[mask] * a * b + self.inv22[mask] * b * b)

    def minimizers(self) -> Array:
        """Per-sample argmin_w of H(q, w dx)."""
        return self.theta1 + self.inv12 / self.inv11 * self.theta2

    def minima(self) -> Array:
        return 0.5 * self.theta2**2 * (self.inv22 - self.inv12**2 / self.inv11)


def _sample(system: MagneticSystem, xs: Array, y_samples: int) -> _Samples:
    ys = np.array([0.0]) if system.is_symmetric else np.linspace(0.0, 1.0, y_samples, endpoint=False)
    grid_x, grid_y = np.meshgrid(xs, ys, indexing="ij")
    points = np.stack([grid_x.ravel(), grid_y.ravel()], axis=-1)
    system.chart.check_positive(points)
    inv = system.chart.metric_inverse(points)
    theta = system.theta(points)
    column = np.repeat(np.arange(xs.size), ys.size)
    return _Samples(points[:, 0], column, inv[:, 0, 0], inv[:, 0, 1], inv[:, 1, 1], theta[:, 0], theta[:, 1])


def _cell_minimax(samples: _Samples, mask: Array) -> tuple[float, float]:
    targets = samples.minimizers()[mask]
    lo, hi = float(targets.min()), float(targets.max())

    def worst(w: float) -> float:
        return float(samples.hamiltonian(w, mask).max())

    if hi - lo < 1e-14:
        return worst(lo), lo
    result = minimize_scalar(worst, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    return float(result.fun), float(result.x)


def mane_upper_infsup(
    system: MagneticSystem,
    x_window: tuple[float, float] = MANE_WINDOW,
    grid: int = MANE_GRID,
    u_basis_size: int = MANE_GRID,
    y_samples: int = 32,
) -> UpperBound:
    """
    sup_q H(q, u'(x) dx) minimized over u' constant on ``u_basis_size`` equal cells.

    The window is sampled at ``grid + 1`` points; cells of nested bases
    subdivide each other, so refining the basis never raises the value.
    Asymmetric (y-dependent) systems are sampled in y too and flagged: u = u(x)
    is then only a heuristic.
    """
    lo, hi = x_window
    if hi <= lo:
        raise InvalidArgument("empty x window")
    if not 1 <= u_basis_size <= grid:
        raise InvalidArgument(f"basis size must lie in [1, {grid}], got {u_basis_size}")

    xs = np.linspace(lo, hi, grid + 1)
    samples = _sample(system, xs, y_samples)
    edges = np.linspace(lo, hi, u_basis_size + 1)
    cell = np.minimum(samples.column * u_basis_size // grid, u_basis_size - 1)

    values = np.empty(u_basis_size)
    slopes = np.empty(u_basis_size)
    for c in range(u_basis_size):
        values[c], slopes[c] = _cell_minimax(samples, cell == c)

    asymmetric = not system.is_symmetric
    if asymmetric:
        logger.warning("system %s depends on y: the u(x) upper bound is a heuristic", system.name)
    pointwise = float(np.max(samples.minima()))
    return UpperBound(float(values.max()), pointwise, edges, slopes, asymmetric)
