"""
Cylinder charts R x (R/Z) carrying a Riemannian metric.

Points are arrays with a trailing axis of length 2 holding (x, y-lift); every
evaluator is vectorized over the leading axes.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import sympy as sp
from numpy.typing import ArrayLike, NDArray

from src.common.exceptions import DegenerateMetric
from src.core.settings import NUMERICS
from src.geometry.expressions import X, Y, FieldBundle, jet_expressions, parse_expression

Array = NDArray[np.float64]


def _as_points(q: ArrayLike) -> Array:
    points = np.asarray(q, dtype=float)
    if points.shape[-1:] != (2,):
        raise ValueError(f"points need a trailing axis of length 2, got shape {points.shape}")
    return points


def _symmetric(a11: Array, a12: Array, a22: Array) -> Array:
    return np.moveaxis(np.array([[a11, a12], [a12, a22]]), (0, 1), (-2, -1))


@dataclass(frozen=True, eq=False)
class SurfaceChart:
    """A metric g = g11 dx^2 + 2 g12 dx dy + g22 dy^2 on the cylinder, period 1 in y."""

    g11: sp.Expr
    g12: sp.Expr
    g22: sp.Expr
    h_geo: float = field(default_factory=lambda: NUMERICS.h_geo)
    warped: bool = field(init=False)

    def __post_init__(self) -> None:
        warped = (
            sp.simplify(self.g11 - 1) == 0
            and sp.simplify(self.g12) == 0
            and Y not in self.g22.free_symbols
        )
        object.__setattr__(self, "warped", bool(warped))

    @classmethod
    def from_strings(cls, g11: str, g12: str, g22: str) -> "SurfaceChart":
        return cls(
            parse_expression(g11, "g11"),
            parse_expression(g12, "g12"),
            parse_expression(g22, "g22"),
        )

    def __reduce__(self):
        return (SurfaceChart, (self.g11, self.g12, self.g22, self.h_geo))

    @property
    def y_independent(self) -> bool:
        return all(Y not in e.free_symbols for e in (self.g11, self.g12, self.g22))

    @cached_property
    def _values(self) -> FieldBundle:
        return FieldBundle((self.g11, self.g12, self.g22))

    @cached_property
    def _jet1(self) -> FieldBundle:
        return FieldBundle([d for e in (self.g11, self.g12, self.g22) for d in jet_expressions(e, 1)])

    @cached_property
    def _jet2(self) -> FieldBundle:
        return FieldBundle([d for e in (self.g11, self.g12, self.g22) for d in jet_expressions(e, 2)])

    def metric(self, q: ArrayLike) -> Array:
        points = _as_points(q)
        g11, g12, g22 = self._values(points[..., 0], points[..., 1])
        if NUMERICS.debug:
            self.check_positive(points)
        return _symmetric(g11, g12, g22)

    def metric_jacobian(self, q: ArrayLike) -> Array:
        """dg[..., i, j, k] = d_k g_ij."""
        points = _as_points(q)
        d = self._jet1(points[..., 0], points[..., 1])
        by_k = [_symmetric(d[0 + k], d[2 + k], d[4 + k]) for k in range(2)]
        return np.stack(by_k, axis=-1)

    def metric_hessian(self, q: ArrayLike) -> Array:
        """ddg[..., i, j, k, l] = d_k d_l g_ij."""
        points = _as_points(q)
        d = self._jet2(points[..., 0], points[..., 1])
        # per component: (xx, xy, yy)
        blocks = {}
        for (k, l), slot in {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 2}.items():
            blocks[k, l] = _symmetric(d[0 + slot], d[3 + slot], d[6 + slot])
        rows = [np.stack([blocks[k, 0], blocks[k, 1]], axis=-1) for k in range(2)]
        return np.stack(rows, axis=-2)

    def metric_inverse(self, q: ArrayLike) -> Array:
        return np.linalg.inv(self.metric(q))

    def determinant(self, q: ArrayLike) -> Array:
        points = _as_points(q)
        g11, g12, g22 = self._values(points[..., 0], points[..., 1])
        return g11 * g22 - g12 * g12

    def check_positive(self, q: ArrayLike) -> None:
        points = _as_points(q)
        g11, g12, g22 = self._values(points[..., 0], points[..., 1])
        det = g11 * g22 - g12 * g12
        bad = ~((g11 > 0) & (det > 0))
        if np.any(bad):
            where = points[bad][0] if points.ndim > 1 else points
            raise DegenerateMetric(
                f"metric not positive definite at {tuple(np.round(where, 6))}",
                {"point": [float(c) for c in np.atleast_1d(where)]},
            )

    def norm(self, q: ArrayLike, v: ArrayLike) -> Array:
        g = self.metric(q)
        vec = np.asarray(v, dtype=float)
        return np.sqrt(np.einsum("...i,...ij,...j->...", vec, g, vec))

    # warped profile beta = sqrt(g22) and its first two derivatives
    def warp_profile(self, x: ArrayLike) -> tuple[Array, Array, Array]:
        xs = np.asarray(x, dtype=float)
        zeros = np.zeros_like(xs)
        g22 = self._values(xs, zeros)[2]
        d1 = self._jet1(xs, zeros)[4]
        d2 = self._jet2(xs, zeros)[6]
        beta = np.sqrt(g22)
        beta_1 = d1 / (2.0 * beta)
        beta_2 = d2 / (2.0 * beta) - d1 ** 2 / (4.0 * beta ** 3)
        return beta, beta_1, beta_2


def _christoffel_from_jacobian(g_inv: Array, dg: Array) -> Array:
    # gamma[..., k, i, j] = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
    lowered = (
        np.einsum("...jli->...lij", dg)
        + np.einsum("...ilj->...lij", dg)
        - np.einsum("...ijl->...lij", dg)
    )
    return 0.5 * np.einsum("...kl,...lij->...kij", g_inv, lowered)


def _finite_difference_jacobian(chart: SurfaceChart, points: Array, h: float) -> Array:
    parts = []
    for k in range(2):
        step = np.zeros(2)
        step[k] = h
        parts.append((chart.metric(points + step) - chart.metric(points - step)) / (2.0 * h))
    return np.stack(parts, axis=-1)


def christoffel(chart: SurfaceChart, q: ArrayLike) -> Array:
    """
    Levi-Civita symbols gamma[..., k, i, j] = Gamma^k_ij.

    Warped charts use the closed form Gamma^1_22 = -beta beta',
    Gamma^2_12 = beta'/beta; other charts differentiate the metric by central
    differences with step ``chart.h_geo``.
    """
    points = _as_points(q)
    chart.check_positive(points)
    if chart.warped:
        beta, beta_1, _ = chart.warp_profile(points[..., 0])
        gamma = np.zeros(points.shape[:-1] + (2, 2, 2))
        gamma[..., 0, 1, 1] = -beta * beta_1
        gamma[..., 1, 0, 1] = beta_1 / beta
        gamma[..., 1, 1, 0] = beta_1 / beta
        return gamma

    dg = _finite_difference_jacobian(chart, points, chart.h_geo)
    return _christoffel_from_jacobian(chart.metric_inverse(points), dg)


def christoffel_exact(chart: SurfaceChart, q: ArrayLike) -> Array:
    """Christoffel symbols from the symbolic metric derivatives."""
    points = _as_points(q)
    return _christoffel_from_jacobian(chart.metric_inverse(points), chart.metric_jacobian(points))


def sectional_curvature(chart: SurfaceChart, q: ArrayLike) -> Array:
    """Gaussian curvature K(q); -beta''/beta on warped charts."""
    points = _as_points(q)
    chart.check_positive(points)
    if chart.warped:
        beta, _, beta_2 = chart.warp_profile(points[..., 0])
        return -beta_2 / beta

    h = chart.h_geo
    gamma = christoffel_exact(chart, points)
    d_gamma = []
    for k in range(2):
        step = np.zeros(2)
        step[k] = h
        d_gamma.append(
            (christoffel_exact(chart, points + step) - christoffel_exact(chart, points - step)) / (2.0 * h)
        )
    # R^l_{ijk} with (i, j, k) = (y, x, y)
    dx_gamma, dy_gamma = d_gamma
    riemann = (
        dx_gamma[..., :, 1, 1]
        - dy_gamma[..., :, 1, 0]
        + np.einsum("...lm,...m->...l", gamma[..., :, 0, :], gamma[..., :, 1, 1])
        - np.einsum("...lm,...m->...l", gamma[..., :, 1, :], gamma[..., :, 1, 0])
    )
    g = chart.metric(points)
    r_1212 = np.einsum("...m,...m->...", g[..., 0, :], riemann)
    return r_1212 / chart.determinant(points)
