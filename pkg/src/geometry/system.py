"""Magnetic systems: a cylinder chart plus a primitive 1-form theta of the magnetic field."""

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
import sympy as sp
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict

from src.common.serializers import OrjsonSerializer
from src.geometry.chart import Array, SurfaceChart, _as_points
from src.geometry.expressions import Y, FieldBundle, jet_expressions


@dataclass(frozen=True, eq=False)
class MagneticSystem:
    """
    The pair (g, -d theta) with Lagrangian L(q, v) = |v|^2/2 + theta_q(v).

    ``theta_sup`` caches sup |theta|_{g*} when it is known in closed form.
    """

    name: str
    chart: SurfaceChart
    theta1: sp.Expr
    theta2: sp.Expr
    theta_sup: Optional[float] = None
    source: Optional[BaseModel] = field(default=None, repr=False)

    def __reduce__(self):
        if self.source is not None:
            from src.geometry.presets import build_system

            return (build_system, (self.source,))
        return (MagneticSystem, (self.name, self.chart, self.theta1, self.theta2, self.theta_sup, None))

    @property
    def is_symmetric(self) -> bool:
        return self.chart.y_independent and all(Y not in e.free_symbols for e in (self.theta1, self.theta2))

    @cached_property
    def identity_hash(self) -> str:
        canonical = {
            "g11": sp.srepr(self.chart.g11),
            "g12": sp.srepr(self.chart.g12),
            "g22": sp.srepr(self.chart.g22),
            "theta1": sp.srepr(self.theta1),
            "theta2": sp.srepr(self.theta2),
        }
        return hashlib.sha256(OrjsonSerializer.dumps(canonical)).hexdigest()[:16]

    @cached_property
    def _theta(self) -> FieldBundle:
        return FieldBundle((self.theta1, self.theta2))

    @cached_property
    def _theta_jet1(self) -> FieldBundle:
        return FieldBundle([d for e in (self.theta1, self.theta2) for d in jet_expressions(e, 1)])

    @cached_property
    def _theta_jet2(self) -> FieldBundle:
        return FieldBundle([d for e in (self.theta1, self.theta2) for d in jet_expressions(e, 2)])

    def theta(self, q: ArrayLike) -> Array:
        points = _as_points(q)
        return np.moveaxis(self._theta(points[..., 0], points[..., 1]), 0, -1)

    def theta_jacobian(self, q: ArrayLike) -> Array:
        """dth[..., i, k] = d_k theta_i."""
        points = _as_points(q)
        d = self._theta_jet1(points[..., 0], points[..., 1])
        return np.moveaxis(d.reshape((2, 2) + d.shape[1:]), (0, 1), (-2, -1))

    def theta_hessian(self, q: ArrayLike) -> Array:
        """ddth[..., i, k, l] = d_k d_l theta_i."""
        points = _as_points(q)
        d = self._theta_jet2(points[..., 0], points[..., 1])
        xx, xy, yy = d[0::3], d[1::3], d[2::3]
        full = np.array([[xx, xy], [xy, yy]])  # (k, l, i, ...)
        return np.moveaxis(full, (0, 1, 2), (-2, -1, -3))

    def field_strength(self, q: ArrayLike) -> Array:
        """b with d theta = b dx ^ dy."""
        dth = self.theta_jacobian(q)
        return dth[..., 1, 0] - dth[..., 0, 1]

    def magnetic_density(self, q: ArrayLike) -> Array:
        """b / sqrt(det g): d theta as a multiple of the Riemannian area form."""
        return self.field_strength(q) / np.sqrt(self.chart.determinant(q))

    def lagrangian(self, q: ArrayLike, v: ArrayLike) -> Array:
        vec = np.asarray(v, dtype=float)
        g = self.chart.metric(q)
        return 0.5 * np.einsum("...i,...ij,...j->...", vec, g, vec) + np.einsum("...i,...i->...", self.theta(q), vec)

    def energy(self, q: ArrayLike, v: ArrayLike) -> Array:
        vec = np.asarray(v, dtype=float)
        return 0.5 * np.einsum("...i,...ij,...j->...", vec, self.chart.metric(q), vec)

    def hamiltonian(self, q: ArrayLike, p: ArrayLike) -> Array:
        shifted = np.asarray(p, dtype=float) - self.theta(q)
        return 0.5 * np.einsum("...i,...ij,...j->...", shifted, self.chart.metric_inverse(q), shifted)

    def with_theta(self, theta1: sp.Expr, theta2: sp.Expr, name: Optional[str] = None) -> "MagneticSystem":
        return MagneticSystem(name or self.name, self.chart, sp.sympify(theta1), sp.sympify(theta2))

    def with_reversed_field(self) -> "MagneticSystem":
        return self.with_theta(-self.theta1, -self.theta2, f"{self.name}-reversed")


class ThetaBounds(BaseModel):
    model_config = ConfigDict(frozen=True)

    sup_theta: float
    sup_dtheta: float
    sup_grad_dtheta: float


class HypothesisReport(BaseModel):
    """Sampled plausibility of the completeness/decay/curvature assumptions; advisory only."""

    model_config = ConfigDict(frozen=True)

    x_range: tuple[float, float]
    metric_positive: bool
    theta_bounded: bool
    field_decays: bool
    curvature_nonpositive_at_ends: bool
    bounds: ThetaBounds
    end_dtheta: float
    end_grad_dtheta: float
    end_curvature: float


def lorentz_force(system: MagneticSystem, q: ArrayLike, v: ArrayLike) -> Array:
    """
    Y_q(v) with <Y u, w> = Omega(u, w), Omega = -d theta.

    With d theta = b dx ^ dy this is Y u = b g^{-1} (u_y, -u_x).
    """
    points = _as_points(q)
    system.chart.check_positive(points)
    vec = np.asarray(v, dtype=float)
    b = system.field_strength(points)
    rotated = np.stack([vec[..., 1], -vec[..., 0]], axis=-1)
    return np.einsum("...ij,...j->...i", system.chart.metric_inverse(points), b[..., None] * rotated)


def _sample_grid(system: MagneticSystem, x_range: tuple[float, float], samples: int) -> Array:
    if samples < 1:
        raise ValueError("sample grid must be nonempty")
    xs = np.linspace(x_range[0], x_range[1], samples)
    ys = np.array([0.0]) if system.is_symmetric else np.linspace(0.0, 1.0, samples, endpoint=False)
    grid_x, grid_y = np.meshgrid(xs, ys, indexing="ij")
    return np.stack([grid_x, grid_y], axis=-1)


def _pointwise_norms(system: MagneticSystem, points: Array) -> tuple[Array, Array, Array]:
    chart = system.chart
    h = chart.h_geo
    theta = system.theta(points)
    g_inv = chart.metric_inverse(points)
    theta_norm = np.sqrt(np.einsum("...i,...ij,...j->...", theta, g_inv, theta))
    density = system.magnetic_density(points)
    grad = []
    for k in range(2):
        step = np.zeros(2)
        step[k] = h
        grad.append((system.magnetic_density(points + step) - system.magnetic_density(points - step)) / (2.0 * h))
    grad_density = np.stack(grad, axis=-1)
    grad_norm = np.sqrt(np.einsum("...i,...ij,...j->...", grad_density, g_inv, grad_density))
    return theta_norm, np.abs(density), grad_norm


def theta_norm_bounds(system: MagneticSystem, x_range: tuple[float, float], samples: int) -> ThetaBounds:
    """Sampled (sup |theta|, sup |d theta|, sup |nabla d theta|) over the window."""
    points = _sample_grid(system, x_range, samples)
    theta_norm, dtheta_norm, grad_norm = _pointwise_norms(system, points)
    return ThetaBounds(
        sup_theta=float(np.max(theta_norm)),
        sup_dtheta=float(np.max(dtheta_norm)),
        sup_grad_dtheta=float(np.max(grad_norm)),
    )


def check_hypotheses(
    system: MagneticSystem,
    x_range: tuple[float, float],
    samples: int = 201,
    decay_tol: float = 1e-3,
    end_fraction: float = 0.1,
) -> HypothesisReport:
    from src.geometry.chart import sectional_curvature

    points = _sample_grid(system, x_range, samples)
    g = system.chart.metric(points)
    det = g[..., 0, 0] * g[..., 1, 1] - g[..., 0, 1] ** 2
    positive = bool(np.all(g[..., 0, 0] > 0) and np.all(det > 0))

    theta_norm, dtheta_norm, grad_norm = _pointwise_norms(system, points)
    ends = max(1, int(round(end_fraction * samples)))
    edge = np.zeros(samples, dtype=bool)
    edge[:ends] = True
    edge[-ends:] = True

    curvature = sectional_curvature(system.chart, points[edge])
    end_dtheta = float(np.max(dtheta_norm[edge]))
    end_grad = float(np.max(grad_norm[edge]))
    end_curvature = float(np.max(curvature))
    return HypothesisReport(
        x_range=x_range,
        metric_positive=positive,
        theta_bounded=bool(np.all(np.isfinite(theta_norm))),
        field_decays=end_dtheta <= decay_tol and end_grad <= decay_tol,
        curvature_nonpositive_at_ends=end_curvature <= decay_tol,
        bounds=ThetaBounds(
            sup_theta=float(np.max(theta_norm)),
            sup_dtheta=float(np.max(dtheta_norm)),
            sup_grad_dtheta=float(np.max(grad_norm)),
        ),
        end_dtheta=end_dtheta,
        end_grad_dtheta=end_grad,
        end_curvature=end_curvature,
    )
