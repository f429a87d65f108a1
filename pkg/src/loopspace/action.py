"""
The discrete free-period action

    S_k(x, T) = sum_j [ N/(2T) d_j^T g(m_j) d_j + theta(m_j) . d_j ] + k T,

with d_j = x_{j+1} - x_j and m_j the segment midpoint, and its exact first
and second derivatives. Variables are ordered (x_0x, x_0y, ..., x_{N-1}y, T).
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from src.common.exceptions import InvalidArgument
from src.core.logger import logger
from src.geometry.chart import Array
from src.geometry.system import MagneticSystem
from src.loopspace.loop import DiscreteLoop, TangentPerturbation
from src.loopspace.penalty import PenaltyFamily

# (x_j, x_{j+1}) -> (d_j, m_j)
_SEGMENT_MAP = np.block([[-np.eye(2), np.eye(2)], [0.5 * np.eye(2), 0.5 * np.eye(2)]])


@dataclass(frozen=True, eq=False)
class _Segments:
    system: MagneticSystem
    loop: DiscreteLoop

    def __post_init__(self) -> None:
        chart = self.system.chart
        chart.check_positive(self.loop.nodes)
        chart.check_positive(self.midpoints)

    @cached_property
    def scale(self) -> float:
        return self.loop.size / self.loop.period

    @cached_property
    def d(self) -> Array:
        return self.loop.differences()

    @cached_property
    def midpoints(self) -> Array:
        return self.loop.midpoints()

    @cached_property
    def g(self) -> Array:
        return self.system.chart.metric(self.midpoints)

    @cached_property
    def dg(self) -> Array:
        return self.system.chart.metric_jacobian(self.midpoints)

    @cached_property
    def theta(self) -> Array:
        return self.system.theta(self.midpoints)

    @cached_property
    def dtheta(self) -> Array:
        return self.system.theta_jacobian(self.midpoints)

    @cached_property
    def quadratic(self) -> Array:
        """d_j^T g(m_j) d_j."""
        return np.einsum("ni,nij,nj->n", self.d, self.g, self.d)

    @cached_property
    def momentum(self) -> Array:
        """A_j = (N/T) g d + theta: the derivative in d_j, equal to g v + theta on the segment."""
        return self.scale * np.einsum("nij,nj->ni", self.g, self.d) + self.theta

    @cached_property
    def midpoint_force(self) -> Array:
        """B_j[k] = N/(2T) d^T d_k g d + d . d_k theta: the derivative in m_j."""
        kinetic = 0.5 * self.scale * np.einsum("ni,nijk,nj->nk", self.d, self.dg, self.d)
        return kinetic + np.einsum("ni,nik->nk", self.d, self.dtheta)


def _penalty_value(loop: DiscreteLoop, penalty: Optional[PenaltyFamily]) -> float:
    return 0.0 if penalty is None else float(penalty.value(loop.nodes[0]))


def action(system: MagneticSystem, loop: DiscreteLoop, k: float) -> float:
    seg = _Segments(system, loop)
    kinetic = 0.5 * seg.scale * float(np.sum(seg.quadratic))
    magnetic = float(np.sum(seg.theta * seg.d))
    return kinetic + magnetic + k * loop.period


def penalized_action(system: MagneticSystem, loop: DiscreteLoop, k: float, penalty: PenaltyFamily) -> float:
    return action(system, loop, k) + _penalty_value(loop, penalty)


def _node_gradient(seg: _Segments) -> Array:
    outgoing = -seg.momentum + 0.5 * seg.midpoint_force
    incoming = seg.momentum + 0.5 * seg.midpoint_force
    return outgoing + np.roll(incoming, 1, axis=0)


def gradient(
    system: MagneticSystem,
    loop: DiscreteLoop,
    k: float,
    penalty: Optional[PenaltyFamily] = None,
) -> TangentPerturbation:
    """
    Exact gradient of the discrete (penalized) action.

    The alpha component is k - N sum_j |d_j|^2_g / (2 T^2), the discrete form of
    k - (1/2T^2) int |x'|^2.
    """
    seg = _Segments(system, loop)
    xi = _node_gradient(seg)
    if penalty is not None:
        xi[0] += penalty.gradient(loop.nodes[0])
    alpha = k - 0.5 * loop.size * float(np.sum(seg.quadratic)) / loop.period**2
    return TangentPerturbation(xi, alpha)


def hessian(
    system: MagneticSystem,
    loop: DiscreteLoop,
    k: float,
    penalty: Optional[PenaltyFamily] = None,
) -> Array:
    """Dense (2N+1) x (2N+1) second derivative of the discrete (penalized) action."""
    seg = _Segments(system, loop)
    size, period = loop.size, loop.period
    d, scale = seg.d, seg.scale
    ddg = system.chart.metric_hessian(seg.midpoints)
    ddtheta = system.theta_hessian(seg.midpoints)

    f_dd = scale * seg.g
    f_dm = scale * np.einsum("nabk,nb->nak", seg.dg, d) + seg.dtheta
    f_mm = 0.5 * scale * np.einsum("na,nabkl,nb->nkl", d, ddg, d) + np.einsum("na,nakl->nkl", d, ddtheta)
    weights = np.block([[f_dd, f_dm], [np.swapaxes(f_dm, 1, 2), f_mm]])
    local = np.einsum("ba,nbc,cd->nad", _SEGMENT_MAP, weights, _SEGMENT_MAP)

    first = 2 * np.arange(size)
    second = 2 * ((np.arange(size) + 1) % size)
    index = np.column_stack([first, first + 1, second, second + 1])

    dim = 2 * size + 1
    out = np.zeros((dim, dim))
    np.add.at(out, (index[:, :, None], index[:, None, :]), local)

    # period couplings
    t_d = -(size / period**2) * np.einsum("nij,nj->ni", seg.g, d)
    t_m = -(0.5 * size / period**2) * np.einsum("ni,nijk,nj->nk", d, seg.dg, d)
    t_local = np.einsum("ba,nb->na", _SEGMENT_MAP, np.concatenate([t_d, t_m], axis=1))
    column = np.zeros(2 * size)
    np.add.at(column, index, t_local)
    out[:-1, -1] = column
    out[-1, :-1] = column
    out[-1, -1] = size * float(np.sum(seg.quadratic)) / period**3

    if penalty is not None:
        out[:2, :2] += penalty.hessian(loop.nodes[0])
    return 0.5 * (out + out.T)


def el_residual(system: MagneticSystem, loop: DiscreteLoop, k: float) -> Array:
    """
    Per-node discrete Euler-Lagrange residual in acceleration units.

    The node gradient is a force integrated over a cell of physical length T/N;
    it is rescaled by N/T and measured in the dual metric at the node.
    """
    seg = _Segments(system, loop)
    force = _node_gradient(seg) * seg.scale
    g_inv = system.chart.metric_inverse(loop.nodes)
    return np.sqrt(np.einsum("ni,nij,nj->n", force, g_inv, force))


def speed_residual(system: MagneticSystem, loop: DiscreteLoop, k: float) -> float:
    """max_j | |x'_j|^2 - 2 k T^2 | / (2 k T^2) with x'_j = N d_j the parameter-time velocity."""
    if k <= 0:
        raise InvalidArgument("speed uniformity needs k > 0")
    seg = _Segments(system, loop)
    target = 2.0 * k * loop.period**2
    speeds = loop.size**2 * seg.quadratic
    return float(np.max(np.abs(speeds - target)) / target)


def loop_length(system: MagneticSystem, loop: DiscreteLoop) -> float:
    seg = _Segments(system, loop)
    return float(np.sum(np.sqrt(seg.quadratic)))


def momentum_jump(system: MagneticSystem, loop: DiscreteLoop, penalty: PenaltyFamily) -> tuple[Array, Array]:
    """
    The momentum jump p^-(T) - p^+(0) at node 0 and the covector -df_sigma(x_0) it should match.

    At a critical point of the penalized action the two agree up to the O(1/N)
    midpoint terms.
    """
    seg = _Segments(system, loop)
    jump = seg.momentum[-1] - seg.momentum[0]
    return jump, -penalty.gradient(loop.nodes[0])


def _energy_and_gradient(system: MagneticSystem, winding_class: int, size: int):
    def objective(flat: Array) -> tuple[float, Array]:
        loop = DiscreteLoop(flat.reshape(size, 2), 1.0, winding_class)
        seg = _Segments(system, loop)
        energy = 0.5 * size * float(np.sum(seg.quadratic))
        kinetic_momentum = size * np.einsum("nij,nj->ni", seg.g, seg.d)
        kinetic_force = 0.5 * size * np.einsum("ni,nijk,nj->nk", seg.d, seg.dg, seg.d)
        grad = -kinetic_momentum + 0.5 * kinetic_force
        grad = grad + np.roll(kinetic_momentum + 0.5 * kinetic_force, 1, axis=0)
        return energy, grad.ravel()

    return objective


def minimal_length(
    system: MagneticSystem,
    winding_class: int,
    size: int = 64,
    x_window: tuple[float, float] = (-20.0, 20.0),
    starts: int = 9,
) -> float:
    """
    Estimate l_alpha, the infimum of lengths in a winding class, inside ``x_window``.

    Minimizes the discrete energy E = (N/2) sum |d_j|^2_g at T = 1 over loops with
    x in the window; l = sqrt(2 E) at a constant-speed minimizer.
    """
    if winding_class == 0:
        return 0.0

    objective = _energy_and_gradient(system, winding_class, size)
    lo, hi = x_window
    best_circle = min(
        (DiscreteLoop.circle(x0, winding_class, 1.0, size) for x0 in np.linspace(lo, hi, starts)),
        key=lambda c: objective(c.nodes.ravel())[0],
    )
    bounds = [(lo, hi), (None, None)] * size
    result = minimize(objective, best_circle.nodes.ravel(), jac=True, method="L-BFGS-B", bounds=bounds)
    energy = min(float(result.fun), objective(best_circle.nodes.ravel())[0])
    logger.debug("minimal_length: winding=%d, E=%.10g, iterations=%d", winding_class, energy, result.nit)
    return float(np.sqrt(2.0 * energy))


def critical_energy(system: MagneticSystem, loop: DiscreteLoop) -> float:
    """The k for which dS_k/dT vanishes at ``loop``: N sum_j |d_j|^2_g / (2 T^2)."""
    seg = _Segments(system, loop)
    return 0.5 * loop.size * float(np.sum(seg.quadratic)) / loop.period**2
