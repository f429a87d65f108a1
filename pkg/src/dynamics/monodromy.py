"""
Linearized return map of a closed magnetic geodesic.

D = d(phi_H^T)(z0) is integrated from the variational equation D' = J Hess H D
along the Hamiltonian orbit through the Legendre image of the loop's first
node. P is the restriction of D to a symplectic complement of
span{X_H, grad H} inside the energy surface.
"""

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
from scipy.integrate import solve_ivp

from src.common.constants import KERNEL_TOL
from src.common.exceptions import InvalidArgument, NotCritical, StepFailure, SymplecticityLoss
from src.core.logger import logger
from src.dynamics.hamiltonian import SYMPLECTIC_J, HamiltonianJet, symplectic_form
from src.dynamics.state import legendre
from src.geometry.chart import Array
from src.geometry.system import MagneticSystem
from src.loopspace.action import critical_energy, el_residual
from src.loopspace.loop import DiscreteLoop

SYMPLECTIC_LIMIT = 1e-4


class BlockKind(StrEnum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"


@dataclass(frozen=True)
class Monodromy:
    matrix: Array
    poincare: Array
    initial_point: Array
    period: float
    energy: float
    closing_error: float

    @property
    def eigenvalues(self) -> Array:
        return np.linalg.eigvals(self.matrix)

    @property
    def poincare_eigenvalues(self) -> Array:
        return np.linalg.eigvals(self.poincare)

    @property
    def symplectic_defect(self) -> float:
        d = self.matrix
        return float(np.max(np.abs(d.T @ SYMPLECTIC_J @ d - SYMPLECTIC_J)))

    def kernel_dimension(self, tol: float = KERNEL_TOL) -> int:
        """dim ker(I - D), counted from singular values below tol * max(1, |D|)."""
        return _null_count(np.eye(4) - self.matrix, tol * max(1.0, float(np.linalg.norm(self.matrix, 2))))

    def poincare_kernel_dimension(self, tol: float = KERNEL_TOL) -> int:
        return _null_count(np.eye(2) - self.poincare, tol * max(1.0, float(np.linalg.norm(self.poincare, 2))))

    @property
    def trace(self) -> float:
        return float(np.trace(self.poincare))

    def kind(self, tol: float = KERNEL_TOL) -> BlockKind:
        half = 0.5 * self.trace
        if abs(abs(half) - 1.0) <= tol:
            return BlockKind.PARABOLIC
        return BlockKind.ELLIPTIC if abs(half) < 1.0 else BlockKind.HYPERBOLIC

    @property
    def rotation_angle(self) -> float:
        """
        Angle in [0, 2 pi) of an elliptic P; positive for the clockwise turn of a
        positive-definite transverse Hamiltonian.
        """
        base = float(np.arccos(np.clip(0.5 * self.trace, -1.0, 1.0)))
        return base if self.poincare[1, 0] <= 0 else 2.0 * np.pi - base


def _null_count(matrix: Array, cutoff: float) -> int:
    return int(np.sum(np.linalg.svd(matrix, compute_uv=False) <= cutoff))


def symplectic_basis(jet: HamiltonianJet, z0: Array) -> Array:
    """
    Columns (a1, a2, b1, b2) with omega(a_i, b_j) = delta_ij.

    a1 = X_H / |grad H|, b1 = grad H / |grad H|; (a2, b2) come from projecting
    coordinate vectors onto the symplectic complement of span{a1, b1}.
    """
    grad = jet.gradient(z0)
    size = float(np.linalg.norm(grad))
    if size == 0:
        raise InvalidArgument("grad H vanishes: no transverse section at a rest point")
    a1 = SYMPLECTIC_J @ grad / size
    b1 = grad / size

    projected = [u - symplectic_form(u, b1) * a1 + symplectic_form(u, a1) * b1 for u in np.eye(4)]
    pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    i, j = max(pairs, key=lambda ij: abs(symplectic_form(projected[ij[0]], projected[ij[1]])))
    a2 = projected[i] / np.linalg.norm(projected[i])
    b2 = projected[j] / symplectic_form(a2, projected[j])
    return np.column_stack([a1, a2, b1, b2])


def _variational_flow(jet: HamiltonianJet, z0: Array, period: float, tol: float) -> tuple[Array, Array]:
    def rhs(_t: float, w: Array) -> Array:
        z, d = w[:4], w[4:].reshape(4, 4)
        grad = jet.gradient(z)
        return np.concatenate([SYMPLECTIC_J @ grad, (SYMPLECTIC_J @ jet.hessian(z) @ d).ravel()])

    start = np.concatenate([z0, np.eye(4).ravel()])
    solution = solve_ivp(rhs, (0.0, period), start, method="RK45", rtol=tol, atol=tol)
    if solution.status == -1:
        raise StepFailure(f"variational integration failed: {solution.message}")
    end = solution.y[:, -1]
    return end[:4], end[4:].reshape(4, 4)


def _initial_point(system: MagneticSystem, orbit: DiscreteLoop, k: float) -> Array:
    nodes = orbit.nodes
    previous = nodes[-1] - orbit.closing_shift
    v0 = orbit.size * (nodes[1] - previous) / (2.0 * orbit.period)
    v0 = v0 * np.sqrt(k / float(system.energy(nodes[0], v0)))
    return np.concatenate([nodes[0], legendre(system, nodes[0], v0)])


def _shoot(
    jet: HamiltonianJet,
    z0: Array,
    period: float,
    k: float,
    shift: Array,
    tol: float,
    iterations: int = 8,
) -> tuple[Array, float, float]:
    """Gauss-Newton on phi_T(z0) - z0 - shift = 0, H(z0) = k with the fastest q-coordinate held."""
    velocity = jet.vector_field(z0)[:2]
    free = [c for c in range(4) if c != int(np.argmax(np.abs(velocity)))]

    def residual(z: Array, t: float) -> tuple[Array, Array, Array]:
        end, d = _variational_flow(jet, z, t, tol)
        r = np.concatenate([end - z - shift, [jet.value(z) - k]])
        return r, end, d

    r, end, d = residual(z0, period)
    best = (z0, period, float(np.linalg.norm(r)))
    for step in range(iterations):
        if best[2] < 1e3 * tol:
            break
        jac = np.zeros((5, 4))
        jac[:4, :3] = (d - np.eye(4))[:, free]
        jac[4, :3] = jet.gradient(z0)[free]
        jac[:4, 3] = jet.vector_field(end)
        delta, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        z0 = z0.copy()
        z0[free] += delta[:3]
        period = period + delta[3]
        r, end, d = residual(z0, period)
        error = float(np.linalg.norm(r))
        logger.debug("shooting step %d: closing error %.3e", step, error)
        if error >= best[2]:
            break
        best = (z0, period, error)
    return best


def monodromy(
    system: MagneticSystem,
    orbit: DiscreteLoop,
    k: Optional[float] = None,
    tol: float = 1e-11,
    critical_tol: float = 1e-5,
    refine: bool = True,
) -> Monodromy:
    """
    Integrate the variational equations along ``orbit`` for one period.

    The discrete orbit fixes the initial point and period; with ``refine`` a
    shooting correction closes the continuous orbit before D is taken.
    """
    energy = k if k is not None else critical_energy(system, orbit)
    residual = float(np.max(el_residual(system, orbit, energy)))
    if residual > critical_tol * max(1.0, np.sqrt(2.0 * energy)):
        raise NotCritical(f"EL residual {residual:.3e} too large for a monodromy", {"residual": residual})

    jet = HamiltonianJet(system)
    z0 = _initial_point(system, orbit, energy)
    shift = np.array([0.0, float(orbit.winding), 0.0, 0.0])
    period = orbit.period
    if refine:
        z0, period, _ = _shoot(jet, z0, period, energy, shift, tol)
    end, matrix = _variational_flow(jet, z0, period, tol)
    closing = float(np.linalg.norm(end - z0 - shift))

    basis = symplectic_basis(jet, z0)
    reduced = np.linalg.solve(basis, matrix @ basis)
    result = Monodromy(
        matrix=matrix,
        poincare=reduced[np.ix_([1, 3], [1, 3])],
        initial_point=z0,
        period=period,
        energy=energy,
        closing_error=closing,
    )
    if result.symplectic_defect > SYMPLECTIC_LIMIT:
        raise SymplecticityLoss(
            f"D^T J D deviates from J by {result.symplectic_defect:.3e}",
            {"defect": result.symplectic_defect},
        )
    logger.debug(
        "monodromy: T=%.8g closing=%.2e tr P=%.6f defect=%.2e",
        period,
        closing,
        result.trace,
        result.symplectic_defect,
    )
    return result
