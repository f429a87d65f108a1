"""Morse index and nullity of refined orbits from the discrete Hessian spectrum."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.common.constants import NULL_TOL
from src.common.exceptions import BudgetExceeded, InvalidArgument, NotCritical
from src.core.settings import ExecutorKind
from src.core.workers import run_parallel
from src.geometry.chart import Array
from src.index.models import IterateCounts
from src.geometry.system import MagneticSystem
from src.loopspace.action import critical_energy, el_residual, hessian
from src.loopspace.loop import DiscreteLoop, iterate_loop

# nodes times iterate count
DEFAULT_BUDGET = 4096


def spectral_counts(matrix: Array, tol_null: float = NULL_TOL) -> tuple[int, int]:
    """(#eigenvalues < -cut, #eigenvalues in [-cut, cut]) with cut = tol_null * spectral radius."""
    values = np.linalg.eigvalsh(matrix)
    cut = tol_null * float(np.max(np.abs(values)))
    return int(np.sum(values < -cut)), int(np.sum(np.abs(values) <= cut))


def critical_hessian(
    system: MagneticSystem,
    orbit: DiscreteLoop,
    k: Optional[float],
    critical_tol: float,
) -> Array:
    energy = critical_energy(system, orbit) if k is None else k
    residual = float(np.max(el_residual(system, orbit, energy)))
    if residual > critical_tol * max(1.0, np.sqrt(2.0 * energy)):
        raise NotCritical(f"EL residual {residual:.3e} exceeds the criticality gate", {"residual": residual})
    return hessian(system, orbit, energy)


def morse_index(
    system: MagneticSystem,
    orbit: DiscreteLoop,
    tol_null: float = NULL_TOL,
    k: Optional[float] = None,
    critical_tol: float = 1e-5,
) -> tuple[int, int]:
    """(m, m0) of the free-period Hessian."""
    return spectral_counts(critical_hessian(system, orbit, k, critical_tol), tol_null)


def fixed_period_index(
    system: MagneticSystem,
    orbit: DiscreteLoop,
    tol_null: float = NULL_TOL,
    k: Optional[float] = None,
    critical_tol: float = 1e-5,
) -> tuple[int, int]:
    """(m_T, m0_T): the same counts with the period row and column removed."""
    return spectral_counts(critical_hessian(system, orbit, k, critical_tol)[:-1, :-1], tol_null)


def translation_direction(orbit: DiscreteLoop, axis: int) -> Array:
    """Unit vector moving every node along chart axis ``axis`` with the period fixed."""
    direction = np.zeros((orbit.size, 2))
    direction[:, axis] = 1.0
    vector = np.concatenate([direction.ravel(), [0.0]])
    return vector / np.linalg.norm(vector)


def rotation_direction(orbit: DiscreteLoop) -> Array:
    """Central-difference tangent field (x', 0): the generator of the circle action."""
    nodes = orbit.nodes
    ahead = orbit.next_nodes()
    behind = np.roll(nodes, 1, axis=0)
    behind[0] -= orbit.closing_shift
    tangent = 0.5 * (ahead - behind)
    vector = np.concatenate([tangent.ravel(), [0.0]])
    return vector / np.linalg.norm(vector)


@dataclass(frozen=True, eq=False)
class _IterateTask:
    system: MagneticSystem
    orbit: DiscreteLoop
    k: float
    tol_null: float

    def __call__(self, n: int) -> IterateCounts:
        full = hessian(self.system, iterate_loop(self.orbit, n), self.k)
        m, m0 = spectral_counts(full, self.tol_null)
        m_fixed, m0_fixed = spectral_counts(full[:-1, :-1], self.tol_null)
        return IterateCounts(n=n, m=m, m0=m0, m_fixed=m_fixed, m0_fixed=m0_fixed)


def iterate_table(
    system: MagneticSystem,
    orbit: DiscreteLoop,
    n_max: int,
    tol_null: float = NULL_TOL,
    k: Optional[float] = None,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    executor: ExecutorKind = ExecutorKind.PROCESS,
) -> list[IterateCounts]:
    """Index and nullity (free and fixed period) of the iterates n = 1..n_max."""
    if n_max * orbit.size > budget:
        raise BudgetExceeded(
            f"{n_max} iterates of {orbit.size} nodes exceed the budget of {budget} nodes",
            details={"n_max": n_max, "nodes": orbit.size, "budget": budget},
        )
    energy = critical_energy(system, orbit) if k is None else k
    task = _IterateTask(system, orbit, energy, tol_null)
    return run_parallel(task, range(1, n_max + 1), workers=workers, executor=executor)


def slope(table: list[IterateCounts]) -> float:
    """Least-squares slope of m(gamma^n) against n."""
    ns = np.array([row.n for row in table], dtype=float)
    ms = np.array([row.m for row in table], dtype=float)
    return float(np.polyfit(ns, ms, 1)[0])


def mean_index(
    system: MagneticSystem,
    orbit: DiscreteLoop,
    n_max: int = 12,
    tol_null: float = NULL_TOL,
    k: Optional[float] = None,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> tuple[float, list[IterateCounts]]:
    """The slope estimate of the mean index with the table it was fitted on."""
    if n_max < 8:
        raise InvalidArgument(f"mean index needs n_max >= 8, got {n_max}")
    table = iterate_table(system, orbit, n_max, tol_null, k, budget, workers)
    return max(0.0, slope(table)), table
