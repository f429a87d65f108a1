from typing import Optional

import numpy as np

from src.common.constants import KERNEL_TOL, NULL_TOL
from src.core.logger import logger
from src.dynamics.monodromy import BlockKind, Monodromy, monodromy
from src.geometry.system import MagneticSystem
from src.index.iteration import check_iteration_inequalities
from src.index.models import IndexReport
from src.index.morse import DEFAULT_BUDGET, critical_hessian, mean_index, spectral_counts
from src.loopspace.action import critical_energy
from src.loopspace.loop import DiscreteLoop

# slope and rotation estimates of the mean index further apart than this flag the orbit
MEAN_INDEX_DISCREPANCY = 0.5


def monodromy_mean_index(mono: Monodromy, m_fixed: int, kernel_tol: float = KERNEL_TOL) -> float:
    """
    Mean index from the rotation of the Poincare block.

    An elliptic block turning by 2 pi j + phi over one period gives
    (2 pi j + phi) / pi, with j read off the fixed-period index; hyperbolic
    and parabolic blocks give m_T.
    """
    if mono.kind(kernel_tol) != BlockKind.ELLIPTIC:
        return float(m_fixed)
    turns = max((m_fixed - 1) // 2, 0)
    return (2.0 * np.pi * turns + mono.rotation_angle) / np.pi


def _pairs(values: np.ndarray) -> list[tuple[float, float]]:
    return [(float(v.real), float(v.imag)) for v in values]


def build_index_report(
    system: MagneticSystem,
    orbit: DiscreteLoop,
    k: Optional[float] = None,
    n_max: int = 12,
    null_tol: float = NULL_TOL,
    kernel_tol: float = KERNEL_TOL,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> IndexReport:
    energy = critical_energy(system, orbit) if k is None else k
    full = critical_hessian(system, orbit, energy, critical_tol=1e-5)
    m, m0 = spectral_counts(full, null_tol)
    m_fixed, m0_fixed = spectral_counts(full[:-1, :-1], null_tol)

    mono = monodromy(system, orbit, energy)
    mhat, table = mean_index(system, orbit, n_max, null_tol, energy, budget, workers)
    mhat_mono = monodromy_mean_index(mono, m_fixed, kernel_tol)
    flagged = abs(mhat - mhat_mono) > MEAN_INDEX_DISCREPANCY
    kind = mono.kind(kernel_tol)

    report = IndexReport(
        m=m,
        m0=m0,
        m_fixed=m_fixed,
        m0_fixed=m0_fixed,
        m0_monodromy=mono.kernel_dimension(kernel_tol),
        mhat=mhat,
        mhat_monodromy=mhat_mono,
        mhat_flagged=flagged,
        null_tol=null_tol,
        kernel_tol=kernel_tol,
        block_kind=kind.value,
        poincare_trace=mono.trace,
        poincare_nullity=mono.poincare_kernel_dimension(kernel_tol),
        rotation_angle=mono.rotation_angle if kind == BlockKind.ELLIPTIC else None,
        eigenvalues=_pairs(mono.eigenvalues),
        poincare_eigenvalues=_pairs(mono.poincare_eigenvalues),
        iterates=table,
    )

    if flagged:
        logger.warning("mean index mismatch: slope %.4f vs rotation %.4f", mhat, mhat_mono)
    broken = [name for name, ok in report.invariants().items() if not ok]
    if broken:
        logger.warning("index invariants failed: %s", ", ".join(broken))
    if not report.quotient_identity:
        logger.info(
            "quotient identity not met (ker Hess %d, ker(I-P) %d); the transversality may degenerate",
            m0,
            report.poincare_nullity,
        )
    violations = [c.name for c in check_iteration_inequalities(report) if not c.passed]
    if violations:
        logger.warning("iteration inequalities violated: %s", ", ".join(violations))
    return report
