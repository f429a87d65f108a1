import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from fractions import Fraction
from typing import Union

from src.common.constants import SURFACE_DIM
from src.common.exceptions import InvalidArgument
from src.index.models import IndexReport, IterateCounts

# slack for comparing integer indices with multiples of a fitted slope
_SLACK = 1e-9


class Threshold(StrEnum):
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    checked: list[int] = field(default_factory=list)
    violations: list[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def _within(lower: float, value: int, upper: float) -> bool:
    return lower - _SLACK <= value <= upper + _SLACK


def check_iterates(
    mhat: float,
    table: Sequence[IterateCounts],
    dim_m: int = SURFACE_DIM,
) -> list[InequalityCheck]:
    """
    Index bounds along the iterates, each reported with its offending n.

      free period:      n mhat - dim <= m(g^n)   <= n mhat + dim - m0(g^n) + 1
      fixed period:     n mhat - dim <= m_T(g^n) <= n mhat + dim - m0_T(g^n)
      doubled:          the free-period bounds for g^2 (mean index 2 mhat) along g^{2j}
      vanishing case:   0 <= m(g^n) <= dim + 1 - m0(g^n), checked only when mhat = 0
    """
    free = InequalityCheck("free-period")
    fixed = InequalityCheck("fixed-period")
    doubled = InequalityCheck("doubled")
    vanishing = InequalityCheck("vanishing")

    for row in table:
        n = row.n
        free.checked.append(n)
        if not _within(n * mhat - dim_m, row.m, n * mhat + dim_m - row.m0 + 1):
            free.violations.append(n)
        fixed.checked.append(n)
        if not _within(n * mhat - dim_m, row.m_fixed, n * mhat + dim_m - row.m0_fixed):
            fixed.violations.append(n)
        if n % 2 == 0:
            j = n // 2
            doubled.checked.append(n)
            if not _within(j * 2 * mhat - dim_m, row.m, j * 2 * mhat + dim_m - row.m0 + 1):
                doubled.violations.append(n)
        if abs(mhat) <= _SLACK:
            vanishing.checked.append(n)
            if not _within(0, row.m, dim_m + 1 - row.m0):
                vanishing.violations.append(n)

    return [free, fixed, doubled, vanishing]


def _floor_ratio(numerator: int, mhat: float) -> int:
    """Largest j with j * mhat <= numerator, in exact rational arithmetic."""
    return math.floor(Fraction(numerator) / Fraction(mhat))


def vanishing_threshold(q: int, dim_m: int, mean_indices: Iterable[float]) -> Union[int, Threshold]:
    """
    l0(q) = 1 + max floor((q + dim) / mhat_i) over the orbits with mhat_i != 0.

    Past l0 the iterates of orbits with positive mean index have index above q + dim.
    Returns Threshold.UNBOUNDED when every mean index vanishes.
    """
    if q < dim_m + 2:
        raise InvalidArgument(f"q must be at least dim + 2 = {dim_m + 2}, got {q}")
    values = list(mean_indices)
    if any(not math.isfinite(v) or v < 0 for v in values):
        raise InvalidArgument("mean indices are finite and nonnegative")
    positive = [v for v in values if v != 0]
    if not positive:
        return Threshold.UNBOUNDED
    return 1 + max(_floor_ratio(q + dim_m, v) for v in positive)


def check_iteration_inequalities(report: IndexReport, dim_m: int = SURFACE_DIM) -> list[InequalityCheck]:
    return check_iterates(report.mhat, report.iterates, dim_m)


def escape_index_bound(report: IndexReport, dim_m: int = SURFACE_DIM) -> bool:
    """m + m0 <= 2 dim + 1."""
    return report.m + report.m0 <= 2 * dim_m + 1
