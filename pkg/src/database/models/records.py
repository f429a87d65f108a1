import math
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from typing import Any, ClassVar, Optional

from pydantic import Field, field_validator, model_validator

from src.common.exceptions import ToolkitError
from src.database.models.base import Base
from src.dynamics.poincare import ScanResult, SectionGrid
from src.index.iteration import InequalityCheck
from src.index.models import IndexReport
from src.loopspace.loop import DiscreteLoop
from src.mane.estimate import CriticalValueBracket
from src.solver.finder import OrbitSolution


def _finite_or_none(value: float) -> Optional[float]:
    return float(value) if math.isfinite(value) else None


class CheckResult(Base):
    name: str
    checked: list[int] = Field(default_factory=list)
    violations: list[int] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    @classmethod
    def from_check(cls, check: InequalityCheck) -> "CheckResult":
        return cls(name=check.name, checked=list(check.checked), violations=list(check.violations))


class OrbitRecord(Base):
    kind: ClassVar[str] = "orbit"

    system: str
    system_hash: str
    k: float = Field(gt=0.0)
    winding: int
    sigma: float = Field(gt=0.0)
    action: float
    el_residual: float = Field(ge=0.0)
    speed_residual: float = Field(ge=0.0)
    penalty_active: bool
    x_star: float
    loop: dict[str, Any]
    seed: int = 0
    index: Optional[IndexReport] = None
    invariants: dict[str, bool] = Field(default_factory=dict)
    checks: list[CheckResult] = Field(default_factory=list)
    escape_bound: Optional[bool] = None

    @field_validator("winding")
    @classmethod
    def _noncontractible(cls, value: int) -> int:
        if value == 0:
            raise ValueError("orbit records need a noncontractible winding class")
        return value

    @model_validator(mode="after")
    def _loop_matches(self) -> "OrbitRecord":
        try:
            loop = DiscreteLoop.from_payload(self.loop)
        except (KeyError, ToolkitError) as exc:
            raise ValueError(f"unreadable loop payload: {exc}") from exc
        if loop.winding != self.winding:
            raise ValueError(f"loop winding {loop.winding} differs from record winding {self.winding}")
        return self

    def to_loop(self) -> DiscreteLoop:
        return DiscreteLoop.from_payload(self.loop)

    @property
    def passed(self) -> bool:
        return all(self.invariants.values()) and all(c.passed for c in self.checks)

    @classmethod
    def from_solution(
        cls, system_name: str, system_hash: str, solution: OrbitSolution, seed: int = 0
    ) -> "OrbitRecord":
        return cls(
            system=system_name,
            system_hash=system_hash,
            k=solution.k,
            winding=solution.winding,
            sigma=solution.sigma,
            action=solution.action,
            el_residual=solution.el_residual,
            speed_residual=solution.speed_residual,
            penalty_active=solution.penalty_active,
            x_star=solution.x_star,
            loop=solution.loop.to_payload(),
            seed=seed,
        )


class BracketStatus(StrEnum):
    CONVERGED = "converged"
    BUDGET = "budget"


class BracketRecord(Base):
    kind: ClassVar[str] = "bracket"

    system: str
    system_hash: str
    bracket: CriticalValueBracket
    # "budget" when the bisection stopped before reaching tol
    status: BracketStatus = BracketStatus.CONVERGED

    @model_validator(mode="after")
    def _ordered(self) -> "BracketRecord":
        if self.bracket.lower > self.bracket.upper:
            raise ValueError("bracket lower end exceeds its upper end")
        return self


class ScanSummary(Base):
    kind: ClassVar[str] = "scan"

    system: str
    system_hash: str
    k: float = Field(gt=0.0)
    winding: int
    grid: SectionGrid
    seeds: int = Field(ge=0)
    no_return: int = Field(ge=0)
    min_residual: Optional[float] = None
    fixed_points: list[tuple[float, float]] = Field(default_factory=list)
    csv: Optional[str] = None
    turning_points: int = Field(default=0, ge=0)
    convexity_violations: int = Field(default=0, ge=0)
    min_turning_acceleration: Optional[float] = None

    @classmethod
    def from_scan(cls, system_name: str, system_hash: str, scan: ScanResult, csv: Optional[str] = None) -> "ScanSummary":
        return cls(
            system=system_name,
            system_hash=system_hash,
            k=scan.k,
            winding=scan.winding,
            grid=scan.grid,
            seeds=len(scan.seeds),
            no_return=scan.no_return,
            min_residual=_finite_or_none(scan.min_residual),
            fixed_points=[(float(x), float(v)) for x, v in scan.fixed_points],
            csv=csv,
        )


RECORD_TYPES: dict[str, type[Base]] = {
    OrbitRecord.kind: OrbitRecord,
    BracketRecord.kind: BracketRecord,
    ScanSummary.kind: ScanSummary,
}
