from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class IterateCounts(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    m: int = Field(ge=0)
    m0: int = Field(ge=0)
    m_fixed: int = Field(ge=0)
    m0_fixed: int = Field(ge=0)


class IndexReport(BaseModel):
    """
    Indices of one refined orbit.

    ``m``/``m0`` are the free-period index and nullity, ``m_fixed``/``m0_fixed``
    their fixed-period versions, ``m0_monodromy`` = dim ker(I - D).
    """

    model_config = ConfigDict(frozen=True)

    m: int
    m0: int
    m_fixed: int
    m0_fixed: int
    m0_monodromy: int
    mhat: float
    mhat_monodromy: float
    mhat_flagged: bool
    null_tol: float
    kernel_tol: float
    block_kind: str
    poincare_trace: float
    poincare_nullity: int
    rotation_angle: Optional[float] = None
    eigenvalues: list[tuple[float, float]] = Field(default_factory=list)
    poincare_eigenvalues: list[tuple[float, float]] = Field(default_factory=list)
    iterates: list[IterateCounts] = Field(default_factory=list)

    def invariants(self, dim_m: int = 2) -> dict[str, bool]:
        return {
            "index_gap": 0 <= self.m - self.m_fixed <= 1,
            "nullity_gap": self.m0_fixed - 1 <= self.m0 <= self.m0_fixed <= 2 * dim_m,
            "nullity_monodromy": self.m0_fixed == self.m0_monodromy,
            "circle_direction": self.m0 >= 1,
        }

    @property
    def quotient_identity(self) -> bool:
        """dim ker Hess - 1 = dim ker(I - P)."""
        return self.m0 - 1 == self.poincare_nullity
