from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.common.constants import DEFAULT_SIGMA_SCHEDULE, G_TOL, MIN_NODES, NEWTON_TOL, PENALTY_MARGIN
from src.loopspace.penalty import PenaltyProfile


class SolveOptions(BaseModel):
    """
    Knobs of the penalized search.

    ``action_cap`` is the level A entering the period bounds; ``bound_b`` is the
    constant B of the upper period bound.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    nodes: int = Field(default=64, ge=MIN_NODES)
    sigma_schedule: tuple[float, ...] = DEFAULT_SIGMA_SCHEDULE
    action_cap: float = Field(default=10.0, gt=0.0)
    bound_b: float = Field(default=0.0, ge=0.0)
    c_u_estimate: float = 0.0
    l_alpha: Optional[float] = Field(default=None, gt=0.0)
    max_iterations: int = Field(default=5000, ge=1)
    g_tol: float = Field(default=G_TOL, gt=0.0)
    newton_tol: float = Field(default=NEWTON_TOL, gt=0.0)
    newton_max_iterations: int = Field(default=30, ge=1)
    newton_gate: float = Field(default=1e-3, gt=0.0)
    trust_radius: float = Field(default=0.1, gt=0.0)
    null_tol: float = Field(default=1e-9, gt=0.0)
    x_init_grid: tuple[float, ...] = (0.0,)
    init_noise: float = Field(default=0.0, ge=0.0)
    seed: int = 0
    penalty_margin: float = Field(default=PENALTY_MARGIN, ge=0.0)
    penalty_profile: PenaltyProfile = PenaltyProfile.CUBIC
    el_tol: float = Field(default=1e-6, gt=0.0)
    speed_tol: float = Field(default=1e-6, gt=0.0)
    collapse_limit: int = Field(default=3, ge=1)

    @field_validator("sigma_schedule")
    @classmethod
    def _increasing(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if not value:
            raise ValueError("sigma schedule must not be empty")
        if any(s <= 0 for s in value):
            raise ValueError("sigma values must be positive")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("sigma schedule must be strictly increasing")
        return value

    @field_validator("x_init_grid")
    @classmethod
    def _nonempty(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if not value:
            raise ValueError("x_init_grid must hold at least one start")
        return value
