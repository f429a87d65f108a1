from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.common.constants import MANE_GRID, MANE_WINDOW
from src.common.exceptions import BudgetExceeded, InvalidArgument
from src.core.logger import logger
from src.geometry.system import MagneticSystem
from src.mane.infsup import mane_upper_infsup
from src.mane.witness import WitnessFamily, mane_lower_witness


class CriticalValueBracket(BaseModel):
    """
    lower <= c <= upper. ``gap`` is the finite-basis inf-sup minus the pointwise
    sup_x min_w H; ``contractible`` marks a c_u bracket from winding-0 witnesses.
    """

    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float
    pointwise: float
    gap: float
    tol: float
    steps: int
    contractible: bool = False
    asymmetric: bool = False
    witness_k: Optional[float] = None
    witness_action: Optional[float] = None
    witness: Optional[dict[str, Any]] = None
    profile_x: list[float] = Field(default_factory=list)
    profile_u: list[float] = Field(default_factory=list)
    x_window: tuple[float, float] = MANE_WINDOW
    grid: int = MANE_GRID

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def estimate_c(
    system: MagneticSystem,
    tol: float = 1e-2,
    contractible: bool = False,
    x_window: tuple[float, float] = MANE_WINDOW,
    grid: int = MANE_GRID,
    max_steps: int = 60,
    descend: int = 0,
) -> CriticalValueBracket:
    """
    Bisect on k between 0 and the inf-sup upper bound; a witness at the trial k
    raises the lower end, a failed trial only narrows the search.

    Raises BudgetExceeded (carrying the best bracket) when the steps run out or
    the trials stop finding witnesses before the bracket is narrower than tol.
    """
    if tol <= 0:
        raise InvalidArgument(f"tol must be positive, got {tol}")
    bound = mane_upper_infsup(system, x_window, grid, grid)
    family = WitnessFamily.CONTRACTIBLE if contractible else WitnessFamily.CIRCLES
    upper = bound.value
    lower, search_hi = 0.0, upper
    witness = None
    steps = 0

    def bracket() -> CriticalValueBracket:
        xs, us = bound.potential()
        return CriticalValueBracket(
            lower=lower,
            upper=upper,
            pointwise=bound.pointwise,
            gap=bound.gap,
            tol=tol,
            steps=steps,
            contractible=contractible,
            asymmetric=bound.asymmetric,
            witness_k=witness.k if witness else None,
            witness_action=witness.action if witness else None,
            witness=witness.loop.to_payload() if witness else None,
            profile_x=xs.tolist(),
            profile_u=us.tolist(),
            x_window=x_window,
            grid=grid,
        )

    while upper - lower >= tol:
        if steps >= max_steps or search_hi - lower < 0.25 * tol:
            raise BudgetExceeded(
                f"bracket [{lower:.6g}, {upper:.6g}] still wider than {tol}",
                best=bracket(),
                details={"steps": steps},
            )
        trial = 0.5 * (lower + search_hi)
        found = mane_lower_witness(system, trial, family, x_range=x_window, descend=descend)
        steps += 1
        if found is not None:
            lower, witness = trial, found
        else:
            search_hi = trial
        logger.info("critical value bracket [%.6g, %.6g] after trial k=%.6g", lower, upper, trial)

    if not np.isfinite(upper):
        raise BudgetExceeded("upper bound is not finite", best=bracket())
    return bracket()
