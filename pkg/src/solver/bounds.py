"""A priori bounds on periods, lengths and speeds of critical points below an action level."""

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.common.exceptions import InvalidArgument, SubcriticalEnergy


class PeriodWindow(BaseModel):
    """delta(k) <= T <= T_max; the solver clamps T to [delta/2, 2 T_max]."""

    model_config = ConfigDict(frozen=True)

    delta: float
    t_max: float

    @property
    def lower(self) -> float:
        return 0.5 * self.delta

    @property
    def upper(self) -> float:
        return 2.0 * self.t_max

    def contains(self, period: float) -> bool:
        return self.lower <= period <= self.upper


def period_bounds(
    k: float,
    action_cap: float,
    l_alpha: float,
    theta_inf: float,
    c_u_estimate: float,
    bound_b: float = 0.0,
) -> PeriodWindow:
    """
    delta = 2 l^2 / (l^2 + 4A + 4 |theta|^2) and T_max = (A + B) / (k - c_u).

    Raises SubcriticalEnergy for k <= c_u: the action is unbounded below there.
    """
    if k <= c_u_estimate:
        raise SubcriticalEnergy(
            f"k={k} is not above the critical value estimate {c_u_estimate}",
            {"k": k, "c_u": c_u_estimate},
        )
    if l_alpha <= 0:
        raise InvalidArgument(f"minimal length must be positive, got {l_alpha}")
    if action_cap <= 0:
        raise InvalidArgument(f"action cap must be positive, got {action_cap}")

    delta = 2.0 * l_alpha**2 / (l_alpha**2 + 4.0 * action_cap + 4.0 * theta_inf**2)
    t_max = (action_cap + bound_b) / (k - c_u_estimate)
    return PeriodWindow(delta=delta, t_max=t_max)


def shifted_period_bound(action_cap: float, shift: float, k: float, c_u_estimate: float) -> float:
    """(A + max{0, B'}) / (k - c_u) for an action shifted by B'."""
    if k <= c_u_estimate:
        raise SubcriticalEnergy(f"k={k} is not above {c_u_estimate}")
    return (action_cap + max(0.0, shift)) / (k - c_u_estimate)


def length_bound(action_cap: float, period_cap: float, theta_inf: float) -> float:
    """D = 2 (A d + d^2 |theta|^2)^(1/2): bound on the length, and on the speed at critical points."""
    return float(2.0 * np.sqrt(action_cap * period_cap + period_cap**2 * theta_inf**2))


def energy_bound(period: float, action_cap: float, theta_inf: float) -> float:
    """4T (A + |theta|^2) / (2 - T): bound on int |x'|^2 for short periods 0 < T < 2."""
    if not 0 < period < 2:
        raise InvalidArgument(f"energy bound needs 0 < T < 2, got {period}")
    return 4.0 * period * (action_cap + theta_inf**2) / (2.0 - period)
