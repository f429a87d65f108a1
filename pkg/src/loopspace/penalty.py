from dataclasses import dataclass, field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

import numpy as np
from numpy.typing import ArrayLike

from src.common.exceptions import InvalidArgument
from src.geometry.chart import Array


class PenaltyProfile(StrEnum):
    CUBIC = "cubic"
    QUARTIC = "quartic"


_POWERS = {PenaltyProfile.CUBIC: 3, PenaltyProfile.QUARTIC: 4}


@dataclass(frozen=True)
class PenaltyFamily:
    """
    f_sigma(q) = phi(|x(q) - x_c| - sigma) with phi(s) = s^p for s > 0 and 0 otherwise.

    Only the x-coordinate enters the distance: the y-lift of a loop is not a
    position on the cylinder.
    """

    sigma: float
    center: Array = field(default_factory=lambda: np.zeros(2))
    profile: PenaltyProfile = PenaltyProfile.CUBIC

    def __post_init__(self) -> None:
        if self.sigma <= 0:
            raise InvalidArgument(f"penalty index sigma must be positive, got {self.sigma}")
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))

    @property
    def power(self) -> int:
        return _POWERS[self.profile]

    def _excess(self, q: ArrayLike) -> tuple[Array, Array]:
        offset = np.asarray(q, dtype=float)[..., 0] - self.center[0]
        return np.abs(offset) - self.sigma, np.sign(offset)

    def value(self, q: ArrayLike) -> Array:
        s, _ = self._excess(q)
        return np.where(s > 0, np.maximum(s, 0.0) ** self.power, 0.0)

    def gradient(self, q: ArrayLike) -> Array:
        s, sign = self._excess(q)
        p = self.power
        slope = np.where(s > 0, p * np.maximum(s, 0.0) ** (p - 1), 0.0)
        return np.stack([slope * sign, np.zeros_like(slope)], axis=-1)

    def hessian(self, q: ArrayLike) -> Array:
        s, _ = self._excess(q)
        p = self.power
        curvature = np.where(s > 0, p * (p - 1) * np.maximum(s, 0.0) ** (p - 2), 0.0)
        out = np.zeros(np.shape(curvature) + (2, 2))
        out[..., 0, 0] = curvature
        return out

    def is_active(self, nodes: ArrayLike, margin: float = 0.0) -> bool:
        """True when any node lies within ``margin`` of the penalty support."""
        s, _ = self._excess(nodes)
        return bool(np.any(s > -margin))
