from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike

from src.geometry.chart import Array
from src.geometry.system import MagneticSystem


@dataclass(frozen=True)
class State:
    """Chart point q = (x, y-lift) and velocity v = (vx, vy)."""

    q: Array
    v: Array

    @classmethod
    def of(cls, q: ArrayLike, v: ArrayLike) -> "State":
        return cls(np.asarray(q, dtype=float).copy(), np.asarray(v, dtype=float).copy())

    @classmethod
    def from_vector(cls, s: ArrayLike) -> "State":
        vec = np.asarray(s, dtype=float)
        return cls(vec[:2].copy(), vec[2:4].copy())

    def as_vector(self) -> Array:
        return np.concatenate([self.q, self.v])

    def energy(self, system: MagneticSystem) -> float:
        return float(system.energy(self.q, self.v))


@dataclass(frozen=True)
class Trajectory:
    t: Array
    states: Array
    tol: float
    energy_drift: float
    events: dict[str, tuple[Array, Array]] = field(default_factory=dict)

    @property
    def final(self) -> State:
        return State.from_vector(self.states[-1])

    def to_frame(self, system: MagneticSystem) -> pd.DataFrame:
        """Columns t, x, y, vx, vy, E, p_x, p_y."""
        q, v = self.states[:, :2], self.states[:, 2:]
        p = legendre(system, q, v)
        return pd.DataFrame(
            {
                "t": self.t,
                "x": q[:, 0],
                "y": q[:, 1],
                "vx": v[:, 0],
                "vy": v[:, 1],
                "E": system.energy(q, v),
                "p_x": p[:, 0],
                "p_y": p[:, 1],
            }
        )


def legendre(system: MagneticSystem, q: ArrayLike, v: ArrayLike) -> Array:
    """Fibre derivative p = g v + theta."""
    system.chart.check_positive(q)
    vec = np.asarray(v, dtype=float)
    return np.einsum("...ij,...j->...i", system.chart.metric(q), vec) + system.theta(q)


def legendre_inverse(system: MagneticSystem, q: ArrayLike, p: ArrayLike) -> Array:
    system.chart.check_positive(q)
    shifted = np.asarray(p, dtype=float) - system.theta(q)
    return np.linalg.solve(system.chart.metric(q), shifted[..., None])[..., 0]
