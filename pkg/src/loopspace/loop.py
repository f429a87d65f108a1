from dataclasses import dataclass, replace
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from src.common.constants import MIN_NODES, SURFACE_DIM
from src.common.exceptions import InvalidArgument
from src.geometry.chart import Array


@dataclass(frozen=True, eq=False)
class DiscreteLoop:
    """
    N nodes x_0..x_{N-1} in the chart with the closing rule x_N = x_0 + (0, winding).

    ``period`` is the real period T; node j sits at parameter time j/N.
    """

    nodes: Array
    period: float
    winding: int

    def __post_init__(self) -> None:
        nodes = np.array(self.nodes, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != SURFACE_DIM:
            raise InvalidArgument(f"loop nodes must have shape (N, 2), got {nodes.shape}")
        if nodes.shape[0] < MIN_NODES:
            raise InvalidArgument(f"loops need at least {MIN_NODES} nodes, got {nodes.shape[0]}")
        if not (np.isfinite(self.period) and self.period > 0):
            raise InvalidArgument(f"loop period must be positive, got {self.period}")
        if not np.all(np.isfinite(nodes)):
            raise InvalidArgument("loop nodes must be finite")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "period", float(self.period))
        object.__setattr__(self, "winding", int(self.winding))

    @property
    def size(self) -> int:
        return self.nodes.shape[0]

    @property
    def closing_shift(self) -> Array:
        return np.array([0.0, float(self.winding)])

    def next_nodes(self) -> Array:
        """x_{j+1} for j = 0..N-1, with the lift shift on the last one."""
        ahead = np.roll(self.nodes, -1, axis=0)
        ahead[-1] += self.closing_shift
        return ahead

    def differences(self) -> Array:
        return self.next_nodes() - self.nodes

    def midpoints(self) -> Array:
        return 0.5 * (self.next_nodes() + self.nodes)

    def velocities(self) -> Array:
        """Physical-time velocities N (x_{j+1} - x_j) / T on each segment."""
        return self.size * self.differences() / self.period

    @property
    def x_range(self) -> tuple[float, float]:
        return float(self.nodes[:, 0].min()), float(self.nodes[:, 0].max())

    def with_nodes(self, nodes: ArrayLike) -> "DiscreteLoop":
        return replace(self, nodes=np.asarray(nodes, dtype=float))

    def with_period(self, period: float) -> "DiscreteLoop":
        return replace(self, period=period)

    def as_vector(self) -> Array:
        """Flattened (x_0x, x_0y, ..., x_{N-1}y, T): the Hessian variable order."""
        return np.concatenate([self.nodes.ravel(), [self.period]])

    @classmethod
    def from_vector(cls, vector: ArrayLike, winding: int) -> "DiscreteLoop":
        vec = np.asarray(vector, dtype=float)
        return cls(vec[:-1].reshape(-1, SURFACE_DIM), float(vec[-1]), winding)

    @classmethod
    def circle(cls, x0: float, winding: int, period: float, size: int, y0: float = 0.0) -> "DiscreteLoop":
        """The loop x = x0 traversed |winding| times at uniform parameter speed."""
        ys = y0 + winding * np.arange(size) / size
        return cls(np.column_stack([np.full(size, float(x0)), ys]), period, winding)

    def to_payload(self) -> dict[str, Any]:
        return {
            "N": self.size,
            "T": self.period,
            "winding": self.winding,
            "nodes": self.nodes.tolist(),
        }

    @classmethod
    def from_payload(cls, payload: dict[str, Any]) -> "DiscreteLoop":
        loop = cls(np.asarray(payload["nodes"], dtype=float), payload["T"], payload["winding"])
        if loop.size != payload["N"]:
            raise InvalidArgument(f"payload declares N={payload['N']} but holds {loop.size} nodes")
        return loop


@dataclass(frozen=True)
class TangentPerturbation:
    """A tangent vector [xi, alpha] to the free-period loop space."""

    xi: Array
    alpha: float

    def as_vector(self) -> Array:
        return np.concatenate([np.asarray(self.xi, dtype=float).ravel(), [self.alpha]])

    @classmethod
    def from_vector(cls, vector: ArrayLike) -> "TangentPerturbation":
        vec = np.asarray(vector, dtype=float)
        return cls(vec[:-1].reshape(-1, SURFACE_DIM), float(vec[-1]))

    @property
    def dimension(self) -> int:
        return self.xi.size + 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_vector()))


def winding(loop: DiscreteLoop) -> int:
    return loop.winding


def rotate_loop(loop: DiscreteLoop, shift: int) -> DiscreteLoop:
    """Start the loop at node ``shift``: the circle action on parametrizations."""
    size = loop.size
    index = np.arange(size) + shift
    wraps = np.floor_divide(index, size)
    nodes = loop.nodes[np.mod(index, size)] + np.outer(wraps, loop.closing_shift)
    return loop.with_nodes(nodes)


def iterate_loop(loop: DiscreteLoop, n: int) -> DiscreteLoop:
    """The n-fold cover: nN nodes, period nT, winding n * winding."""
    if n < 1:
        raise InvalidArgument(f"iteration count must be >= 1, got {n}")
    if n == 1:
        return loop
    turns = [loop.nodes + i * loop.closing_shift for i in range(n)]
    return DiscreteLoop(np.concatenate(turns), n * loop.period, n * loop.winding)


def resample_loop(loop: DiscreteLoop, size: int) -> DiscreteLoop:
    """Periodic linear resampling to ``size`` nodes (same period and winding)."""
    closed = np.vstack([loop.nodes, loop.nodes[:1] + loop.closing_shift])
    source = np.linspace(0.0, 1.0, loop.size + 1)
    target = np.arange(size) / size
    nodes = np.column_stack([np.interp(target, source, closed[:, c]) for c in range(SURFACE_DIM)])
    return DiscreteLoop(nodes, loop.period, loop.winding)
