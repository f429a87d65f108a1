"""
Return map of the section {y-lift integer} and a grid search for its fixed points.

Seeds (x, vx) on the section get vy from the energy condition with the sign
of the winding; a seed is followed until the y-lift has advanced by
``winding`` or x leaves the window.
"""

from dataclasses import dataclass, field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from functools import partial
from typing import Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.common.constants import FD_STEP, FP_TOL
from src.common.exceptions import InvalidArgument, NoReturn, StepFailure
from src.core.logger import logger
from src.core.settings import ExecutorKind
from src.core.workers import run_parallel
from src.dynamics.flow import flow, make_event, state_at_energy
from src.dynamics.state import State
from src.geometry.chart import Array
from src.geometry.system import MagneticSystem
from src.loopspace.loop import DiscreteLoop


class SeedClass(StrEnum):
    FIXED = "fixed"
    RETURNED = "returned"
    NO_RETURN = "no-return"
    INADMISSIBLE = "inadmissible"


class SectionGrid(BaseModel):
    """
    Seeds on a product grid x in [x_min, x_max], vx = f * sqrt(2k / g11(x, 0)),
    f in [-v_fraction, v_fraction].
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    x_min: float
    x_max: float
    nx: int = Field(default=101, ge=1)
    nv: int = Field(default=101, ge=1)
    v_fraction: float = Field(default=0.999, gt=0.0, lt=1.0)
    margin: float = Field(default=1.0, ge=0.0)
    max_time: float = Field(default=100.0, gt=0.0)

    @model_validator(mode="after")
    def _ordered(self) -> "SectionGrid":
        if self.x_max < self.x_min:
            raise ValueError("x_max must not be below x_min")
        return self

    @property
    def size(self) -> int:
        return self.nx * self.nv

    def xs(self) -> Array:
        return np.linspace(self.x_min, self.x_max, self.nx)

    def fractions(self) -> Array:
        fractions = np.linspace(-self.v_fraction, self.v_fraction, self.nv)
        if self.nv % 2 == 1:
            fractions[self.nv // 2] = 0.0
        return fractions


@dataclass(frozen=True)
class SeedReturn:
    x: float
    vx: float
    x_return: float = np.nan
    vx_return: float = np.nan
    time: float = np.nan
    kind: SeedClass = SeedClass.RETURNED

    @property
    def residual(self) -> float:
        if self.kind in (SeedClass.NO_RETURN, SeedClass.INADMISSIBLE):
            return np.inf
        return abs(self.x_return - self.x) + abs(self.vx_return - self.vx)


@dataclass(frozen=True)
class ScanResult:
    k: float
    winding: int
    grid: SectionGrid
    seeds: list[SeedReturn]
    fixed_points: list[tuple[float, float]] = field(default_factory=list)

    @property
    def no_return(self) -> int:
        return sum(1 for s in self.seeds if s.kind == SeedClass.NO_RETURN)

    @property
    def min_residual(self) -> float:
        residuals = [s.residual for s in self.seeds]
        return float(np.min(residuals)) if residuals else np.inf

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "seed": np.arange(len(self.seeds)),
                "x": [s.x for s in self.seeds],
                "vx": [s.vx for s in self.seeds],
                "residual": [s.residual for s in self.seeds],
                "classification": [s.kind.value for s in self.seeds],
            }
        )


@dataclass(frozen=True, eq=False)
class ReturnMap:
    """
    The first return to y0 + winding; picklable so seeds can fan out over processes.

    An infinite window end disables the corresponding exit event.
    """

    system: MagneticSystem
    k: float
    winding: int
    window: tuple[float, float]
    max_time: float
    tol: float = 1e-10

    def start_state(self, x: float, vx: float) -> State:
        start = state_at_energy(self.system, [x, 0.0], vx, self.k, float(np.sign(self.winding)))
        if start is None:
            raise InvalidArgument(f"no section state of energy {self.k} at x={x}, vx={vx}")
        return start

    def __call__(self, x: float, vx: float) -> tuple[float, float, float]:
        """(x, vx, time) at the return; raises NoReturn when the orbit leaves the window."""
        sign = float(np.sign(self.winding))
        start = self.start_state(x, vx)

        lo, hi = self.window
        target = float(self.winding)
        events = {"return": make_event(lambda _t, s: s[1] - target, terminal=True, direction=sign)}
        if np.isfinite(lo):
            events["exit_low"] = make_event(lambda _t, s: s[0] - lo, terminal=True, direction=-1.0)
        if np.isfinite(hi):
            events["exit_high"] = make_event(lambda _t, s: s[0] - hi, terminal=True, direction=1.0)
        trajectory = flow(self.system, start, self.max_time, self.tol, events=events)
        times, states = trajectory.events["return"]
        if len(times) == 0:
            raise NoReturn(f"seed ({x:.6g}, {vx:.6g}) left the window before returning")
        return float(states[0, 0]), float(states[0, 2]), float(times[0])

    def loop(self, point: tuple[float, float], nodes: int) -> DiscreteLoop:
        """The orbit through ``point`` sampled at ``nodes`` equal times over one return."""
        x, vx = point
        _, _, period = self(x, vx)
        times = period * np.arange(nodes) / nodes
        trajectory = flow(self.system, self.start_state(x, vx), period, self.tol, t_eval=times)
        return DiscreteLoop(trajectory.states[:, :2], period, self.winding)

    def seed(self, point: tuple[float, float]) -> SeedReturn:
        x, vx = point
        try:
            x_r, vx_r, t_r = self(x, vx)
        except InvalidArgument:
            return SeedReturn(x, vx, kind=SeedClass.INADMISSIBLE)
        except (NoReturn, StepFailure):
            return SeedReturn(x, vx, kind=SeedClass.NO_RETURN)
        return SeedReturn(x, vx, x_r, vx_r, t_r)


def _seed_points(system: MagneticSystem, k: float, grid: SectionGrid) -> list[tuple[float, float]]:
    points = []
    for x in grid.xs():
        g11 = float(system.chart.metric([x, 0.0])[0, 0])
        top = np.sqrt(2.0 * k / g11)
        points.extend((float(x), float(f * top)) for f in grid.fractions())
    return points


def _local_minima(residuals: Array) -> list[tuple[int, int]]:
    padded = np.pad(residuals, 1, constant_values=np.inf)
    minima = []
    for i in range(residuals.shape[0]):
        for j in range(residuals.shape[1]):
            value = residuals[i, j]
            if np.isfinite(value) and value <= padded[i : i + 3, j : j + 3].min():
                minima.append((i, j))
    return minima


def refine_fixed_point(
    return_map: ReturnMap,
    start: tuple[float, float],
    fp_tol: float = FP_TOL,
    step: float = FD_STEP,
    iterations: int = 20,
) -> Optional[tuple[float, float]]:
    """2D Newton on R(u) - u with a forward-difference Jacobian; None when it fails."""
    u = np.array(start, dtype=float)
    for _ in range(iterations):
        try:
            base = np.array(return_map(*u)[:2]) - u
            if np.sum(np.abs(base)) < fp_tol:
                return float(u[0]), float(u[1])
            jac = np.empty((2, 2))
            for c in range(2):
                shifted = u.copy()
                shifted[c] += step
                jac[:, c] = (np.array(return_map(*shifted)[:2]) - shifted - base) / step
        except (NoReturn, InvalidArgument, StepFailure):
            return None
        delta, *_ = np.linalg.lstsq(jac, -base, rcond=None)
        u = u + delta
    return None


def poincare_scan(
    system: MagneticSystem,
    k: float,
    winding: int,
    grid: SectionGrid,
    fp_tol: float = FP_TOL,
    refine_below: float = 0.05,
    max_refinements: int = 50,
    tol: float = 1e-10,
    workers: int = 1,
    executor: ExecutorKind = ExecutorKind.PROCESS,
) -> ScanResult:
    """
    Approximate fixed points of the section return map on ``grid``.

    Seeds with return residual |dx| + |dvx| below ``fp_tol`` are fixed points;
    grid-local minima below ``refine_below`` are polished by Newton.
    """
    if k <= 0:
        raise InvalidArgument(f"energy must be positive, got {k}")
    if winding == 0:
        raise InvalidArgument("the section return needs a nonzero winding")

    window = (grid.x_min - grid.margin, grid.x_max + grid.margin)
    return_map = ReturnMap(system, k, winding, window, grid.max_time, tol)
    points = _seed_points(system, k, grid)
    logger.info("Poincare scan: %d seeds, k=%g, winding=%d", len(points), k, winding)
    seeds = run_parallel(return_map.seed, points, workers=workers, executor=executor, chunksize=64)

    fixed: list[tuple[float, float]] = []
    marked = []
    for s in seeds:
        if s.residual < fp_tol:
            fixed.append((s.x, s.vx))
            marked.append(SeedReturn(s.x, s.vx, s.x_return, s.vx_return, s.time, SeedClass.FIXED))
        else:
            marked.append(s)

    residuals = np.array([s.residual for s in seeds]).reshape(grid.nx, grid.nv)
    candidates = [
        (residuals[i, j], seeds[i * grid.nv + j])
        for i, j in _local_minima(residuals)
        if fp_tol <= residuals[i, j] < refine_below
    ]
    candidates.sort(key=lambda c: c[0])
    refine = partial(refine_fixed_point, return_map, fp_tol=fp_tol)
    starts = [(c.x, c.vx) for _, c in candidates[:max_refinements]]
    for point in run_parallel(refine, starts, workers=workers, executor=executor):
        if point is None or not (grid.x_min <= point[0] <= grid.x_max):
            continue
        if all(abs(point[0] - p[0]) + abs(point[1] - p[1]) > fp_tol for p in fixed):
            fixed.append(point)

    result = ScanResult(k, winding, grid, marked, fixed)
    if result.no_return:
        logger.warning("Poincare scan: %d of %d seeds left the window", result.no_return, len(seeds))
    logger.info("Poincare scan: %d fixed points, min residual %.3e", len(fixed), result.min_residual)
    return result



def loop_from_section_point(
    system: MagneticSystem,
    k: float,
    winding: int,
    point: tuple[float, float],
    nodes: int,
    window: tuple[float, float] = (-np.inf, np.inf),
    max_time: float = 100.0,
    tol: float = 1e-10,
) -> DiscreteLoop:
    """
    The orbit through the section point (x, vx), followed for one return and
    sampled at ``nodes`` equal times.

    A fixed point gives a loop that closes up to the integration tolerance; any
    other returning point gives a loop with a jump at the closing segment.
    """
    if winding == 0:
        raise InvalidArgument("the section return needs a nonzero winding")
    return ReturnMap(system, k, winding, window, max_time, tol).loop(point, nodes)


def seed_loops(system: MagneticSystem, scan: ScanResult, nodes: int, tol: float = 1e-10) -> list[DiscreteLoop]:
    """Solver starts from the fixed points of ``scan``; points that fail to return are skipped."""
    grid = scan.grid
    window = (grid.x_min - grid.margin, grid.x_max + grid.margin)
    return_map = ReturnMap(system, scan.k, scan.winding, window, grid.max_time, tol)
    loops = []
    for point in scan.fixed_points:
        try:
            loops.append(return_map.loop(point, nodes))
        except (NoReturn, InvalidArgument, StepFailure) as exc:
            logger.debug("skipping section seed (%.6g, %.6g): %s", point[0], point[1], exc)
    return loops
