from dataclasses import dataclass

import numpy as np

from src.core.logger import logger
from src.core.workers import run_parallel
from src.database.models import ScanSummary
from src.database.repositories import ScanRepository
from src.dynamics import State, poincare_scan, sample_energy_states, turning_point_accelerations
from src.geometry import MagneticSystem
from src.services.base import RunContext, Service, energy_tag, write_frame


@dataclass(frozen=True)
class ConvexityTask:
    """ẍ at every turning point of one trajectory."""

    system: MagneticSystem
    duration: float
    tol: float = 1e-9

    def __call__(self, start: State) -> np.ndarray:
        _, accelerations = turning_point_accelerations(self.system, start, self.duration, self.tol)
        return accelerations


@dataclass(frozen=True)
class ConvexitySweep:
    trajectories: int
    turning_points: int
    violations: int
    min_acceleration: float | None


def convexity_sweep(context: RunContext, k: float) -> ConvexitySweep:
    params = context.config.scan
    starts = sample_energy_states(context.system, k, params.convexity_samples, params.convexity_x_range, context.seed)
    task = ConvexityTask(context.system, params.convexity_duration)
    results = run_parallel(task, starts, workers=context.workers, executor=context.executor)
    accelerations = np.concatenate([r for r in results if r.size] or [np.empty(0)])
    violations = int(np.count_nonzero(accelerations <= 0.0))
    if violations:
        logger.warning("k=%g: %d turning point(s) with non-positive acceleration", k, violations)
    return ConvexitySweep(
        trajectories=len(starts),
        turning_points=int(accelerations.size),
        violations=violations,
        min_acceleration=float(accelerations.min()) if accelerations.size else None,
    )


class ScanService(Service[ScanRepository]):

    def __init__(self, repository: ScanRepository) -> None:
        super().__init__(repository)

    def scan(self, context: RunContext) -> list[ScanSummary]:
        params = context.config.scan
        summaries: list[ScanSummary] = []
        for k in params.k:
            result = poincare_scan(
                context.system,
                k,
                params.winding,
                params.grid,
                fp_tol=params.fp_tol,
                tol=params.tol,
                workers=context.workers,
                executor=context.executor,
            )
            path = write_frame(result.to_frame(), context.out_dir / f"scan_k{energy_tag(k)}_w{params.winding}.csv")
            if result.no_return:
                logger.warning("k=%g: %d seed(s) never returned to the section", k, result.no_return)
            summary = ScanSummary.from_scan(context.system.name, context.system.identity_hash, result, csv=path.name)
            if params.convexity_samples:
                sweep = convexity_sweep(context, k)
                summary = summary.model_copy(
                    update={
                        "turning_points": sweep.turning_points,
                        "convexity_violations": sweep.violations,
                        "min_turning_acceleration": sweep.min_acceleration,
                    }
                )
            summaries.append(self._repo.add(summary))
        return summaries
