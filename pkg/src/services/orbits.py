from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from src.common.constants import SURFACE_DIM
from src.common.exceptions import NoOrbitFound
from src.core.logger import logger
from src.database.models import CheckResult, OrbitRecord
from src.database.repositories import OrbitRepository
from src.dynamics import poincare_scan, seed_loops
from src.index import IndexReport, build_index_report, check_iteration_inequalities, escape_index_bound
from src.services.base import RunContext, Service, energy_tag, write_frame
from src.loopspace import DiscreteLoop
from src.solver import find_orbit


@dataclass
class FindOutcome:
    records: list[OrbitRecord] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)


def iterates_frame(report: IndexReport, dim_m: int = SURFACE_DIM) -> pd.DataFrame:
    """Per-n index table with the free-period iteration bounds."""
    rows = [
        {
            "n": row.n,
            "m": row.m,
            "m0": row.m0,
            "m_T": row.m_fixed,
            "m0_T": row.m0_fixed,
            "lower": row.n * report.mhat - dim_m,
            "upper": row.n * report.mhat + dim_m - row.m0 + 1,
        }
        for row in report.iterates
    ]
    return pd.DataFrame(rows, columns=["n", "m", "m0", "m_T", "m0_T", "lower", "upper"])


def with_index(record: OrbitRecord, report: IndexReport) -> OrbitRecord:
    return record.model_copy(
        update={
            "index": report,
            "invariants": report.invariants(),
            "checks": [CheckResult.from_check(c) for c in check_iteration_inequalities(report)],
            "escape_bound": escape_index_bound(report),
        }
    )


class OrbitService(Service[OrbitRepository]):

    def __init__(self, repository: OrbitRepository) -> None:
        super().__init__(repository)

    def find(self, context: RunContext) -> FindOutcome:
        params = context.config.find
        opts = params.solver.model_copy(update={"seed": context.seed})
        outcome = FindOutcome()
        for k in params.k:
            for winding in params.windings:
                extra = self._scan_starts(context, k, winding, opts.nodes) if params.scan_seeds else []
                try:
                    solution = find_orbit(
                        context.system,
                        k,
                        winding,
                        opts,
                        extra_starts=extra,
                        workers=context.workers,
                        executor=context.executor,
                    )
                except NoOrbitFound as exc:
                    logger.warning("k=%g winding=%d: %s", k, winding, exc)
                    outcome.failures.append({"k": k, "winding": winding, **exc.details})
                    continue
                record = OrbitRecord.from_solution(
                    context.system.name, context.system.identity_hash, solution, seed=context.seed
                )
                if params.index:
                    report = build_index_report(
                        context.system,
                        solution.loop,
                        k,
                        n_max=params.n_max,
                        null_tol=params.null_tol,
                        kernel_tol=params.kernel_tol,
                        budget=params.budget,
                        workers=context.workers,
                    )
                    record = with_index(record, report)
                    write_frame(iterates_frame(report), self._table_path(context.out_dir, record))
                outcome.records.append(self._repo.add(record))
        return outcome

    def reindex(self, context: RunContext) -> list[OrbitRecord]:
        params = context.config.index
        stored = self._repo.for_system(context.system.identity_hash)
        if not stored:
            raise NoOrbitFound(f"no stored orbits for system {context.system.name}")

        refreshed: list[OrbitRecord] = []
        for record in stored:
            report = build_index_report(
                context.system,
                record.to_loop(),
                record.k,
                n_max=params.n_max,
                null_tol=params.null_tol,
                kernel_tol=params.kernel_tol,
                budget=params.budget,
                workers=context.workers,
            )
            updated = with_index(record, report)
            write_frame(iterates_frame(report), self._table_path(context.out_dir, updated))
            refreshed.append(updated)
        self._repo.add_many(refreshed)
        return refreshed

    @staticmethod
    def _scan_starts(context: RunContext, k: float, winding: int, nodes: int) -> list[DiscreteLoop]:
        scan_params = context.config.scan
        scan = poincare_scan(
            context.system,
            k,
            winding,
            scan_params.grid,
            fp_tol=scan_params.fp_tol,
            tol=scan_params.tol,
            workers=context.workers,
            executor=context.executor,
        )
        loops = seed_loops(context.system, scan, nodes, tol=scan_params.tol)
        logger.info("k=%g winding=%d: %d section seed(s) added to the starts", k, winding, len(loops))
        return loops

    @staticmethod
    def _table_path(out_dir: Path, record: OrbitRecord) -> Path:
        return out_dir / f"index_k{energy_tag(record.k)}_w{record.winding}.csv"
