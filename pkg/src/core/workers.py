import multiprocessing as mp
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, TypeVar

from src.core.logger import logger
from src.core.settings import ExecutorKind, WorkerSettings

ItemType = TypeVar("ItemType")
ResultType = TypeVar("ResultType")

MAX_WORKERS = 16


def workers_count(settings: Optional[WorkerSettings] = None) -> int:
    if settings is not None and settings.count is not None:
        return max(1, settings.count)
    return min((mp.cpu_count() * 2) + 1, MAX_WORKERS)


def run_parallel(
    fn: Callable[[ItemType], ResultType],
    items: Iterable[ItemType],
    workers: int = 1,
    executor: ExecutorKind = ExecutorKind.PROCESS,
    chunksize: int = 1,
) -> list[ResultType]:
    """
    Map ``fn`` over ``items`` preserving input order.

    Runs in-process when one worker is requested or the serial executor is
    configured; otherwise fans out over a process pool. ``fn`` and every item
    must be picklable in the pool case.
    """
    batch: Sequence[ItemType] = list(items)
    if workers <= 1 or executor == ExecutorKind.SERIAL or len(batch) <= 1:
        return [fn(item) for item in batch]

    logger.debug("Fanning out %d tasks over %d workers", len(batch), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, batch, chunksize=chunksize))
