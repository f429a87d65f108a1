from abc import ABC
from dataclasses import dataclass
from pathlib import Path
from typing import Generic, TypeVar

import pandas as pd

from src.cli.dto import RunConfig
from src.common.interfaces.repository import Repository
from src.core.logger import logger
from src.core.settings import ExecutorKind
from src.geometry import MagneticSystem


TypeRepo = TypeVar("TypeRepo", bound=Repository, covariant=True)


@dataclass(frozen=True)
class RunContext:
    """What one command invocation works with."""

    config: RunConfig
    system: MagneticSystem
    out_dir: Path
    workers: int = 1
    executor: ExecutorKind = ExecutorKind.PROCESS

    @property
    def seed(self) -> int:
        return self.config.seed

    @property
    def config_hash(self) -> str:
        return self.config.config_hash


def write_frame(frame: pd.DataFrame, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    logger.info("Wrote %d rows to %s", len(frame), path)
    return path


def energy_tag(k: float) -> str:
    return f"{k:g}".replace("-", "m").replace(".", "p")


class Service(ABC, Generic[TypeRepo]):
    def __init__(self, repository: TypeRepo) -> None:
        self._repo = repository
