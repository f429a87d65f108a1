import os
from pathlib import Path
from dotenv import find_dotenv, load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Final, Optional
from pydantic import Field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__


# .env is optional here: experiments must run from a bare checkout
load_dotenv(find_dotenv(usecwd=True))


LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
PROJECT_NAME = os.getenv("PROJECT_NAME", "magnetic_geodesics")
PROJECT_VERSION = os.getenv("PROJECT_VERSION", "0.1.0")

LOGGING_FORMAT: Final[str] = "%(asctime)s %(name)s %(levelname)s -> %(message)s"
DATETIME_FORMAT: Final[str] = "%Y.%m.%d %H:%M"


def root_dir() -> Path:
    return Path(__file__).resolve().parent.parent.parent


class ExecutorKind(StrEnum):
    PROCESS = "process"
    SERIAL = "serial"


class StorageSettings(BaseSettings):
    """
    Where results land.

    All parameters are loaded from environment variables with RESULTS_ prefix.
    Example: RESULTS_DIR, RESULTS_DATABASE
    """
    model_config = SettingsConfigDict(
        env_file="./.env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        env_prefix="RESULTS_",
        extra="ignore",
    )

    dir: Path = Field(default_factory=lambda: root_dir() / "results")
    database: str = "results.jsonl"

    @property
    def database_path(self) -> Path:
        return Path(self.dir) / self.database


class WorkerSettings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file="./.env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        env_prefix="WORKERS_",
        extra="ignore",
    )

    count: Optional[int] = None
    executor: ExecutorKind = ExecutorKind.PROCESS


class NumericsSettings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file="./.env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        env_prefix="NUMERICS_",
        extra="ignore",
    )

    debug: bool = False
    # central-difference step for metric and 1-form derivatives
    h_geo: float = Field(default=1e-5, gt=0.0)


class Settings(BaseSettings):
    storage: StorageSettings
    workers: WorkerSettings
    numerics: NumericsSettings


def load_settings(
        storage: Optional[StorageSettings] = None,
        workers: Optional[WorkerSettings] = None,
        numerics: Optional[NumericsSettings] = None,
) -> Settings:
    return Settings(
        storage=storage or StorageSettings(),
        workers=workers or WorkerSettings(),
        numerics=numerics or NumericsSettings(),
    )


NUMERICS: Final[NumericsSettings] = NumericsSettings()
