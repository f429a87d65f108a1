"""TOML run configuration: one section per command, unknown keys rejected."""

import hashlib
try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict, TomlConfigSettingsSource

from src.common.constants import FP_TOL, KERNEL_TOL, MANE_GRID, MANE_WINDOW, NULL_TOL, SCHEMA_VERSION
from src.common.exceptions import ConfigError
from src.common.serializers import OrjsonSerializer
from src.dynamics.poincare import SectionGrid
from src.geometry.presets import SystemConfig
from src.solver.options import SolveOptions


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class SimulateSection(_Section):
    """
    Initial state either as (x, y, vx, vy) or as (x, y, vx) plus an energy ``k``
    with the sign of vy in ``vy_sign``.
    """

    x: float = 0.0
    y: float = 0.0
    vx: float = 0.0
    vy: Optional[float] = None
    k: Optional[float] = Field(default=None, gt=0.0)
    vy_sign: Literal[-1, 1] = 1
    duration: float = Field(default=10.0, gt=0.0)
    tol: float = Field(default=1e-9, gt=0.0)
    max_step: Optional[float] = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def _one_initial_state(self) -> "SimulateSection":
        if (self.vy is None) == (self.k is None):
            raise ValueError("give exactly one of 'vy' or 'k'")
        return self


class FindSection(_Section):
    k: list[float] = Field(default_factory=lambda: [1.0], min_length=1)
    windings: list[int] = Field(default_factory=lambda: [1], min_length=1)
    index: bool = True
    # also start from the fixed points of a Poincare scan over the [scan] grid
    scan_seeds: bool = False
    n_max: int = Field(default=12, ge=8)
    null_tol: float = Field(default=NULL_TOL, gt=0.0)
    kernel_tol: float = Field(default=KERNEL_TOL, gt=0.0)
    budget: int = Field(default=4096, ge=1)
    solver: SolveOptions = SolveOptions()

    @field_validator("k")
    @classmethod
    def _positive_energies(cls, value: list[float]) -> list[float]:
        if any(k <= 0 for k in value):
            raise ValueError("energies must be positive")
        return value

    @field_validator("windings")
    @classmethod
    def _noncontractible(cls, value: list[int]) -> list[int]:
        if 0 in value:
            raise ValueError("winding 0 is contractible; use the mane section for c_u")
        return value


class IndexSection(_Section):
    n_max: int = Field(default=20, ge=8)
    null_tol: float = Field(default=NULL_TOL, gt=0.0)
    kernel_tol: float = Field(default=KERNEL_TOL, gt=0.0)
    budget: int = Field(default=4096, ge=1)


class ManeSection(_Section):
    tol: float = Field(default=1e-2, gt=0.0)
    contractible: bool = False
    x_window: tuple[float, float] = MANE_WINDOW
    grid: int = Field(default=MANE_GRID, ge=8)
    max_steps: int = Field(default=60, ge=1)
    descend: int = Field(default=0, ge=0)


class ScanSection(_Section):
    k: list[float] = Field(default_factory=lambda: [1.0], min_length=1)
    winding: int = 1
    grid: SectionGrid = SectionGrid(x_min=-6.0, x_max=3.0)
    fp_tol: float = Field(default=FP_TOL, gt=0.0)
    tol: float = Field(default=1e-10, gt=0.0)
    convexity_samples: int = Field(default=0, ge=0)
    convexity_duration: float = Field(default=20.0, gt=0.0)
    convexity_x_range: tuple[float, float] = (-6.0, 3.0)

    @field_validator("winding")
    @classmethod
    def _noncontractible(cls, value: int) -> int:
        if value == 0:
            raise ValueError("the section y = 0 needs a nonzero winding")
        return value


class OutputSection(_Section):
    """Unset keys fall back to the RESULTS_ environment settings."""

    dir: Optional[Path] = None
    database: Optional[str] = None


class RunConfig(BaseSettings):
    """
    Everything a command needs besides the command-line flags.

    Built only from the TOML file handed to :func:`load_run_config`; the
    environment is not consulted.
    """

    model_config = SettingsConfigDict(extra="forbid", frozen=True)

    schema_version: int
    seed: int = Field(default=0, ge=0)
    system: SystemConfig
    output: OutputSection = OutputSection()
    simulate: SimulateSection = SimulateSection(k=1.0)
    find: FindSection = FindSection()
    index: IndexSection = IndexSection()
    mane: ManeSection = ManeSection()
    scan: ScanSection = ScanSection()

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings,)

    @field_validator("schema_version")
    @classmethod
    def _supported(cls, value: int) -> int:
        if value != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {value}, expected {SCHEMA_VERSION}")
        return value

    @property
    def config_hash(self) -> str:
        """Hash of everything that shapes results; output paths excluded."""
        body = self.model_dump(mode="json", exclude={"output"})
        return hashlib.sha256(OrjsonSerializer.dumps(body)).hexdigest()[:16]

    def with_seed(self, seed: Optional[int]) -> "RunConfig":
        return self if seed is None else self.model_copy(update={"seed": seed})


def _describe(error: dict) -> str:
    key = ".".join(str(part) for part in error["loc"]) or "<root>"
    return f"{key}: {error['msg']}"


def load_run_config(path: Path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        data = TomlConfigSettingsSource(RunConfig, toml_file=path)()
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    try:
        return RunConfig(**data)
    except ValidationError as exc:
        lines = [_describe(e) for e in exc.errors()]
        raise ConfigError(f"{path}: invalid configuration\n  " + "\n  ".join(lines), {"errors": lines}) from exc
