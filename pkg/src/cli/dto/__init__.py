from src.cli.dto.run_config import (
    FindSection,
    IndexSection,
    ManeSection,
    OutputSection,
    RunConfig,
    ScanSection,
    SimulateSection,
    load_run_config,
)

__all__ = (
    "FindSection",
    "IndexSection",
    "ManeSection",
    "OutputSection",
    "RunConfig",
    "ScanSection",
    "SimulateSection",
    "load_run_config",
)
