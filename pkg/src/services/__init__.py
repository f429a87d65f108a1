from src.services.base import RunContext, Service, write_frame
from src.services.mane import ManeService
from src.services.orbits import FindOutcome, OrbitService, iterates_frame
from src.services.report import CSV_SCHEMAS, DatabaseSummary, ReportService, jsonl_schemas
from src.services.scan import ScanService, convexity_sweep
from src.services.simulation import SimulationOutcome, initial_state, simulate_trajectory

__all__ = (
    "CSV_SCHEMAS",
    "DatabaseSummary",
    "FindOutcome",
    "ManeService",
    "OrbitService",
    "ReportService",
    "RunContext",
    "ScanService",
    "Service",
    "SimulationOutcome",
    "convexity_sweep",
    "initial_state",
    "iterates_frame",
    "jsonl_schemas",
    "simulate_trajectory",
    "write_frame",
)
