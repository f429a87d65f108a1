from src.database.models.base import Base, Envelope
from src.database.models.records import (
    RECORD_TYPES,
    BracketRecord,
    BracketStatus,
    CheckResult,
    OrbitRecord,
    ScanSummary,
)


__all__ = (
    "Base",
    "BracketRecord",
    "BracketStatus",
    "CheckResult",
    "Envelope",
    "OrbitRecord",
    "RECORD_TYPES",
    "ScanSummary",
)
