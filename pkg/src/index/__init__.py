from src.index.iteration import (
    InequalityCheck,
    Threshold,
    check_iterates,
    check_iteration_inequalities,
    escape_index_bound,
    vanishing_threshold,
)
from src.index.models import IndexReport, IterateCounts
from src.index.morse import (
    fixed_period_index,
    iterate_table,
    mean_index,
    morse_index,
    rotation_direction,
    spectral_counts,
    translation_direction,
)
from src.index.report import build_index_report, monodromy_mean_index

__all__ = (
    "IndexReport",
    "InequalityCheck",
    "IterateCounts",
    "Threshold",
    "build_index_report",
    "check_iterates",
    "check_iteration_inequalities",
    "escape_index_bound",
    "fixed_period_index",
    "iterate_table",
    "mean_index",
    "monodromy_mean_index",
    "morse_index",
    "rotation_direction",
    "spectral_counts",
    "translation_direction",
)
