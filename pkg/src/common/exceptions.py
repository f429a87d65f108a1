from collections.abc import Mapping
from typing import Any, Optional


class ToolkitError(Exception):
    """Base error; ``exit_code`` is what the CLI returns when it escapes a command."""

    exit_code: int = 4

    def __init__(self, message: str, details: Optional[Mapping[str, Any]] = None) -> None:
        super().__init__(message)
        self.details: dict[str, Any] = dict(details or {})


class ConfigError(ToolkitError):
    exit_code = 2


class InvalidArgument(ToolkitError):
    exit_code = 2


class NoOrbitFound(ToolkitError):
    exit_code = 3


class DegenerateMetric(ToolkitError):
    pass


class StepFailure(ToolkitError):
    pass


class NotCritical(ToolkitError):
    pass


class SymplecticityLoss(ToolkitError):
    pass


class NoReturn(ToolkitError):
    pass


class SubcriticalEnergy(ToolkitError):
    pass


class PeriodCollapse(ToolkitError):
    pass


class SingularHessian(ToolkitError):
    pass


class Diverged(ToolkitError):
    pass


class NoConvergence(ToolkitError):
    def __init__(self, message: str, best: Any = None, details: Optional[Mapping[str, Any]] = None) -> None:
        super().__init__(message, details)
        self.best = best


class BudgetExceeded(ToolkitError):
    def __init__(self, message: str, best: Any = None, details: Optional[Mapping[str, Any]] = None) -> None:
        super().__init__(message, details)
        self.best = best
