from typing import Final

SCHEMA_VERSION: Final[int] = 1

MIN_NODES: Final[int] = 8
SURFACE_DIM: Final[int] = 2

DEFAULT_SIGMA_SCHEDULE: Final[tuple[float, ...]] = (2.0, 4.0, 8.0, 16.0, 32.0)
PENALTY_MARGIN: Final[float] = 1.0

G_TOL: Final[float] = 1e-8
NEWTON_TOL: Final[float] = 1e-10
NULL_TOL: Final[float] = 1e-6
KERNEL_TOL: Final[float] = 1e-5
FP_TOL: Final[float] = 1e-6
FD_STEP: Final[float] = 1e-6

MANE_WINDOW: Final[tuple[float, float]] = (-20.0, 20.0)
MANE_GRID: Final[int] = 512

EXIT_OK: Final[int] = 0
EXIT_VALIDATION: Final[int] = 2
EXIT_NO_ORBIT: Final[int] = 3
EXIT_NUMERICAL: Final[int] = 4
