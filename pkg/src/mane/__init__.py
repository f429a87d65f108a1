from src.mane.estimate import CriticalValueBracket, estimate_c
from src.mane.infsup import UpperBound, mane_upper_infsup
from src.mane.witness import (
    Witness,
    WitnessFamily,
    circle_family,
    contractible_family,
    mane_lower_witness,
    rectangle,
)

__all__ = (
    "CriticalValueBracket",
    "UpperBound",
    "Witness",
    "WitnessFamily",
    "circle_family",
    "contractible_family",
    "estimate_c",
    "mane_lower_witness",
    "mane_upper_infsup",
    "rectangle",
)
