from src.loopspace.action import (
    action,
    critical_energy,
    el_residual,
    gradient,
    hessian,
    loop_length,
    minimal_length,
    momentum_jump,
    penalized_action,
    speed_residual,
)
from src.loopspace.loop import (
    DiscreteLoop,
    TangentPerturbation,
    iterate_loop,
    resample_loop,
    rotate_loop,
    winding,
)
from src.loopspace.penalty import PenaltyFamily, PenaltyProfile

__all__ = (
    "DiscreteLoop",
    "PenaltyFamily",
    "PenaltyProfile",
    "TangentPerturbation",
    "action",
    "critical_energy",
    "el_residual",
    "gradient",
    "hessian",
    "iterate_loop",
    "loop_length",
    "minimal_length",
    "momentum_jump",
    "penalized_action",
    "resample_loop",
    "rotate_loop",
    "speed_residual",
    "winding",
)
