from src.geometry.chart import SurfaceChart, christoffel, christoffel_exact, sectional_curvature
from src.geometry.presets import BumpConfig, PresetName, SystemConfig, build_system, preset
from src.geometry.system import (
    HypothesisReport,
    MagneticSystem,
    ThetaBounds,
    check_hypotheses,
    lorentz_force,
    theta_norm_bounds,
)

__all__ = (
    "BumpConfig",
    "HypothesisReport",
    "MagneticSystem",
    "PresetName",
    "SurfaceChart",
    "SystemConfig",
    "ThetaBounds",
    "build_system",
    "check_hypotheses",
    "christoffel",
    "christoffel_exact",
    "lorentz_force",
    "preset",
    "sectional_curvature",
    "theta_norm_bounds",
)
