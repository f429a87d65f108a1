from collections.abc import Callable
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from typing import Optional

import sympy as sp
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.geometry.chart import SurfaceChart
from src.geometry.expressions import X, parse_expression
from src.geometry.system import MagneticSystem


class PresetName(StrEnum):
    APPENDIX = "appendix-cylinder"
    FLAT = "flat-cylinder"
    BUMP = "bump-cylinder"


class BumpConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    amplitude: float = 0.5
    radius: float = Field(default=1.0, gt=0.0)


class SystemConfig(BaseModel):
    """
    Either ``preset`` or the expression keys; expressions are over x, y, exp, sin, cos, pi.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    preset: Optional[PresetName] = None
    g11: Optional[str] = None
    g12: Optional[str] = None
    g22: Optional[str] = None
    theta1: Optional[str] = None
    theta2: Optional[str] = None
    bump: BumpConfig = BumpConfig()

    @model_validator(mode="after")
    def _preset_or_expressions(self) -> "SystemConfig":
        custom = [self.g11, self.g12, self.g22, self.theta1, self.theta2]
        if self.preset is not None and any(v is not None for v in custom):
            raise ValueError("give either 'preset' or metric/theta expressions, not both")
        if self.preset is None and (self.g11 is None or self.g22 is None):
            raise ValueError("custom systems need at least 'g11' and 'g22'")
        return self


def bump_profile(amplitude: float, radius: float) -> sp.Expr:
    """a(x) = a0 exp(1 - 1/(1 - (x/r0)^2)) on |x| < r0, zero elsewhere; a(0) = a0."""
    a0 = sp.Float(amplitude)
    r0 = sp.Float(radius)
    inside = a0 * sp.exp(1 - 1 / (1 - (X / r0) ** 2))
    return sp.Piecewise((inside, sp.Abs(X) < r0), (sp.Integer(0), True))


def _appendix(config: SystemConfig) -> MagneticSystem:
    beta = 1 + sp.exp(X)
    chart = SurfaceChart(sp.Integer(1), sp.Integer(0), beta ** 2)
    return MagneticSystem(PresetName.APPENDIX.value, chart, sp.Integer(0), beta, theta_sup=1.0, source=config)


def _flat(config: SystemConfig) -> MagneticSystem:
    chart = SurfaceChart(sp.Integer(1), sp.Integer(0), sp.Integer(1))
    return MagneticSystem(PresetName.FLAT.value, chart, sp.Integer(0), sp.Integer(0), theta_sup=0.0, source=config)


def _bump(config: SystemConfig) -> MagneticSystem:
    chart = SurfaceChart(sp.Integer(1), sp.Integer(0), sp.Integer(1))
    profile = bump_profile(config.bump.amplitude, config.bump.radius)
    return MagneticSystem(
        PresetName.BUMP.value,
        chart,
        sp.Integer(0),
        profile,
        theta_sup=abs(config.bump.amplitude),
        source=config,
    )


PRESETS: dict[PresetName, Callable[[SystemConfig], MagneticSystem]] = {
    PresetName.APPENDIX: _appendix,
    PresetName.FLAT: _flat,
    PresetName.BUMP: _bump,
}


def build_system(config: SystemConfig) -> MagneticSystem:
    if config.preset is not None:
        return PRESETS[config.preset](config)

    chart = SurfaceChart(
        parse_expression(config.g11, "g11"),
        parse_expression(config.g12 or "0", "g12"),
        parse_expression(config.g22, "g22"),
    )
    return MagneticSystem(
        "custom",
        chart,
        parse_expression(config.theta1 or "0", "theta1"),
        parse_expression(config.theta2 or "0", "theta2"),
        source=config,
    )


def preset(name: str, **bump: float) -> MagneticSystem:
    config = SystemConfig(preset=PresetName(name), bump=BumpConfig(**bump)) if bump else SystemConfig(preset=PresetName(name))
    return build_system(config)
