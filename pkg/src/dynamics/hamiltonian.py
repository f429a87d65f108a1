from dataclasses import dataclass
from functools import cached_property

import numpy as np
import sympy as sp
from numpy.typing import ArrayLike

from src.geometry.chart import Array
from src.geometry.expressions import PX, PY, X, Y, FieldBundle
from src.geometry.system import MagneticSystem

_VARIABLES = (X, Y, PX, PY)

# z' = J grad H with z = (x, y, p_x, p_y)
SYMPLECTIC_J = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])


def symplectic_form(u: ArrayLike, v: ArrayLike) -> float:
    return float(np.asarray(u) @ SYMPLECTIC_J @ np.asarray(v))


@dataclass(frozen=True, eq=False)
class HamiltonianJet:
    """H(q, p) = 1/2 |p - theta|^2_{g*} with its symbolic gradient and Hessian."""

    system: MagneticSystem

    @cached_property
    def expression(self) -> sp.Expr:
        chart = self.system.chart
        det = chart.g11 * chart.g22 - chart.g12**2
        a = PX - self.system.theta1
        b = PY - self.system.theta2
        return (chart.g22 * a * a - 2 * chart.g12 * a * b + chart.g11 * b * b) / (2 * det)

    @cached_property
    def _gradient(self) -> FieldBundle:
        return FieldBundle([sp.diff(self.expression, v) for v in _VARIABLES], _VARIABLES)

    @cached_property
    def _hessian(self) -> FieldBundle:
        first = [sp.diff(self.expression, v) for v in _VARIABLES]
        return FieldBundle([sp.diff(f, v) for f in first for v in _VARIABLES], _VARIABLES)

    def value(self, z: ArrayLike) -> float:
        point = np.asarray(z, dtype=float)
        return float(self.system.hamiltonian(point[:2], point[2:]))

    def gradient(self, z: ArrayLike) -> Array:
        return self._gradient(*np.asarray(z, dtype=float))

    def hessian(self, z: ArrayLike) -> Array:
        return self._hessian(*np.asarray(z, dtype=float)).reshape(4, 4)

    def vector_field(self, z: ArrayLike) -> Array:
        return SYMPLECTIC_J @ self.gradient(z)
