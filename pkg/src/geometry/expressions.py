"""Symbolic component functions on the cylinder chart and their numpy evaluators."""

from collections.abc import Sequence

import numpy as np
import sympy as sp
from numpy.typing import ArrayLike, NDArray

from src.common.exceptions import ConfigError

X, Y = sp.symbols("x y", real=True)
PX, PY = sp.symbols("p_x p_y", real=True)

_NAMESPACE = {
    "x": X,
    "y": Y,
    "exp": sp.exp,
    "log": sp.log,
    "sin": sp.sin,
    "cos": sp.cos,
    "tanh": sp.tanh,
    "cosh": sp.cosh,
    "sinh": sp.sinh,
    "sqrt": sp.sqrt,
    "pi": sp.pi,
}


def parse_expression(text: str, key: str = "expression") -> sp.Expr:
    """Parse an arithmetic expression over x, y, exp, sin, cos, pi."""
    try:
        expr = sp.sympify(text, locals=_NAMESPACE)
    except (sp.SympifyError, SyntaxError, TypeError, AttributeError) as exc:
        raise ConfigError(f"{key}: cannot parse {text!r}", {"key": key}) from exc

    unknown = expr.free_symbols - {X, Y}
    if unknown:
        names = ", ".join(sorted(str(s) for s in unknown))
        raise ConfigError(f"{key}: unknown symbols {names}", {"key": key})
    undefined = expr.atoms(sp.core.function.AppliedUndef)
    if undefined:
        names = ", ".join(sorted(str(f.func) for f in undefined))
        raise ConfigError(f"{key}: unknown functions {names}", {"key": key})
    return expr


def jet_expressions(expr: sp.Expr, order: int) -> tuple[sp.Expr, ...]:
    """Partial derivatives of ``expr`` of exactly ``order`` in (x, y) lexicographic order."""
    if order == 0:
        return (expr,)
    if order == 1:
        return (sp.diff(expr, X), sp.diff(expr, Y))
    if order == 2:
        return (sp.diff(expr, X, X), sp.diff(expr, X, Y), sp.diff(expr, Y, Y))
    raise ValueError(f"unsupported derivative order {order}")


class FieldBundle:
    """
    A tuple of sympy expressions in (x, y) evaluated together.

    Calling the bundle returns an array of shape ``(len(exprs), *broadcast(x, y))``;
    constant components are broadcast to the sample shape.
    """

    def __init__(self, exprs: Sequence[sp.Expr], variables: Sequence[sp.Symbol] = (X, Y)) -> None:
        self.exprs = tuple(sp.sympify(e) for e in exprs)
        self.variables = tuple(variables)
        self._fn = sp.lambdify(self.variables, list(self.exprs), modules="numpy")

    def __len__(self) -> int:
        return len(self.exprs)

    def __call__(self, *args: ArrayLike) -> NDArray[np.float64]:
        arrays = [np.asarray(a, dtype=float) for a in args]
        shape = np.broadcast(*arrays).shape if len(arrays) > 1 else arrays[0].shape
        # Piecewise branches are evaluated everywhere; the discarded ones may overflow
        with np.errstate(all="ignore"):
            values = self._fn(*arrays)
        out = np.empty((len(values),) + shape, dtype=float)
        for i, value in enumerate(values):
            out[i] = value
        return out

    def __reduce__(self):
        return (FieldBundle, (self.exprs, self.variables))

    def __repr__(self) -> str:
        return f"FieldBundle({', '.join(str(e) for e in self.exprs)})"
