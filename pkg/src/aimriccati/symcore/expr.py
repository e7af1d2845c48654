"""Expression trees over one independent variable ``x`` and named parameters.

Leaves are exact rational literals or symbols; interior nodes are sums,
products, integer powers, quotients and exponentials.  Trees are immutable
and hashable, and never hold floating-point payloads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..errors import PoleError, UnboundParameterError

Scalar = Union[int, Fraction]


class Expr:
    """Base node; subclasses carry the payload."""

    __slots__ = ()

    def __add__(self, other):
        return Add((self, as_expr(other)))

    def __radd__(self, other):
        return Add((as_expr(other), self))

    def __sub__(self, other):
        return Add((self, -as_expr(other)))

    def __rsub__(self, other):
        return Add((as_expr(other), -self))

    def __mul__(self, other):
        return Mul((self, as_expr(other)))

    def __rmul__(self, other):
        return Mul((as_expr(other), self))

    def __truediv__(self, other):
        return Quot(self, as_expr(other))

    def __rtruediv__(self, other):
        return Quot(as_expr(other), self)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        return Pow(self, k)

    def __neg__(self):
        return Mul((Rat(Fraction(-1)), self))

    def __str__(self):
        return expr_str(self)

    def __repr__(self):
        return f"Expr[{expr_str(self)}]"


@dataclass(frozen=True, repr=False)
class Rat(Expr):
    value: Fraction

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True, repr=False)
class Sym(Expr):
    name: str


@dataclass(frozen=True, repr=False)
class Add(Expr):
    terms: tuple[Expr, ...]


@dataclass(frozen=True, repr=False)
class Mul(Expr):
    factors: tuple[Expr, ...]


@dataclass(frozen=True, repr=False)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True, repr=False)
class Quot(Expr):
    num: Expr
    den: Expr


@dataclass(frozen=True, repr=False)
class ExpFn(Expr):
    arg: Expr


X = Sym("x")


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)):
        return Rat(Fraction(value))
    raise TypeError(f"cannot interpret {value!r} as an expression")


def lit(value) -> Rat:
    return Rat(Fraction(value))


def sym(name: str) -> Sym:
    return Sym(name)


def free_symbols(e: Expr) -> set[str]:
    if isinstance(e, Sym):
        return {e.name}
    if isinstance(e, Rat):
        return set()
    if isinstance(e, Add):
        out: set[str] = set()
        for t in e.terms:
            out |= free_symbols(t)
        return out
    if isinstance(e, Mul):
        out = set()
        for f in e.factors:
            out |= free_symbols(f)
        return out
    if isinstance(e, Pow):
        return free_symbols(e.base)
    if isinstance(e, Quot):
        return free_symbols(e.num) | free_symbols(e.den)
    if isinstance(e, ExpFn):
        return free_symbols(e.arg)
    raise TypeError(f"unknown node {e!r}")


def differentiate(e: Expr) -> Expr:
    """Structural derivative with respect to x."""
    if isinstance(e, Rat):
        return Rat(Fraction(0))
    if isinstance(e, Sym):
        return Rat(Fraction(1 if e.name == "x" else 0))
    if isinstance(e, Add):
        return Add(tuple(differentiate(t) for t in e.terms))
    if isinstance(e, Mul):
        pieces = []
        for i, f in enumerate(e.factors):
            rest = e.factors[:i] + (differentiate(f),) + e.factors[i + 1 :]
            pieces.append(Mul(rest))
        return Add(tuple(pieces))
    if isinstance(e, Pow):
        if e.exponent == 0:
            return Rat(Fraction(0))
        return Mul(
            (Rat(Fraction(e.exponent)), Pow(e.base, e.exponent - 1), differentiate(e.base))
        )
    if isinstance(e, Quot):
        num = Add(
            (
                Mul((differentiate(e.num), e.den)),
                Mul((Rat(Fraction(-1)), e.num, differentiate(e.den))),
            )
        )
        return Quot(num, Pow(e.den, 2))
    if isinstance(e, ExpFn):
        return Mul((differentiate(e.arg), e))
    raise TypeError(f"unknown node {e!r}")


def substitute(e: Expr, bindings: dict[str, Expr]) -> Expr:
    """Replace symbols by expressions throughout the tree."""
    if isinstance(e, Rat):
        return e
    if isinstance(e, Sym):
        return bindings.get(e.name, e)
    if isinstance(e, Add):
        return Add(tuple(substitute(t, bindings) for t in e.terms))
    if isinstance(e, Mul):
        return Mul(tuple(substitute(f, bindings) for f in e.factors))
    if isinstance(e, Pow):
        return Pow(substitute(e.base, bindings), e.exponent)
    if isinstance(e, Quot):
        return Quot(substitute(e.num, bindings), substitute(e.den, bindings))
    if isinstance(e, ExpFn):
        return ExpFn(substitute(e.arg, bindings))
    raise TypeError(f"unknown node {e!r}")


def evaluate_numeric(e: Expr, x_value: float, bindings: dict[str, float] | None = None) -> float:
    """Floating evaluation of the expression tree at a point."""
    env = dict(bindings or {})
    env["x"] = float(x_value)

    def ev(node: Expr) -> float:
        if isinstance(node, Rat):
            return float(node.value)
        if isinstance(node, Sym):
            try:
                return env[node.name]
            except KeyError:
                raise UnboundParameterError(f"no binding for parameter {node.name!r}") from None
        if isinstance(node, Add):
            return sum(ev(t) for t in node.terms)
        if isinstance(node, Mul):
            out = 1.0
            for f in node.factors:
                out *= ev(f)
            return out
        if isinstance(node, Pow):
            b = ev(node.base)
            if node.exponent < 0 and b == 0.0:
                raise PoleError("zero base raised to a negative power")
            return b ** node.exponent
        if isinstance(node, Quot):
            d = ev(node.den)
            if d == 0.0:
                raise PoleError("denominator vanishes at evaluation point")
            return ev(node.num) / d
        if isinstance(node, ExpFn):
            return math.exp(ev(node.arg))
        raise TypeError(f"unknown node {node!r}")

    return ev(e)


# -- printing -----------------------------------------------------------------

_PREC_ADD = 1
_PREC_MUL = 2
_PREC_POW = 3
_PREC_ATOM = 4


def _prec(e: Expr) -> int:
    if isinstance(e, Add):
        return _PREC_ADD
    if isinstance(e, (Mul, Quot)):
        return _PREC_MUL
    if isinstance(e, Pow):
        return _PREC_POW
    if isinstance(e, Rat) and (e.value < 0 or e.value.denominator != 1):
        return _PREC_ADD  # force parentheses inside products
    return _PREC_ATOM


def _wrap(e: Expr, minimum: int) -> str:
    s = expr_str(e)
    return f"({s})" if _prec(e) < minimum else s


def expr_str(e: Expr) -> str:
    """Printed form that re-parses under the expression grammar."""
    if isinstance(e, Rat):
        return str(e.value)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Add):
        if not e.terms:
            return "0"
        out = _wrap(e.terms[0], _PREC_ADD)
        for t in e.terms[1:]:
            s = _wrap(t, _PREC_ADD)
            out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
        return out
    if isinstance(e, Mul):
        if not e.factors:
            return "1"
        return "*".join(_wrap(f, _PREC_MUL + 1) for f in e.factors)
    if isinstance(e, Quot):
        return f"{_wrap(e.num, _PREC_MUL)}/{_wrap(e.den, _PREC_MUL + 1)}"
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _PREC_ATOM)}^{e.exponent}"
    if isinstance(e, ExpFn):
        return f"exp({expr_str(e.arg)})"
    raise TypeError(f"unknown node {e!r}")
