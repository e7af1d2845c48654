"""Generalized hypergeometric series pFq with exact polynomial truncation.

When a numerator parameter is a nonpositive integer the series is a
polynomial, which is the only form table solutions take; the module expands
that polynomial exactly and also evaluates series numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .errors import NoTruncatingParameterError, SeriesConvergenceError
from .symcore import Add, Expr, Mul, Pow, Rat, Sym, as_expr, evaluate_numeric

Param = Union[Fraction, str]


def _as_param(p) -> Param:
    if isinstance(p, str):
        return p
    if isinstance(p, Sym):
        return p.name
    return Fraction(p)


@dataclass(frozen=True)
class HyperSpec:
    """Parameters and argument of a pFq series."""

    numerator_params: tuple[Param, ...]
    denominator_params: tuple[Param, ...]
    argument: Expr
    assumptions: tuple[str, ...] = field(default=(), compare=False)

    @staticmethod
    def make(num, den, argument) -> "HyperSpec":
        nps = tuple(_as_param(p) for p in num)
        dps = tuple(_as_param(p) for p in den)
        notes = []
        for p in dps:
            if isinstance(p, Fraction):
                if p <= 0 and p.denominator == 1:
                    raise ValueError(
                        f"denominator parameter {p} is zero or a negative integer"
                    )
            else:
                notes.append(f"assumes {p} is not zero or a negative integer")
        return HyperSpec(nps, dps, as_expr(argument), tuple(notes))

    def truncation_order(self) -> int | None:
        """Smallest n with a numerator parameter equal to -n, if any."""
        orders = [
            int(-p)
            for p in self.numerator_params
            if isinstance(p, Fraction) and p.denominator == 1 and p <= 0
        ]
        return min(orders) if orders else None


def pochhammer(alpha, k: int) -> Expr:
    """Rising factorial alpha (alpha+1) ... (alpha+k-1) as an expression."""
    if k < 0:
        raise ValueError("pochhammer index must be nonnegative")
    p = _as_param(alpha)
    if isinstance(p, Fraction):
        return Rat(pochhammer_value(p, k))
    if k == 0:
        return Rat(Fraction(1))
    s = Sym(p)
    factors = tuple(s + Fraction(i) if i else s for i in range(k))
    return factors[0] if k == 1 else Mul(factors)


def pochhammer_value(alpha: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= alpha + i
    return out


def expand_polynomial(spec: HyperSpec) -> Expr:
    """Exact polynomial form of a truncating series.

    Requires a nonpositive-integer numerator parameter and numeric denominator
    parameters; the result has degree at most n in the argument expression.
    """
    n = spec.truncation_order()
    if n is None:
        raise NoTruncatingParameterError(
            "no numerator parameter is a nonpositive integer"
        )
    for p in spec.denominator_params:
        if not isinstance(p, Fraction):
            raise NoTruncatingParameterError(
                f"denominator parameter {p!r} must be numeric for expansion"
            )
    numeric = all(isinstance(p, Fraction) for p in spec.numerator_params)
    z = spec.argument
    terms: list[Expr] = []
    for k in range(n + 1):
        c = _k_factor(spec, k)
        if numeric and c == 0:
            continue
        coeff: Expr = Rat(c)
        if not numeric:
            symbolic = [
                pochhammer(p, k)
                for p in spec.numerator_params
                if not isinstance(p, Fraction)
            ]
            coeff = Mul((coeff, *symbolic)) if symbolic else coeff
        terms.append(_coeff_times_power(coeff, z, k))
    if not terms:
        return Rat(Fraction(0))
    return terms[0] if len(terms) == 1 else Add(tuple(terms))


def _coeff_times_power(c: Expr, z: Expr, k: int) -> Expr:
    if k == 0:
        return c
    zk = z if k == 1 else Pow(z, k)
    if isinstance(c, Rat) and c.value == 1:
        return zk
    return Mul((c, zk))


def _k_factor(spec: HyperSpec, k: int) -> Fraction:
    """Numeric part of the k-th coefficient: numeric Pochhammers over k!."""
    c = Fraction(1)
    for p in spec.numerator_params:
        if isinstance(p, Fraction):
            c *= pochhammer_value(p, k)
    for p in spec.denominator_params:
        assert isinstance(p, Fraction)
        c /= pochhammer_value(p, k)
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    return c / fact


def evaluate(
    spec: HyperSpec,
    x_value: float,
    bindings: dict[str, float] | None = None,
    max_terms: int = 200,
    tol: float = 1e-14,
) -> float:
    """Numeric value of the series at a point.

    Truncating series are summed exactly term-for-term; otherwise partial
    sums must converge to relative tol within max_terms.  Divergent cases
    (for instance 2F0 without a truncating parameter) fail loudly.
    """
    z = evaluate_numeric(spec.argument, x_value, bindings)
    env = dict(bindings or {})

    def pvalue(p: Param) -> float:
        if isinstance(p, Fraction):
            return float(p)
        try:
            return env[p]
        except KeyError:
            raise SeriesConvergenceError(f"parameter {p!r} has no binding") from None

    nums = [pvalue(p) for p in spec.numerator_params]
    dens = [pvalue(p) for p in spec.denominator_params]

    def advance(term: float, k: int) -> float:
        num = 1.0
        for a in nums:
            num *= a + k
        den = float(k + 1)
        for b in dens:
            den *= b + k
        if den == 0.0:
            raise SeriesConvergenceError("denominator parameter hit a pole")
        return term * num / den * z

    n = spec.truncation_order()
    if n is not None:
        total = 0.0
        term = 1.0
        for k in range(n + 1):
            total += term
            term = advance(term, k)
        return total
    total = 0.0
    term = 1.0
    small_streak = 0
    for k in range(max_terms):
        total += term
        scale = max(abs(total), 1e-300)
        if abs(term) <= tol * scale:
            small_streak += 1
            if small_streak >= 2:
                return total
        else:
            small_streak = 0
        term = advance(term, k)
    raise SeriesConvergenceError(
        f"series did not converge within {max_terms} terms (divergent or slow)"
    )
