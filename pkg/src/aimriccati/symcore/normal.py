"""Canonical normal form (rational function) x exp(polynomial).

Every supported expression normalizes to ``(num/den) * exp(arg)`` with num,
den, arg multivariate polynomials over QQ, ``gcd(num, den) = 1`` and den
integer-primitive with positive leading coefficient.  The represented
function is zero iff num is the zero polynomial, which makes equality and
zero-testing decidable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from ..errors import (
    ExprDivisionByZero,
    PoleError,
    UnsupportedFormError,
)
from .expr import Add, Expr, ExpFn, Mul, Pow, Quot, Rat, Sym
from .poly import Polynomial, _rank, exact_div, gcd, poly_str, prem, sorted_terms

_ONE = Polynomial.const(1)
_ZERO = Polynomial.zero()


@dataclass(frozen=True)
class NormalForm:
    """Canonical (num/den) * exp(exp_arg)."""

    num: Polynomial
    den: Polynomial
    exp_arg: Polynomial

    # -- construction ----------------------------------------------------

    @staticmethod
    def make(num: Polynomial, den: Polynomial, exp_arg: Polynomial = _ZERO) -> "NormalForm":
        if den.is_zero():
            raise ExprDivisionByZero("denominator normalizes to zero")
        if num.is_zero():
            return NormalForm(_ZERO, _ONE, _ZERO)
        g = gcd(num, den)
        if not (g.is_constant() and g.as_constant() == 1):
            num_q = exact_div(num, g)
            den_q = exact_div(den, g)
            assert num_q is not None and den_q is not None
            num, den = num_q, den_q
        scale = den.rational_content()
        if den.leading()[1] < 0:
            scale = -scale
        if scale != 1:
            num = num.scale(1 / scale)
            den = den.scale(1 / scale)
        return NormalForm(num, den, exp_arg)

    @staticmethod
    def from_const(value) -> "NormalForm":
        q = Fraction(value)
        if q == 0:
            return NormalForm(_ZERO, _ONE, _ZERO)
        return NormalForm(Polynomial.const(q), _ONE, _ZERO)

    @staticmethod
    def from_var(name: str) -> "NormalForm":
        return NormalForm(Polynomial.var(name), _ONE, _ZERO)

    @staticmethod
    def from_poly(p: Polynomial) -> "NormalForm":
        if p.is_zero():
            return NormalForm(_ZERO, _ONE, _ZERO)
        return NormalForm(p, _ONE, _ZERO)

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_rational(self) -> bool:
        return self.exp_arg.is_zero()

    def is_polynomial(self) -> bool:
        return self.exp_arg.is_zero() and self.den.is_constant()

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise UnsupportedFormError("normal form is not a polynomial")
        return self.num.scale(1 / self.den.as_constant())

    def variables(self) -> tuple[str, ...]:
        names = set(self.num.variables()) | set(self.den.variables())
        names |= set(self.exp_arg.variables())
        return tuple(sorted(names, key=_rank))

    # -- arithmetic ----------------------------------------------------------

    def _require_same_exp(self, other: "NormalForm") -> Polynomial:
        if self.is_zero():
            return other.exp_arg
        if other.is_zero():
            return self.exp_arg
        if self.exp_arg != other.exp_arg:
            raise UnsupportedFormError(
                "sum of terms with different exponential factors is not representable"
            )
        return self.exp_arg

    def __add__(self, other: "NormalForm") -> "NormalForm":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        arg = self._require_same_exp(other)
        # With d1 = g e1, d2 = g e2 and both operands reduced, the only factor
        # the sum can share with d1 d2 / g is inside g.
        g = gcd(self.den, other.den)
        if g.is_constant():
            num = self.num * other.den + other.num * self.den
            return NormalForm.make(num, self.den * other.den, arg)
        e1 = exact_div(self.den, g)
        e2 = exact_div(other.den, g)
        assert e1 is not None and e2 is not None
        num = self.num * e2 + other.num * e1
        h = gcd(num, g)
        if not h.is_constant():
            num_q = exact_div(num, h)
            den_g = exact_div(g, h)
            assert num_q is not None and den_g is not None
            return NormalForm._finish(num_q, den_g * e1 * e2, arg)
        return NormalForm._finish(num, self.den * e2, arg)

    def __sub__(self, other: "NormalForm") -> "NormalForm":
        return self + (-other)

    def __neg__(self) -> "NormalForm":
        return NormalForm(-self.num, self.den, self.exp_arg)

    def __mul__(self, other: "NormalForm") -> "NormalForm":
        if self.is_zero() or other.is_zero():
            return NormalForm(_ZERO, _ONE, _ZERO)
        g1 = gcd(self.num, other.den)
        g2 = gcd(other.num, self.den)
        n1 = self.num if g1.is_constant() else exact_div(self.num, g1)
        d2 = other.den if g1.is_constant() else exact_div(other.den, g1)
        n2 = other.num if g2.is_constant() else exact_div(other.num, g2)
        d1 = self.den if g2.is_constant() else exact_div(self.den, g2)
        assert n1 is not None and n2 is not None and d1 is not None and d2 is not None
        return NormalForm._finish(n1 * n2, d1 * d2, self.exp_arg + other.exp_arg)

    def __truediv__(self, other: "NormalForm") -> "NormalForm":
        if other.is_zero():
            raise ExprDivisionByZero("division by an expression that normalizes to zero")
        if self.is_zero():
            return self
        g1 = gcd(self.num, other.num)
        g2 = gcd(other.den, self.den)
        n1 = self.num if g1.is_constant() else exact_div(self.num, g1)
        d2 = other.num if g1.is_constant() else exact_div(other.num, g1)
        n2 = other.den if g2.is_constant() else exact_div(other.den, g2)
        d1 = self.den if g2.is_constant() else exact_div(self.den, g2)
        assert n1 is not None and n2 is not None and d1 is not None and d2 is not None
        return NormalForm._finish(n1 * n2, d1 * d2, self.exp_arg - other.exp_arg)

    @staticmethod
    def _finish(num: Polynomial, den: Polynomial, arg: Polynomial) -> "NormalForm":
        """Sign/content canonicalization for an already gcd-reduced pair."""
        if num.is_zero():
            return NormalForm(_ZERO, _ONE, _ZERO)
        if den.is_zero():
            raise ExprDivisionByZero("denominator normalizes to zero")
        scale = den.rational_content()
        if den.leading()[1] < 0:
            scale = -scale
        if scale != 1:
            num = num.scale(1 / scale)
            den = den.scale(1 / scale)
        return NormalForm(num, den, arg)

    def __pow__(self, k: int) -> "NormalForm":
        # coprime num/den stay coprime under powers, so no gcd pass is needed
        if k == 0:
            return NormalForm.from_const(1)
        if self.is_zero():
            if k < 0:
                raise ExprDivisionByZero("zero raised to a negative power")
            return self
        if k < 0:
            return NormalForm._finish(
                self.den ** (-k), self.num ** (-k), self.exp_arg.scale(Fraction(k))
            )
        return NormalForm._finish(self.num ** k, self.den ** k, self.exp_arg.scale(Fraction(k)))

    def diff(self) -> "NormalForm":
        """d/dx of (num/den) e^arg = ((num' + num arg')den - num den')/den^2 e^arg."""
        n, d, a = self.num, self.den, self.exp_arg
        num = (n.diff("x") + n * a.diff("x")) * d - n * d.diff("x")
        if d.is_constant():
            return NormalForm._finish(num, d * d, a)
        g = gcd(num, d)
        if not g.is_constant():
            num_q = exact_div(num, g)
            d_q = exact_div(d, g)
            assert num_q is not None and d_q is not None
            return NormalForm.make(num_q, d * d_q, a)
        return NormalForm.make(num, d * d, a)

    # -- substitution ------------------------------------------------------------

    def bind(self, bindings: dict[str, Fraction]) -> "NormalForm":
        """Substitute rational values for parameters and re-canonicalize."""
        return NormalForm.make(
            self.num.bind(bindings), self.den.bind(bindings), self.exp_arg.bind(bindings)
        )

    # -- numerics ----------------------------------------------------------------

    def evalf(self, x_value: float, bindings: dict[str, float] | None = None) -> float:
        env = dict(bindings or {})
        env["x"] = float(x_value)
        d = self.den.evalf(env)
        if d == 0.0:
            raise PoleError("denominator vanishes at evaluation point")
        out = self.num.evalf(env) / d
        if not self.exp_arg.is_zero():
            out *= math.exp(self.exp_arg.evalf(env))
        return out

    # -- conversion / printing --------------------------------------------------

    def to_expr(self) -> Expr:
        num_e = poly_to_expr(self.num)
        out: Expr = num_e
        if not self.den.is_constant() or self.den.as_constant() != 1:
            out = Quot(num_e, poly_to_expr(self.den))
        if not self.exp_arg.is_zero():
            e = ExpFn(poly_to_expr(self.exp_arg))
            out = e if _is_one(out) else Mul((out, e))
        return out

    def __str__(self) -> str:
        num_s = poly_str(self.num)
        den_one = self.den.is_constant() and self.den.as_constant() == 1
        if den_one and self.exp_arg.is_zero():
            return num_s
        if den_one:
            exp_s = f"exp({poly_str(self.exp_arg)})"
            return exp_s if num_s == "1" else f"({num_s})*{exp_s}"
        out = f"({num_s})/({poly_str(self.den)})"
        if not self.exp_arg.is_zero():
            out += f"*exp({poly_str(self.exp_arg)})"
        return out


def _is_one(e: Expr) -> bool:
    return isinstance(e, Rat) and e.value == 1


def poly_to_expr(p: Polynomial) -> Expr:
    """Expression tree for a polynomial, terms in canonical print order."""
    if p.is_zero():
        return Rat(Fraction(0))
    terms = []
    for mono, coeff in sorted_terms(p):
        factors: list[Expr] = []
        if coeff != 1 or not mono:
            factors.append(Rat(coeff))
        for name, e in mono:
            factors.append(Sym(name) if e == 1 else Pow(Sym(name), e))
        terms.append(factors[0] if len(factors) == 1 else Mul(tuple(factors)))
    return terms[0] if len(terms) == 1 else Add(tuple(terms))


# -- normalization ----------------------------------------------------------------


def normalize(e: Expr | NormalForm) -> NormalForm:
    """Canonical normal form of an expression.

    Raises UnsupportedFormError for exp of a non-polynomial argument and
    ExprDivisionByZero for division by something that normalizes to zero.
    """
    if isinstance(e, NormalForm):
        return e
    if isinstance(e, Rat):
        return NormalForm.from_const(e.value)
    if isinstance(e, Sym):
        return NormalForm.from_var(e.name)
    if isinstance(e, Add):
        out = NormalForm.from_const(0)
        for t in e.terms:
            out = out + normalize(t)
        return out
    if isinstance(e, Mul):
        out = NormalForm.from_const(1)
        for f in e.factors:
            out = out * normalize(f)
        return out
    if isinstance(e, Quot):
        return normalize(e.num) / normalize(e.den)
    if isinstance(e, Pow):
        return normalize(e.base) ** e.exponent
    if isinstance(e, ExpFn):
        arg = normalize(e.arg)
        if not arg.is_polynomial():
            raise UnsupportedFormError("exp argument does not normalize to a polynomial")
        return NormalForm(_ONE, _ONE, arg.as_polynomial())
    raise TypeError(f"unknown node {e!r}")


def is_zero(nf: NormalForm) -> bool:
    """Exact zero test: the represented function vanishes iff num == 0."""
    return nf.num.is_zero()


def equal(a: Expr | NormalForm, b: Expr | NormalForm) -> bool:
    return normalize(a) == normalize(b)


# -- parameter constraints ---------------------------------------------------------


@dataclass(frozen=True)
class Constraint:
    """An x-free polynomial in the parameters, read as `poly == 0`.

    Canonical form: integer-primitive with positive graded-lex leading
    coefficient.
    """

    poly: Polynomial

    @staticmethod
    def make(p: Polynomial) -> "Constraint":
        if "x" in p.variables():
            raise ValueError("constraints must not involve the independent variable")
        return Constraint(p.canonical())

    def __str__(self) -> str:
        return poly_str(self.poly)

    def bind_solution(self, known: dict[str, Fraction]) -> tuple[str, Fraction]:
        """Solve for one parameter given exact values for all the others."""
        var = _linear_parameter(self.poly)
        if var is None:
            raise ValueError("constraint is not linear in any parameter")
        coeffs = self.poly.coeffs_in(var)
        a = coeffs[1].evaluate(known)
        b = coeffs[0].evaluate(known) if not coeffs[0].is_zero() else Fraction(0)
        if a == 0:
            raise ZeroDivisionError("leading coefficient vanishes under the bindings")
        return var, -b / a


def _linear_parameter(p: Polynomial) -> Optional[str]:
    for v in p.variables():
        if p.degree(v) == 1:
            return v
    return None


def zero_constraints(nf: NormalForm) -> list[Constraint]:
    """Parameter conditions under which a nonzero normal form vanishes.

    The numerator can only vanish identically in x when its x-free content
    does, so the content is split off and factored over QQ.  Monomial factors
    are dropped: they correspond to degenerate parameter choices that
    annihilate a seed function outright rather than a genuine termination
    branch.  An empty list means no x-free factor can make the form vanish
    for generic parameters.
    """
    if nf.is_zero():
        raise ValueError("zero normal form has no vanishing constraints")
    num = nf.num
    coeffs = [c for c in num.coeffs_in("x") if not c.is_zero()]
    content = Polynomial.zero()
    for c in coeffs:
        content = gcd(content, c)
        if content.is_constant():
            break
    if content.is_zero() or content.is_constant():
        return []
    mono = content.monomial_content()
    stripped = content.div_mono(mono)
    if stripped.is_constant():
        return []
    out = []
    seen = set()
    for factor in _factor_over_rationals(stripped):
        if factor.is_constant() or len(factor.terms) == 1:
            continue  # rational units and monomial factors are degenerate
        c = Constraint.make(factor)
        if c.poly not in seen:
            seen.add(c.poly)
            out.append(c)
    out.sort(key=lambda c: (c.poly.total_degree(), str(c)))
    return out


def _factor_over_rationals(p: Polynomial) -> list[Polynomial]:
    """Irreducible factors over QQ (multiplicity collapsed).

    Arithmetic, gcd and content extraction are all done by this package;
    splitting a primitive content polynomial into irreducible factors is the
    one step delegated to sympy's factoring engine, with exact conversion in
    both directions.
    """
    import sympy

    names = p.variables()
    if not names:
        return [p]
    syms = [sympy.Symbol(n) for n in names]
    expr = sympy.Integer(0)
    for mono, coeff in p.terms.items():
        term = sympy.Rational(coeff.numerator, coeff.denominator)
        d = dict(mono)
        for n, s in zip(names, syms):
            if d.get(n):
                term *= s ** d[n]
        expr += term
    _, factors = sympy.factor_list(expr)
    out = []
    for f, _mult in factors:
        fp = sympy.Poly(f, *syms)
        terms = {}
        for exps, coeff in fp.terms():
            q = Fraction(int(coeff.p), int(coeff.q))
            mono = tuple((n, int(e)) for n, e in zip(names, exps) if e)
            mono = tuple(sorted(mono, key=lambda it: _rank(it[0])))
            terms[mono] = q
        out.append(Polynomial(terms))
    return out


# -- reduction modulo constraints ------------------------------------------------


def reduce_poly_mod(p: Polynomial, constraint: Constraint) -> Polynomial:
    """Pseudo-remainder of p by the constraint in one of its linear parameters."""
    cpoly = constraint.poly
    var = _linear_parameter(cpoly)
    if var is None:
        var = cpoly.variables()[0]
    if p.degree(var) == 0:
        return p
    return prem(p, cpoly, var)


def is_zero_mod(nf: NormalForm, constraints: Iterable[Constraint]) -> bool:
    """True when the numerator vanishes modulo any single one of the constraints.

    Constraints coming from a termination discriminant are disjunctive
    branches (the discriminant is a product), so each one must annihilate the
    numerator on its own for the certificate to hold on that branch.
    """
    cs = list(constraints)
    if not cs:
        return nf.is_zero()
    return all(reduce_poly_mod(nf.num, c).is_zero() for c in cs)


def eliminate(nf: NormalForm, constraint: Constraint, pivot: str | None = None) -> NormalForm:
    """Substitute a linear parameter of the constraint out of a normal form."""
    cpoly = constraint.poly
    if pivot is not None:
        if cpoly.degree(pivot) != 1:
            raise ValueError(f"constraint is not linear in {pivot!r}")
        var: Optional[str] = pivot
    else:
        var = _linear_parameter(cpoly)
    if var is None:
        raise ValueError("constraint is not linear in any parameter")
    coeffs = cpoly.coeffs_in(var)
    b, a = coeffs[0], coeffs[1]
    # eliminated parameter takes the value -b/a
    if var in nf.exp_arg.variables():
        if not a.is_constant():
            raise UnsupportedFormError(
                "cannot eliminate a parameter from an exponential argument "
                "with a non-constant pivot"
            )
        value_poly = (-b).scale(1 / a.as_constant())
        new_arg = nf.exp_arg.subs(var, value_poly)
    else:
        new_arg = nf.exp_arg
    num_n, num_d = _subs_ratfunc(nf.num, var, -b, a)
    den_n, den_d = _subs_ratfunc(nf.den, var, -b, a)
    return NormalForm.make(num_n * den_d, den_n * num_d, new_arg)


def _subs_ratfunc(
    p: Polynomial, var: str, vnum: Polynomial, vden: Polynomial
) -> tuple[Polynomial, Polynomial]:
    """Substitute var -> vnum/vden into p; returns (numerator, denominator)."""
    coeffs = p.coeffs_in(var)
    k = len(coeffs) - 1
    if k <= 0:
        return p, _ONE
    num = Polynomial.zero()
    for e, c in enumerate(coeffs):
        num = num + c * (vnum ** e) * (vden ** (k - e))
    return num, vden ** k
