"""Iterative solver core for u'' = l0 u' + s0 u and the two plain Riccati forms.

The iteration builds the sequences

    l_n = l_{n-1}' + s_{n-1} + l0 l_{n-1}
    s_n = s_{n-1}' + s0 l_{n-1}          (l_{-1} = 1, s_{-1} = 0)

and watches the discriminant d_n = l_n s_{n-1} - l_{n-1} s_n.  When d_n
vanishes identically (or on an x-free parameter variety) the equation has a
closed-form solution assembled from s_{n-1}/l_{n-1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import exp as _math_exp, gcd as _int_gcd
from typing import Callable, Optional, Sequence

from .errors import (
    DegeneratePencilError,
    DegreeExplosionError,
    NoTerminationError,
    PoleOnGridError,
    QuadratureError,
)
from .symcore import (
    Constraint,
    Expr,
    NormalForm,
    is_zero_mod,
    normalize,
    zero_constraints,
)

DEFAULT_N_MAX = 24
DEFAULT_DEGREE_BOUND = 512

_ZERO = NormalForm.from_const(0)
_ONE = NormalForm.from_const(1)


@dataclass(frozen=True)
class AimTrace:
    """Computed sequences, indexable from n = -1 (lam) / -1 (s) and n = 1 (delta)."""

    lam_seq: tuple[NormalForm, ...]  # lam_seq[k] is l_{k-1}
    s_seq: tuple[NormalForm, ...]  # s_seq[k] is s_{k-1}
    delta_seq: tuple[NormalForm, ...]  # delta_seq[k] is d_{k+1}
    n_max: int

    def lam(self, n: int) -> NormalForm:
        return self.lam_seq[n + 1]

    def s(self, n: int) -> NormalForm:
        return self.s_seq[n + 1]

    def delta(self, n: int) -> NormalForm:
        if n < 1:
            raise IndexError("delta is defined for n >= 1")
        return self.delta_seq[n - 1]


@dataclass(frozen=True)
class TerminationResult:
    """Outcome of scanning a trace for d_n = 0.

    status is 'terminates' (identical zero at index n), 'conditional'
    (nonempty x-free constraint factors at index n; the factors are
    alternative branches, any one of which makes d_n vanish) or 'none'.
    """

    status: str
    n: Optional[int] = None
    constraints: tuple[Constraint, ...] = ()

    @staticmethod
    def terminates(n: int) -> "TerminationResult":
        return TerminationResult("terminates", n)

    @staticmethod
    def conditional(n: int, constraints: Sequence[Constraint]) -> "TerminationResult":
        return TerminationResult("conditional", n, tuple(constraints))

    @staticmethod
    def none() -> "TerminationResult":
        return TerminationResult("none")


@dataclass
class Solution:
    """Closed-form solution with provenance and an optional verification report."""

    expression: Expr
    nf: NormalForm
    theorem: str
    n: int
    constraints: tuple[Constraint, ...] = ()
    branches: tuple[tuple[Constraint, Expr], ...] = ()
    sign_flipped: bool = False
    notes: tuple[str, ...] = ()
    verification: object | None = None


def aim_iterate(
    lam0: Expr | NormalForm,
    s0: Expr | NormalForm,
    n_max: int = DEFAULT_N_MAX,
    degree_bound: int = DEFAULT_DEGREE_BOUND,
) -> AimTrace:
    """Run the recurrence for n_max steps with canonical normalization per step."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    l0 = normalize(lam0)
    s0n = normalize(s0)
    lam = [_ONE, l0]
    s = [_ZERO, s0n]
    deltas = []
    for _ in range(1, n_max + 1):
        ln = lam[-1].diff() + s[-1] + l0 * lam[-1]
        sn = s[-1].diff() + s0n * lam[-1]
        for nf in (ln, sn):
            if nf.num.total_degree() > degree_bound:
                raise DegreeExplosionError(
                    f"numerator degree {nf.num.total_degree()} exceeds bound {degree_bound}"
                )
        deltas.append(ln * s[-1] - lam[-1] * sn)
        lam.append(ln)
        s.append(sn)
    return AimTrace(tuple(lam), tuple(s), tuple(deltas), n_max)


def find_termination(trace: AimTrace) -> TerminationResult:
    """Smallest exact termination index, else smallest conditional one, else none."""
    for n in range(1, trace.n_max + 1):
        if trace.delta(n).is_zero():
            return TerminationResult.terminates(n)
    for n in range(1, trace.n_max + 1):
        cs = zero_constraints(trace.delta(n))
        if cs:
            return TerminationResult.conditional(n, cs)
    return TerminationResult.none()


@dataclass(frozen=True)
class Branch:
    """Constraint factors of one discriminant index, split into new and inherited."""

    n: int
    new: tuple[Constraint, ...]
    all: tuple[Constraint, ...]


def conditional_branches(trace: AimTrace) -> tuple[Branch, ...]:
    """Per-index x-free factors of every nonzero discriminant in the trace."""
    seen: set = set()
    out = []
    for n in range(1, trace.n_max + 1):
        d = trace.delta(n)
        if d.is_zero():
            break
        cs = zero_constraints(d)
        if not cs:
            continue
        new = tuple(c for c in cs if c.poly not in seen)
        seen.update(c.poly for c in cs)
        out.append(Branch(n, new, tuple(cs)))
    return tuple(out)


def particular_ratio(trace: AimTrace, n: int) -> NormalForm:
    """s_{n-1}/l_{n-1}; zero when s_{n-1} is zero, degenerate when only l is."""
    s_prev = trace.s(n - 1)
    lam_prev = trace.lam(n - 1)
    if s_prev.is_zero():
        return _ZERO
    if lam_prev.is_zero():
        raise DegeneratePencilError(
            f"l_{n - 1} is identically zero at termination index {n}"
        )
    return s_prev / lam_prev


def _solve_plain(
    lam0: Expr | NormalForm,
    s0: Expr | NormalForm,
    n_max: int,
    degree_bound: int,
    theorem: str,
) -> Solution:
    """Shared path for the two plain forms; theorem is 'T1' or 'T2'."""
    l0 = normalize(lam0)
    s0n = normalize(s0)
    trace = aim_iterate(l0, s0n, n_max, degree_bound)
    term = find_termination(trace)
    if term.status == "none":
        raise NoTerminationError(
            f"no termination within n_max={n_max}", trace=trace
        )
    assert term.n is not None
    ratio = particular_ratio(trace, term.n)
    primary = -ratio if theorem == "T1" else ratio

    def residual(y: NormalForm) -> NormalForm:
        if theorem == "T1":
            return y.diff() - l0 * y + y * y - s0n
        return y.diff() - l0 * y - y * y + s0n

    sign_flipped = False
    y = primary
    if not is_zero_mod(residual(y), term.constraints):
        y = -primary
        if not is_zero_mod(residual(y), term.constraints):
            raise DegeneratePencilError(
                "residual does not vanish for either sign; trace inconsistent"
            )
        sign_flipped = True
    notes = ()
    if sign_flipped:
        notes = ("sign flipped relative to the theorem's stated back-map",)
    branches = _branch_expressions(y, term.constraints)
    return Solution(
        expression=y.to_expr(),
        nf=y,
        theorem=theorem,
        n=term.n,
        constraints=term.constraints,
        branches=branches,
        sign_flipped=sign_flipped,
        notes=notes,
    )


def _branch_expressions(
    y: NormalForm, constraints: tuple[Constraint, ...]
) -> tuple[tuple[Constraint, Expr], ...]:
    """Per-branch solutions with the constraint parameter eliminated when linear."""
    from .symcore import eliminate

    out = []
    for c in constraints:
        try:
            reduced = eliminate(y, c)
        except Exception:
            continue
        out.append((c, reduced.to_expr()))
    return tuple(out)


def solve_theorem1(
    lam0: Expr | NormalForm,
    s0: Expr | NormalForm,
    n_max: int = DEFAULT_N_MAX,
    degree_bound: int = DEFAULT_DEGREE_BOUND,
) -> Solution:
    """Solve y' - l0 y + y^2 = s0; the back-map is y = -s_{n-1}/l_{n-1}."""
    return _solve_plain(lam0, s0, n_max, degree_bound, "T1")


def solve_theorem2(
    lam0: Expr | NormalForm,
    s0: Expr | NormalForm,
    n_max: int = DEFAULT_N_MAX,
    degree_bound: int = DEFAULT_DEGREE_BOUND,
) -> Solution:
    """Solve y' - l0 y - y^2 = -s0; the back-map is y = s_{n-1}/l_{n-1}."""
    return _solve_plain(lam0, s0, n_max, degree_bound, "T2")


# -- symbolic antiderivative of the log-derivative integrand -------------------


@dataclass(frozen=True)
class IntegralForm:
    """Integrand s_{n-1}/l_{n-1} with its antiderivative when expressible.

    The antiderivative is polynomial_part plus sum of coeff*ln|argument| over
    log_terms.  exact=False flags that numeric quadrature is required.
    """

    integrand: NormalForm
    polynomial_part: NormalForm
    log_terms: tuple[tuple[Fraction, NormalForm], ...]
    exact: bool


def _rational_roots(coeffs: list[Fraction]) -> list[Fraction]:
    """All rational roots of a dense univariate polynomial over QQ."""
    scale = 1
    for c in coeffs:
        scale = scale * c.denominator // _int_gcd(scale, c.denominator)
    ints = [int(c * scale) for c in coeffs]
    while ints and ints[-1] == 0:
        ints.pop()
    if not ints:
        return []
    shift = 0
    while ints[shift] == 0:
        shift += 1
    ints = ints[shift:]
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(n: int) -> list[int]:
        out = []
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                out.append(n // d)
            d += 1
        return out

    roots = [Fraction(0)] if shift else []
    seen = set(roots)
    for p in divisors(a0):
        for q in divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand in seen:
                    continue
                value = Fraction(0)
                for c in reversed(ints):
                    value = value * cand + c
                if value == 0:
                    seen.add(cand)
                    roots.append(cand)
    return roots


def linear_solution(
    lam0: Expr | NormalForm, s0: Expr | NormalForm, n: int, trace: AimTrace | None = None
) -> IntegralForm:
    """Integrand for u = exp(-integral of s_{n-1}/l_{n-1}) with antiderivative.

    The symbolic antiderivative covers a polynomial part plus either a
    c * den'/den logarithmic derivative or a full split of the denominator
    into distinct rational linear factors; anything else is flagged for
    quadrature.
    """
    if trace is None:
        trace = aim_iterate(lam0, s0, max(n, 1))
    alpha = particular_ratio(trace, n)
    return integrate_rational(alpha)


def integrate_rational(alpha: NormalForm) -> IntegralForm:
    """Antiderivative of a rational normal form, in the supported shapes."""
    from .symcore.poly import Polynomial, gcd as poly_gcd

    if not alpha.is_rational():
        return IntegralForm(alpha, _ZERO, (), False)
    if alpha.is_zero():
        return IntegralForm(alpha, _ZERO, (), True)
    num, den = alpha.num, alpha.den
    params = [v for v in den.variables() if v != "x"]
    # polynomial part by exact division in x
    quot, rem = _poly_divmod_x(num, den)
    poly_part = _antiderivative_poly(quot)
    if rem.is_zero():
        return IntegralForm(alpha, poly_part, (), True)
    # c * den'/den shape
    dprime = den.diff("x")
    if not dprime.is_zero():
        c = _proportionality(rem, dprime)
        if c is not None:
            return IntegralForm(
                alpha, poly_part, ((c, NormalForm.from_poly(den)),), True
            )
    # distinct rational linear factors (x - r)
    if params:
        return IntegralForm(alpha, poly_part, (), False)
    g = poly_gcd(den, dprime)
    if not g.is_constant():
        return IntegralForm(alpha, poly_part, (), False)  # repeated factors
    coeffs = [c.as_constant() for c in den.coeffs_in("x")]
    roots = _rational_roots(coeffs)
    if len(roots) != den.degree("x"):
        return IntegralForm(alpha, poly_part, (), False)
    terms = []
    for r in roots:
        lin = Polynomial.var("x") - Polynomial.const(r)
        rem_at = _eval_poly_at(rem, r)
        dprime_at = _eval_poly_at(dprime, r)
        terms.append((rem_at / dprime_at, NormalForm.from_poly(lin)))
    return IntegralForm(alpha, poly_part, tuple(terms), True)


def _poly_divmod_x(num, den):
    """Quotient and remainder of num by den as polynomials in x."""
    from .symcore.poly import Polynomial, exact_div

    quot = Polynomial.zero()
    rem = num
    dd = den.degree("x")
    lc = den.coeff_in("x", dd)
    while not rem.is_zero() and rem.degree("x") >= dd:
        dr = rem.degree("x")
        lead = rem.coeff_in("x", dr)
        factor = exact_div(lead, lc)
        if factor is None:
            # denominator leading coefficient does not divide; give up on the
            # polynomial part and treat the whole thing as a proper fraction
            return Polynomial.zero(), num
        shift = Polynomial.var("x", dr - dd) if dr > dd else Polynomial.const(1)
        quot = quot + factor * shift
        rem = rem - factor * shift * den
    return quot, rem


def _antiderivative_poly(p) -> NormalForm:
    from .symcore.poly import Polynomial

    out = Polynomial.zero()
    for mono, coeff in p.terms.items():
        d = dict(mono)
        e = d.get("x", 0)
        d["x"] = e + 1
        m = tuple(sorted(d.items(), key=lambda it: (0, "") if it[0] == "x" else (1, it[0])))
        out = out + Polynomial({m: coeff / (e + 1)})
    return NormalForm.from_poly(out)


def _proportionality(p, q) -> Optional[Fraction]:
    """c with p == c*q for constant rational c, if any."""
    if p.is_zero() or q.is_zero():
        return None
    lead_p = next(iter(sorted(p.terms.items())))
    mono = lead_p[0]
    if mono not in q.terms:
        return None
    c = lead_p[1] / q.terms[mono]
    scaled = q.scale(c)
    return c if scaled == p else None


def _eval_poly_at(p, r: Fraction) -> Fraction:
    total = Fraction(0)
    for mono, coeff in p.terms.items():
        d = dict(mono)
        e = d.pop("x", 0)
        if d:
            raise ValueError("polynomial has parameters")
        total += coeff * r ** e
    return total


# -- numeric general solution ---------------------------------------------------


@dataclass(frozen=True)
class GridSolution:
    """Samples of the second-order solution u and of y = u'/u on a grid."""

    xs: tuple[float, ...]
    u: tuple[float, ...]
    y: tuple[float, ...]


def general_solution_numeric(
    lam0: Expr | NormalForm,
    s0: Expr | NormalForm,
    n: int,
    c1: float,
    c2: float,
    grid: Sequence[float],
    trace: AimTrace | None = None,
) -> GridSolution:
    """Two-parameter solution of u'' = l0 u' + s0 u via nested quadrature.

    With a = s_{n-1}/l_{n-1} fixed by termination,

        u(x) = exp(-int a) [c2 + c1 int exp(int (l0 + 2a))]

    and y = u'/u = -a + c1 exp(int (l0 + a)) / (c2 + c1 int exp(int (l0 + 2a))).
    """
    from scipy.integrate import quad

    l0 = normalize(lam0)
    if trace is None:
        trace = aim_iterate(l0, s0, max(n, 1))
    alpha = particular_ratio(trace, n)
    xs = sorted(float(x) for x in grid)
    if not xs:
        raise ValueError("empty grid")
    for x in xs:
        for nf in (alpha, l0):
            if abs(nf.den.evalf({"x": x})) <= 1e-6:
                raise PoleOnGridError(f"grid point {x} is too close to a pole")

    def alpha_f(t: float) -> float:
        return alpha.evalf(t)

    def lam0_f(t: float) -> float:
        return l0.evalf(t)

    x0 = xs[0]

    def cumulative(fn: Callable[[float], float], points: list[float]) -> dict[float, float]:
        acc = {points[0]: 0.0}
        total = 0.0
        for a, b in zip(points, points[1:]):
            val, err = quad(fn, a, b, limit=200)
            if err > 1e-6 * max(1.0, abs(val)) + 1e-9:
                raise QuadratureError(f"quadrature failed to converge on [{a}, {b}]")
            total += val
            acc[b] = total
        return acc

    int_alpha = cumulative(alpha_f, xs)
    int_l2a = cumulative(lambda t: lam0_f(t) + 2.0 * alpha_f(t), xs)

    anchors = sorted(int_l2a)

    def inner(t: float) -> float:
        # int_{x0}^{t} (l0 + 2a), anchored at the nearest cached grid point
        lo = max(a for a in anchors if a <= t)
        val, _ = quad(lambda u: lam0_f(u) + 2.0 * alpha_f(u), lo, t, limit=200)
        return int_l2a[lo] + val

    ej = cumulative(lambda t: _math_exp(inner(t)), xs)

    us = []
    ys = []
    for x in xs:
        j = ej[x]
        base = c2 + c1 * j
        u = _math_exp(-int_alpha[x]) * base
        us.append(u)
        growth = c1 * _math_exp(int_l2a[x] - int_alpha[x])
        if base == 0.0:
            ys.append(float("inf"))
        else:
            ys.append(-alpha_f(x) + growth / base)
    return GridSolution(tuple(xs), tuple(us), tuple(ys))
