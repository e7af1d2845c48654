"""Solver for the generalized Riccati equation y' + P y + Q y^2 = R.

Each linearizing transform turns the equation into u'' = l0 u' + s0 u, hands
the pair to the iteration core, and maps the terminating ratio back:

    T3:  l0 = Q'/Q - P,  s0 = QR,              y = -s_{n-1} / (Q l_{n-1})
    T4:  l0 = R'/R + P,  s0 = QR,              y = -R l_{n-1} / s_{n-1}
    T5:  l0 = R'/R - P,  s0 = R(Q - (P/R)'),   y = R l_{n-1} / (-s_{n-1} + P l_{n-1})
    T6:  l0 = P + Q'/Q,  s0 = Q((P/Q)' + R),   y = (-s_{n-1} - P l_{n-1}) / (Q l_{n-1})

The module also generates families of solvable equations from a terminating
seed pair, and implements the O(1) particular-solution criterion
Q'/Q - P + x Q R = 0  =>  y = 1/(xQ).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import exp as _math_exp
from typing import Callable, Optional

from .aim import (
    AimTrace,
    Solution,
    aim_iterate,
    find_termination,
    integrate_rational,
    particular_ratio,
)
from .errors import (
    AllTransformsFailedError,
    DegeneratePencilError,
    NoTerminationError,
    TransformInapplicableError,
    UnsupportedFormError,
)
from .symcore import Expr, NormalForm, eliminate, is_zero_mod, normalize

_ZERO = NormalForm.from_const(0)
_X = NormalForm.from_var("x")


class TransformId(enum.Enum):
    T3 = "T3"
    T4 = "T4"
    T5 = "T5"
    T6 = "T6"


@dataclass(frozen=True)
class RiccatiEquation:
    """Equation y' + P y + Q y^2 = R with its parameter list."""

    P: Expr
    Q: Expr
    R: Expr
    params: tuple[str, ...] = ()

    def __post_init__(self):
        if self.nf_Q().is_zero():
            raise ValueError("Q normalizes to zero: the equation is linear, not Riccati")

    def nf_P(self) -> NormalForm:
        return normalize(self.P)

    def nf_Q(self) -> NormalForm:
        return normalize(self.Q)

    def nf_R(self) -> NormalForm:
        return normalize(self.R)


def residual(eq: RiccatiEquation, y: Expr | NormalForm) -> NormalForm:
    """Normal form of y' + P y + Q y^2 - R."""
    ynf = normalize(y)
    return ynf.diff() + eq.nf_P() * ynf + eq.nf_Q() * ynf * ynf - eq.nf_R()


def to_linear(eq: RiccatiEquation, t: TransformId) -> tuple[NormalForm, NormalForm]:
    """Coefficient pair (l0, s0) of the transformed second-order equation."""
    p, q, r = eq.nf_P(), eq.nf_Q(), eq.nf_R()
    if t in (TransformId.T4, TransformId.T5) and r.is_zero():
        raise TransformInapplicableError(f"{t.value} requires R not identically zero")
    if t is TransformId.T3:
        return q.diff() / q - p, q * r
    if t is TransformId.T4:
        return r.diff() / r + p, q * r
    if t is TransformId.T5:
        return r.diff() / r - p, r * (q - (p / r).diff())
    if t is TransformId.T6:
        return p + q.diff() / q, q * ((p / q).diff() + r)
    raise ValueError(f"unknown transform {t!r}")


def _back_map(
    eq: RiccatiEquation, t: TransformId, trace: AimTrace, n: int
) -> NormalForm:
    """Theorem-specific reconstruction of y from the trace at index n."""
    p, q, r = eq.nf_P(), eq.nf_Q(), eq.nf_R()
    s_prev = trace.s(n - 1)
    lam_prev = trace.lam(n - 1)
    if t is TransformId.T3:
        if lam_prev.is_zero():
            raise DegeneratePencilError("l_{n-1} is identically zero in the T3 back-map")
        return -s_prev / (q * lam_prev)
    if t is TransformId.T4:
        if s_prev.is_zero():
            raise DegeneratePencilError("s_{n-1} is identically zero in the T4 back-map")
        return -(r * lam_prev) / s_prev
    if t is TransformId.T5:
        den = -s_prev + p * lam_prev
        if den.is_zero():
            raise DegeneratePencilError("denominator vanishes in the T5 back-map")
        return (r * lam_prev) / den
    if t is TransformId.T6:
        if lam_prev.is_zero():
            raise DegeneratePencilError("l_{n-1} is identically zero in the T6 back-map")
        return (-s_prev - p * lam_prev) / (q * lam_prev)
    raise ValueError(f"unknown transform {t!r}")


def quick_particular(eq: RiccatiEquation) -> Optional[Expr]:
    """y = 1/(xQ) whenever Q'/Q - P + x Q R normalizes to zero."""
    p, q, r = eq.nf_P(), eq.nf_Q(), eq.nf_R()
    condition = q.diff() / q - p + _X * q * r
    if not condition.is_zero():
        return None
    y = NormalForm.from_const(1) / (_X * q)
    return y.to_expr()


def _solve_with_transform(
    eq: RiccatiEquation, t: TransformId, n_max: int, degree_bound: int
) -> Solution:
    lam0, s0 = to_linear(eq, t)
    trace = aim_iterate(lam0, s0, n_max, degree_bound)
    term = find_termination(trace)
    if term.status == "none":
        raise NoTerminationError(f"{t.value}: no termination within {n_max}", trace=trace)
    assert term.n is not None
    y = _back_map(eq, t, trace, term.n)
    res = residual(eq, y)
    if not is_zero_mod(res, term.constraints):
        raise DegeneratePencilError(
            f"{t.value}: back-mapped candidate fails the residual certificate"
        )
    branches = []
    for c in term.constraints:
        try:
            branches.append((c, eliminate(y, c).to_expr()))
        except Exception:
            continue
    return Solution(
        expression=y.to_expr(),
        nf=y,
        theorem=t.value,
        n=term.n,
        constraints=term.constraints,
        branches=tuple(branches),
    )


_AUTO_ORDER = (TransformId.T3, TransformId.T4, TransformId.T5, TransformId.T6)


def solve(
    eq: RiccatiEquation,
    strategy: str | TransformId = "auto",
    n_max: int = 24,
    degree_bound: int = 512,
) -> Solution:
    """Solve the equation; strategy is 'auto' or a specific transform.

    Auto runs the quick particular-solution criterion first, then the
    transforms in the fixed order T3, T4, T5, T6, returning the first
    residual-certified success.
    """
    if isinstance(strategy, TransformId):
        return _solve_with_transform(eq, strategy, n_max, degree_bound)
    if strategy.lower() != "auto":
        t = TransformId(strategy.upper())
        return _solve_with_transform(eq, t, n_max, degree_bound)
    quick = quick_particular(eq)
    if quick is not None:
        ynf = normalize(quick)
        return Solution(
            expression=quick,
            nf=ynf,
            theorem="T3",
            n=1,
            notes=("found by the quick criterion Q'/Q - P + xQR = 0",),
        )
    failures: dict[str, str] = {}
    for t in _AUTO_ORDER:
        try:
            return _solve_with_transform(eq, t, n_max, degree_bound)
        except (
            NoTerminationError,
            DegeneratePencilError,
            TransformInapplicableError,
            UnsupportedFormError,
        ) as exc:
            failures[t.value] = f"{type(exc).__name__}: {exc}"
    raise AllTransformsFailedError("no transform produced a certified solution", failures)


# -- family generators ----------------------------------------------------------


@dataclass(frozen=True)
class FamilyResult:
    """A generated solvable equation together with its certified solution.

    When the seed integral has no supported symbolic form the equation and
    solution are emitted as numeric-only callables (exact=False); otherwise
    everything is exact and residual-certified.
    """

    equation: Optional[RiccatiEquation]
    solution: Optional[Solution]
    exact: bool
    transform: str
    seed_n: int
    numeric: Optional["FamilyNumeric"] = None


@dataclass(frozen=True)
class FamilyNumeric:
    """Pointwise evaluation hooks for a family with an unevaluated integral."""

    P: Callable[[float], float]
    Q: Callable[[float], float]
    R: Callable[[float], float]
    y: Callable[[float], float]
    anchor: float


def _exp_integral(integrand: NormalForm) -> Optional[NormalForm]:
    """exp(integral of integrand) as a normal form, when representable.

    Supported integrands are polynomial plus logarithmic-derivative terms
    whose exponentials become integer powers of the log arguments;
    fractional powers fall outside the integer-power grammar and yield None.
    """
    form = integrate_rational(integrand)
    if not form.exact or not form.polynomial_part.is_polynomial():
        return None
    one = NormalForm.from_const(1)
    result = NormalForm(one.num, one.den, form.polynomial_part.as_polynomial())
    for coeff, base in form.log_terms:
        if coeff.denominator != 1:
            return None
        result = result * (base ** int(coeff))
    return result


def _require_terminating_seed(
    lam0: Expr | NormalForm, s0: Expr | NormalForm, n_max: int
) -> tuple[AimTrace, int]:
    trace = aim_iterate(lam0, s0, n_max)
    term = find_termination(trace)
    if term.status != "terminates":
        raise NoTerminationError(
            "seed pair does not terminate unconditionally within n_max", trace=trace
        )
    assert term.n is not None
    return trace, term.n


def _certified_family(
    eq: RiccatiEquation, y: NormalForm, transform: str, n: int
) -> FamilyResult:
    res = residual(eq, y)
    if not res.is_zero():
        raise DegeneratePencilError(f"{transform} family solution fails its residual")
    sol = Solution(expression=y.to_expr(), nf=y, theorem=transform, n=n)
    return FamilyResult(eq, sol, True, transform, n)


def _numeric_family(
    lam0: NormalForm,
    s0: NormalForm,
    trace: AimTrace,
    n: int,
    free: NormalForm,
    transform: str,
    sign: int,
    anchor: float = 1.0,
) -> FamilyResult:
    """Quadrature-backed hooks for exp(integral of (lam0 +/- free))."""
    from scipy.integrate import quad

    integrand = lam0 + free if sign > 0 else lam0 - free
    ratio = particular_ratio(trace, n)

    def big_f(x: float) -> float:
        val, _ = quad(lambda t: integrand.evalf(t), anchor, x, limit=200)
        return _math_exp(val)

    if transform == "T3":
        qf = big_f

        def rf(x: float) -> float:
            return s0.evalf(x) / big_f(x)

        def yf(x: float) -> float:
            return -ratio.evalf(x) / big_f(x)

        pf = free.evalf
    else:
        raise ValueError("numeric hooks are only provided for the T3 family")
    return FamilyResult(
        None,
        None,
        False,
        transform,
        n,
        FamilyNumeric(P=pf, Q=qf, R=rf, y=yf, anchor=anchor),
    )


def generate_family_T3(
    lam0: Expr | NormalForm,
    s0: Expr | NormalForm,
    P: Expr | NormalForm,
    n_max: int = 24,
) -> FamilyResult:
    """Family Q = exp(int(l0+P)), R = s0 exp(-int(l0+P)) solved by the seed.

    The solution is y = -(s_{n-1}/l_{n-1}) exp(-int(l0+P)).
    """
    l0, s0n, pn = normalize(lam0), normalize(s0), normalize(P)
    trace, n = _require_terminating_seed(l0, s0n, n_max)
    ef = _exp_integral(l0 + pn)
    if ef is None:
        return _numeric_family(l0, s0n, trace, n, pn, "T3", +1)
    q = ef
    r = s0n / ef
    eq = RiccatiEquation(pn.to_expr(), q.to_expr(), r.to_expr(), _params_of(pn, q, r))
    y = -particular_ratio(trace, n) / ef
    return _certified_family(eq, y, "T3", n)


def generate_family_T3_R(
    lam0: Expr | NormalForm,
    s0: Expr | NormalForm,
    R: Expr | NormalForm,
    n_max: int = 24,
) -> FamilyResult:
    """Family P = s0'/s0 - R'/R - l0, Q = s0/R with solution -(R/s0)(s_{n-1}/l_{n-1})."""
    l0, s0n, rn = normalize(lam0), normalize(s0), normalize(R)
    if s0n.is_zero():
        raise ValueError("seed s0 must not be identically zero")
    if rn.is_zero():
        raise ValueError("R must not be identically zero")
    trace, n = _require_terminating_seed(l0, s0n, n_max)
    p = s0n.diff() / s0n - rn.diff() / rn - l0
    q = s0n / rn
    eq = RiccatiEquation(p.to_expr(), q.to_expr(), rn.to_expr(), _params_of(p, q, rn))
    y = -(rn / s0n) * particular_ratio(trace, n)
    return _certified_family(eq, y, "T3R", n)


def generate_family_T5_R(
    lam0: Expr | NormalForm,
    s0: Expr | NormalForm,
    R: Expr | NormalForm,
    n_max: int = 24,
) -> FamilyResult:
    """Family with P = R'/R - l0 and a derivative correction in Q.

    Q = s0/R + (R'/R^2 - l0/R)' and the solution is
    y = R l_{n-1} / (-s_{n-1} + (R'/R - l0) l_{n-1}).
    """
    l0, s0n, rn = normalize(lam0), normalize(s0), normalize(R)
    if rn.is_zero():
        raise ValueError("R must not be identically zero")
    trace, n = _require_terminating_seed(l0, s0n, n_max)
    p = rn.diff() / rn - l0
    q = s0n / rn + (rn.diff() / (rn * rn) - l0 / rn).diff()
    eq = RiccatiEquation(p.to_expr(), q.to_expr(), rn.to_expr(), _params_of(p, q, rn))
    lam_prev = trace.lam(n - 1)
    s_prev = trace.s(n - 1)
    den = -s_prev + p * lam_prev
    if den.is_zero():
        raise DegeneratePencilError("T5 family denominator vanishes identically")
    y = rn * lam_prev / den
    return _certified_family(eq, y, "T5R", n)


def generate_family_T6(
    lam0: Expr | NormalForm,
    s0: Expr | NormalForm,
    P: Expr | NormalForm,
    n_max: int = 24,
) -> FamilyResult:
    """Family Q = exp(int(l0-P)), R = s0 e^{-int} - (P e^{-int})'.

    The solution is y = -(s_{n-1}/l_{n-1}) exp(-int(l0-P)).
    """
    l0, s0n, pn = normalize(lam0), normalize(s0), normalize(P)
    trace, n = _require_terminating_seed(l0, s0n, n_max)
    ef = _exp_integral(l0 - pn)
    if ef is None:
        raise UnsupportedFormError(
            "integral of l0 - P has no supported symbolic form"
        )
    q = ef
    inv = NormalForm.from_const(1) / ef
    r = s0n * inv - (pn * inv).diff()
    eq = RiccatiEquation(pn.to_expr(), q.to_expr(), r.to_expr(), _params_of(pn, q, r))
    y = -particular_ratio(trace, n) * inv
    return _certified_family(eq, y, "T6", n)


def _params_of(*nfs: NormalForm) -> tuple[str, ...]:
    names: set[str] = set()
    for nf in nfs:
        names.update(v for v in nf.variables() if v != "x")
    return tuple(sorted(names))
