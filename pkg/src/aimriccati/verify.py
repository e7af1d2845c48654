"""Independent checks for closed-form solutions.

Three layers, in increasing independence from the symbolic engine: the exact
residual normal form, a floating residual maximum over a pole-filtered grid,
and a fixed-step fourth-order Runge-Kutta integration of the equation
compared pointwise against the closed form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import IntegrationEscapedError, PoleOnGridError
from .riccati import RiccatiEquation, residual as _residual_nf
from .symcore import (
    Constraint,
    Expr,
    NormalForm,
    differentiate,
    evaluate_numeric,
    is_zero_mod,
    normalize,
)

ESCAPE_LIMIT = 1e12


@dataclass
class VerificationReport:
    """Outcome of the symbolic and numeric checks for one solution."""

    symbolic_residual_zero: bool
    max_numeric_residual: float
    grid: tuple[float, ...]
    rk_max_deviation: Optional[float] = None
    rk_interval: Optional[tuple[float, float]] = None
    constraint_bindings: dict[str, Fraction] = field(default_factory=dict)
    notes: tuple[str, ...] = ()


def symbolic_residual(eq: RiccatiEquation, y: Expr | NormalForm) -> NormalForm:
    """Normal form of y' + P y + Q y^2 - R; zero certifies the solution."""
    return _residual_nf(eq, y)


def _denominators(eq: RiccatiEquation, y: Expr | NormalForm) -> list[NormalForm]:
    return [normalize(e) for e in (eq.P, eq.Q, eq.R, y)]


def numeric_residual_grid(
    eq: RiccatiEquation,
    y: Expr | NormalForm,
    grid: Sequence[float],
    bindings: dict[str, Fraction] | None = None,
) -> float:
    """Max of |y' + P y + Q y^2 - R| over the grid, with y' taken symbolically."""
    env = {k: float(v) for k, v in (bindings or {}).items()}
    ynf = normalize(y)
    yexpr = ynf.to_expr()
    yprime = differentiate(yexpr)
    nfs = _denominators(eq, ynf)
    worst = 0.0
    for x in grid:
        for nf in nfs:
            if abs(nf.den.evalf({**env, "x": float(x)})) <= 1e-6:
                raise PoleOnGridError(f"grid point {x} is too close to a pole")
        p = evaluate_numeric(eq.P, x, env)
        q = evaluate_numeric(eq.Q, x, env)
        r = evaluate_numeric(eq.R, x, env)
        yv = evaluate_numeric(yexpr, x, env)
        ypv = evaluate_numeric(yprime, x, env)
        worst = max(worst, abs(ypv + p * yv + q * yv * yv - r))
    return worst


def rk_integrate(
    eq: RiccatiEquation,
    y0: float,
    x0: float,
    x1: float,
    steps: int,
    bindings: dict[str, Fraction] | None = None,
) -> tuple[list[float], list[float]]:
    """Classic fixed-step RK4 on y' = R - P y - Q y^2 from (x0, y0)."""
    env = {k: float(v) for k, v in (bindings or {}).items()}

    def f(x: float, yv: float) -> float:
        p = evaluate_numeric(eq.P, x, env)
        q = evaluate_numeric(eq.Q, x, env)
        r = evaluate_numeric(eq.R, x, env)
        return r - p * yv - q * yv * yv

    h = (x1 - x0) / steps
    xs = [x0 + i * h for i in range(steps + 1)]
    ys = [y0]
    y = y0
    for i in range(steps):
        x = xs[i]
        k1 = f(x, y)
        k2 = f(x + h / 2, y + h * k1 / 2)
        k3 = f(x + h / 2, y + h * k2 / 2)
        k4 = f(x + h, y + h * k3)
        y = y + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6
        if abs(y) > ESCAPE_LIMIT:
            raise IntegrationEscapedError(
                f"integration escaped near x = {xs[i + 1]:.6g} (movable pole?)"
            )
        ys.append(y)
    return xs, ys


def rk_crosscheck(
    eq: RiccatiEquation,
    y: Expr | NormalForm,
    x0: float,
    x1: float,
    steps: int = 1000,
    bindings: dict[str, Fraction] | None = None,
) -> float:
    """Max |y_rk - y_closed| over the RK mesh, started from the closed form."""
    env = {k: float(v) for k, v in (bindings or {}).items()}
    yexpr = normalize(y).to_expr()
    y0 = evaluate_numeric(yexpr, x0, env)
    xs, ys = rk_integrate(eq, y0, x0, x1, steps, bindings)
    worst = 0.0
    for x, yv in zip(xs, ys):
        closed = evaluate_numeric(yexpr, x, env)
        worst = max(worst, abs(yv - closed))
    return worst


def rk_convergence_ratio(
    eq: RiccatiEquation,
    y: Expr | NormalForm,
    x0: float,
    x1: float,
    steps: int,
    bindings: dict[str, Fraction] | None = None,
) -> float:
    """deviation(2N) / deviation(N); at fourth order this is about 1/16."""
    d1 = rk_crosscheck(eq, y, x0, x1, steps, bindings)
    d2 = rk_crosscheck(eq, y, x0, x1, 2 * steps, bindings)
    if d1 == 0.0:
        return 0.0
    return d2 / d1


# -- parameter bindings -----------------------------------------------------------


def random_rational(rng: random.Random, lo: int = 1, hi: int = 5, max_den: int = 7) -> Fraction:
    den = rng.randint(1, max_den)
    num = rng.randint(lo * den, hi * den)
    return Fraction(num, den)


def make_bindings(
    params: Sequence[str],
    constraints: Sequence[Constraint] = (),
    seed: int = 0,
    lo: int = 1,
    hi: int = 5,
) -> dict[str, Fraction]:
    """Random exact rational bindings in [lo, hi] satisfying linear constraints.

    Constrained parameters are solved for exactly from the free ones; the
    caller should re-roll (new seed) if a denominator degenerates.
    """
    rng = random.Random(seed)
    solved_params: dict[str, Fraction] = {}
    pivot_for: dict[str, Constraint] = {}
    free = list(params)
    for c in constraints:
        pivot = None
        for v in c.poly.variables():
            if c.poly.degree(v) == 1 and v in free:
                pivot = v
                break
        if pivot is None:
            raise ValueError(f"cannot pick a linear pivot for constraint {c}")
        free.remove(pivot)
        pivot_for[pivot] = c
    for p in free:
        solved_params[p] = random_rational(rng, lo, hi)
    for pivot, c in pivot_for.items():
        var, value = _solve_linear(c, pivot, solved_params)
        solved_params[var] = value
    return solved_params


def _solve_linear(c: Constraint, pivot: str, known: dict[str, Fraction]) -> tuple[str, Fraction]:
    coeffs = c.poly.coeffs_in(pivot)
    a = coeffs[1].evaluate(known)
    b = coeffs[0].evaluate(known)
    if a == 0:
        raise ZeroDivisionError("pivot coefficient vanished under the bindings")
    return pivot, -b / a


# -- grid and window selection ------------------------------------------------------


def filtered_grid(
    eq: RiccatiEquation,
    y: Expr | NormalForm,
    interval: tuple[float, float],
    bindings: dict[str, Fraction] | None = None,
    points: int = 41,
    rel_threshold: float = 0.05,
) -> list[float]:
    """Equispaced points with near-pole entries dropped.

    A point is kept when every relevant denominator exceeds rel_threshold
    times its maximum magnitude over the interval.
    """
    env = {k: float(v) for k, v in (bindings or {}).items()}
    lo, hi = interval
    xs = [lo + (hi - lo) * i / (points - 1) for i in range(points)]
    nfs = _denominators(eq, y)
    keep = []
    maxes = []
    for nf in nfs:
        maxes.append(max(abs(nf.den.evalf({**env, "x": x})) for x in xs) or 1.0)
    for x in xs:
        ok = True
        for nf, m in zip(nfs, maxes):
            if abs(nf.den.evalf({**env, "x": x})) <= rel_threshold * m:
                ok = False
                break
        if ok:
            keep.append(x)
    return keep


def pole_free_window(
    eq: RiccatiEquation,
    y: Expr | NormalForm,
    interval: tuple[float, float],
    bindings: dict[str, Fraction] | None = None,
    samples: int = 400,
    rel_threshold: float = 0.1,
    min_width_frac: float = 0.12,
) -> Optional[tuple[float, float]]:
    """Longest subinterval where every denominator stays clearly nonzero."""
    env = {k: float(v) for k, v in (bindings or {}).items()}
    lo, hi = interval
    xs = [lo + (hi - lo) * i / (samples - 1) for i in range(samples)]
    nfs = _denominators(eq, y)
    maxes = [
        max(abs(nf.den.evalf({**env, "x": x})) for x in xs) or 1.0 for nf in nfs
    ]

    def clear(x: float) -> bool:
        return all(
            abs(nf.den.evalf({**env, "x": x})) > rel_threshold * m
            for nf, m in zip(nfs, maxes)
        )

    best: Optional[tuple[int, int]] = None
    start = None
    for i, x in enumerate(xs):
        if clear(x):
            if start is None:
                start = i
        else:
            if start is not None and (best is None or i - start > best[1] - best[0]):
                best = (start, i - 1)
            start = None
    if start is not None and (best is None or samples - start > best[1] - best[0]):
        best = (start, samples - 1)
    if best is None:
        return None
    a, b = xs[best[0]], xs[best[1]]
    width = b - a
    if width < min_width_frac * (hi - lo):
        return None
    pad = 0.1 * width
    return (a + pad, b - pad)


# -- full report ----------------------------------------------------------------------


def build_report(
    eq: RiccatiEquation,
    y: Expr | NormalForm,
    constraints: Sequence[Constraint] = (),
    interval: tuple[float, float] = (0.1, 0.9),
    seed: int = 0,
    grid_points: int = 41,
    rk_steps: int = 1000,
    max_rerolls: int = 8,
) -> VerificationReport:
    """Symbolic residual plus numeric grid and RK checks with seeded bindings."""
    res = symbolic_residual(eq, y)
    sym_zero = is_zero_mod(res, constraints)
    params = sorted(set(eq.params) | {v for v in normalize(y).variables() if v != "x"})
    notes: list[str] = []
    bindings: dict[str, Fraction] = {}
    grid: list[float] = []
    for attempt in range(max_rerolls):
        try:
            bindings = make_bindings(params, constraints, seed + attempt)
            grid = filtered_grid(eq, y, interval, bindings, grid_points)
        except ZeroDivisionError:
            continue
        if len(grid) >= max(5, grid_points // 3):
            break
    else:
        raise PoleOnGridError("could not find a usable grid after re-rolls")
    max_res = numeric_residual_grid(eq, y, grid, bindings)
    rk_dev = None
    rk_interval = None
    window = pole_free_window(eq, y, interval, bindings)
    if window is not None:
        try:
            rk_dev = rk_crosscheck(eq, y, window[0], window[1], rk_steps, bindings)
            rk_interval = window
        except IntegrationEscapedError as exc:
            notes.append(str(exc))
    else:
        notes.append("no pole-free window wide enough for integration")
    return VerificationReport(
        symbolic_residual_zero=sym_zero,
        max_numeric_residual=max_res,
        grid=tuple(grid),
        rk_max_deviation=rk_dev,
        rk_interval=rk_interval,
        constraint_bindings=bindings,
        notes=tuple(notes),
    )
