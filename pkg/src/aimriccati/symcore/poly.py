"""Sparse multivariate polynomials over exact rationals.

Monomials are stored as sorted tuples of ``(variable, exponent)`` pairs with
all exponents positive, so polynomials in different variable sets combine
without alignment bookkeeping.  The monomial order everywhere is graded
lexicographic with the independent variable ``x`` greatest and parameters
following alphabetically.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd
from typing import Iterable, Optional

Mono = tuple[tuple[str, int], ...]

_EMPTY: Mono = ()


def _rank(name: str) -> tuple[int, str]:
    # x outranks every parameter; parameters compare alphabetically.
    return (0, "") if name == "x" else (1, name)


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    merged: dict[str, int] = dict(a)
    for name, e in b:
        merged[name] = merged.get(name, 0) + e
    return tuple(sorted(merged.items(), key=lambda it: _rank(it[0])))


def _mono_div(a: Mono, b: Mono) -> Optional[Mono]:
    """a / b, or None when b does not divide a."""
    if not b:
        return a
    da = dict(a)
    for name, e in b:
        r = da.get(name, 0) - e
        if r < 0:
            return None
        if r == 0:
            da.pop(name, None)
        else:
            da[name] = r
    return tuple(sorted(da.items(), key=lambda it: _rank(it[0])))


def _mono_deg(m: Mono) -> int:
    return sum(e for _, e in m)


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict[Mono, Fraction]):
        # Takes ownership; callers must not pass zero coefficients.
        self.terms = terms
        self._hash: Optional[int] = None

    # -- construction -------------------------------------------------

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls({})

    @classmethod
    def const(cls, value) -> "Polynomial":
        q = Fraction(value)
        return cls({} if q == 0 else {_EMPTY: q})

    @classmethod
    def var(cls, name: str, exponent: int = 1) -> "Polynomial":
        if exponent < 0:
            raise ValueError("polynomial exponents must be nonnegative")
        if exponent == 0:
            return cls.const(1)
        return cls({((name, exponent),): Fraction(1)})

    @classmethod
    def from_terms(cls, items: Iterable[tuple[Mono, Fraction]]) -> "Polynomial":
        acc: dict[Mono, Fraction] = {}
        for mono, coeff in items:
            c = acc.get(mono, Fraction(0)) + coeff
            if c == 0:
                acc.pop(mono, None)
            else:
                acc[mono] = c
        return cls(acc)

    # -- basic protocol -----------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({self!s})"

    def __str__(self) -> str:
        return poly_str(self)

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- queries --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _EMPTY in self.terms)

    def as_constant(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if self.is_constant():
            return self.terms[_EMPTY]
        raise ValueError("polynomial is not constant")

    def variables(self) -> tuple[str, ...]:
        names = {name for mono in self.terms for name, _ in mono}
        return tuple(sorted(names, key=_rank))

    def degree(self, var: str) -> int:
        best = 0
        for mono in self.terms:
            for name, e in mono:
                if name == var and e > best:
                    best = e
        return best

    def total_degree(self) -> int:
        return max((_mono_deg(m) for m in self.terms), default=0)

    def leading(self, varlist: Optional[tuple[str, ...]] = None) -> tuple[Mono, Fraction]:
        """Leading term under graded lex over varlist (default: own variables)."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        if varlist is None:
            varlist = self.variables()

        def key(mono: Mono):
            d = dict(mono)
            return (_mono_deg(mono),) + tuple(d.get(v, 0) for v in varlist)

        m = max(self.terms, key=key)
        return m, self.terms[m]

    def leading_coeff(self) -> Fraction:
        return self.leading()[1]

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not self.terms:
            return other
        if not other.terms:
            return self
        acc = dict(self.terms)
        for mono, coeff in other.terms.items():
            c = acc.get(mono, Fraction(0)) + coeff
            if c == 0:
                acc.pop(mono, None)
            else:
                acc[mono] = c
        return Polynomial(acc)

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if not self.terms or not other.terms:
            return Polynomial.zero()
        acc: dict[Mono, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                c = acc.get(m, Fraction(0)) + c1 * c2
                if c == 0:
                    acc.pop(m, None)
                else:
                    acc[m] = c
        return Polynomial(acc)

    def scale(self, q: Fraction) -> "Polynomial":
        if q == 0:
            return Polynomial.zero()
        return Polynomial({m: c * q for m, c in self.terms.items()})

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- calculus and evaluation ----------------------------------------

    def diff(self, var: str = "x") -> "Polynomial":
        acc: dict[Mono, Fraction] = {}
        for mono, coeff in self.terms.items():
            d = dict(mono)
            e = d.get(var, 0)
            if e == 0:
                continue
            if e == 1:
                d.pop(var)
            else:
                d[var] = e - 1
            m = tuple(sorted(d.items(), key=lambda it: _rank(it[0])))
            c = acc.get(m, Fraction(0)) + coeff * e
            if c == 0:
                acc.pop(m, None)
            else:
                acc[m] = c
        return Polynomial(acc)

    def evaluate(self, bindings: dict[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            term = coeff
            for name, e in mono:
                term *= bindings[name] ** e
            total += term
        return total

    def evalf(self, bindings: dict[str, float]) -> float:
        total = 0.0
        for mono, coeff in self.terms.items():
            term = float(coeff)
            for name, e in mono:
                term *= bindings[name] ** e
            total += term
        return total

    def subs(self, var: str, value: "Polynomial") -> "Polynomial":
        """Substitute a polynomial for a variable (Horner in var)."""
        coeffs = self.coeffs_in(var)
        result = Polynomial.zero()
        for c in reversed(coeffs):
            result = result * value + c
        return result

    def bind(self, bindings: dict[str, Fraction]) -> "Polynomial":
        """Substitute rational values for a subset of the variables."""
        acc: dict[Mono, Fraction] = {}
        for mono, coeff in self.terms.items():
            c = coeff
            rest = []
            for name, e in mono:
                if name in bindings:
                    c *= bindings[name] ** e
                else:
                    rest.append((name, e))
            if c == 0:
                continue
            m = tuple(rest)
            c2 = acc.get(m, Fraction(0)) + c
            if c2 == 0:
                acc.pop(m, None)
            else:
                acc[m] = c2
        return Polynomial(acc)

    # -- views ----------------------------------------------------------

    def coeffs_in(self, var: str) -> list["Polynomial"]:
        """Dense coefficient list [c0, c1, ...] viewing self in ZZ[...][var]."""
        deg = self.degree(var)
        buckets: list[dict[Mono, Fraction]] = [dict() for _ in range(deg + 1)]
        for mono, coeff in self.terms.items():
            d = dict(mono)
            e = d.pop(var, 0)
            m = tuple(sorted(d.items(), key=lambda it: _rank(it[0])))
            buckets[e][m] = buckets[e].get(m, Fraction(0)) + coeff
        return [Polynomial({m: c for m, c in b.items() if c != 0}) for b in buckets]

    @staticmethod
    def from_coeffs_in(var: str, coeffs: list["Polynomial"]) -> "Polynomial":
        acc: dict[Mono, Fraction] = {}
        for e, c in enumerate(coeffs):
            shift: Mono = _EMPTY if e == 0 else ((var, e),)
            for mono, coeff in c.terms.items():
                m = _mono_mul(mono, shift)
                q = acc.get(m, Fraction(0)) + coeff
                if q == 0:
                    acc.pop(m, None)
                else:
                    acc[m] = q
        return Polynomial(acc)

    def coeff_in(self, var: str, exponent: int) -> "Polynomial":
        acc: dict[Mono, Fraction] = {}
        for mono, coeff in self.terms.items():
            d = dict(mono)
            if d.pop(var, 0) != exponent:
                continue
            m = tuple(sorted(d.items(), key=lambda it: _rank(it[0])))
            acc[m] = acc.get(m, Fraction(0)) + coeff
        return Polynomial({m: c for m, c in acc.items() if c != 0})

    # -- content and canonical form ---------------------------------------

    def rational_content(self) -> Fraction:
        """Positive rational c with self/c integer-primitive (0 for zero)."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = _int_gcd(num, abs(c.numerator))
            den = den * c.denominator // _int_gcd(den, c.denominator)
        return Fraction(num, den)

    def monomial_content(self) -> Mono:
        """Largest monomial dividing every term."""
        if not self.terms:
            return _EMPTY
        common: Optional[dict[str, int]] = None
        for mono in self.terms:
            d = dict(mono)
            if common is None:
                common = d
            else:
                common = {
                    name: min(e, d[name]) for name, e in common.items() if name in d
                }
                common = {name: e for name, e in common.items() if e > 0}
            if not common:
                return _EMPTY
        assert common is not None
        return tuple(sorted(common.items(), key=lambda it: _rank(it[0])))

    def div_mono(self, mono: Mono) -> "Polynomial":
        if not mono:
            return self
        acc = {}
        for m, c in self.terms.items():
            q = _mono_div(m, mono)
            if q is None:
                raise ValueError("monomial does not divide every term")
            acc[q] = c
        return Polynomial(acc)

    def canonical(self) -> "Polynomial":
        """Integer-primitive associate with positive graded-lex leading coefficient."""
        if not self.terms:
            return self
        c = self.rational_content()
        if self.leading()[1] < 0:
            c = -c
        return Polynomial({m: q / c for m, q in self.terms.items()})


# -- division ---------------------------------------------------------------


def exact_div(f: Polynomial, g: Polynomial) -> Optional[Polynomial]:
    """f / g when the division is exact, else None."""
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if f.is_zero():
        return Polynomial.zero()
    if g.is_constant():
        return f.scale(1 / g.as_constant())
    varlist = tuple(sorted(set(f.variables()) | set(g.variables()), key=_rank))
    lg_mono, lg_coeff = g.leading(varlist)
    quot: dict[Mono, Fraction] = {}
    r = f
    while not r.is_zero():
        lr_mono, lr_coeff = r.leading(varlist)
        m = _mono_div(lr_mono, lg_mono)
        if m is None:
            return None
        c = lr_coeff / lg_coeff
        quot[m] = quot.get(m, Fraction(0)) + c
        r = r - Polynomial({m: c}) * g
    return Polynomial({m: c for m, c in quot.items() if c != 0})


def prem(f: Polynomial, g: Polynomial, var: str) -> Polynomial:
    """Pseudo-remainder of f by g with respect to var."""
    dg = g.degree(var)
    if g.is_zero():
        raise ZeroDivisionError("pseudo-division by zero")
    df = f.degree(var)
    if df < dg:
        return f
    lc_g = g.coeff_in(var, dg)
    r = f
    e = df - dg + 1
    while not r.is_zero():
        dr = r.degree(var)
        if dr < dg:
            break
        lc_r = r.coeff_in(var, dr)
        shift = Polynomial.var(var, dr - dg) if dr > dg else Polynomial.const(1)
        r = lc_g * r - lc_r * shift * g
        e -= 1
    if e > 0:
        r = (lc_g ** e) * r
    return r


# -- gcd ----------------------------------------------------------------------


def _cont_pp(f: Polynomial, var: str) -> tuple[Polynomial, Polynomial]:
    """Content and primitive part of f viewed in (rest)[var]."""
    coeffs = [c for c in f.coeffs_in(var) if not c.is_zero()]
    cont = Polynomial.zero()
    for c in coeffs:
        cont = gcd(cont, c)
        if cont.is_constant() and cont.as_constant() == 1:
            break
    pp = exact_div(f, cont)
    assert pp is not None
    return cont, pp


def _gcd_univar(f: Polynomial, g: Polynomial, var: str) -> Polynomial:
    """Euclidean gcd over QQ[var] via dense coefficient lists."""

    def dense(p: Polynomial) -> list[Fraction]:
        out = [Fraction(0)] * (p.degree(var) + 1)
        for mono, coeff in p.terms.items():
            e = dict(mono).get(var, 0)
            out[e] += coeff
        while out and out[-1] == 0:
            out.pop()
        return out

    a, b = dense(f), dense(g)
    while b:
        # remainder of a by b (b made monic on the fly)
        inv = 1 / b[-1]
        while len(a) >= len(b):
            c = a[-1] * inv
            off = len(a) - len(b)
            for i in range(len(b)):
                a[off + i] -= c * b[i]
            while a and a[-1] == 0:
                a.pop()
        a, b = b, a
    if not a:
        return Polynomial.zero()
    p = Polynomial.from_terms(
        ((((var, e),) if e else _EMPTY), c) for e, c in enumerate(a) if c != 0
    )
    return p.canonical()


def _subresultant_prs(a: Polynomial, b: Polynomial, var: str) -> Polynomial:
    """Last nonzero member of the subresultant PRS of primitive a, b."""
    if a.degree(var) < b.degree(var):
        a, b = b, a
    g = Polynomial.const(1)
    h = Polynomial.const(1)
    while True:
        if b.degree(var) == 0:
            return b
        d = a.degree(var) - b.degree(var)
        r = prem(a, b, var)
        if r.is_zero():
            return b
        divisor = g * (h ** d)
        nxt = exact_div(r, divisor)
        assert nxt is not None, "subresultant division must be exact"
        a, b = b, nxt
        g = a.coeff_in(var, a.degree(var))
        if d == 1:
            h = g
        elif d > 1:
            quotient = exact_div(g ** d, h ** (d - 1))
            assert quotient is not None, "subresultant h-update must be exact"
            h = quotient


def _mono_gcd(a: Mono, b: Mono) -> Mono:
    da, db = dict(a), dict(b)
    common = {n: min(e, db[n]) for n, e in da.items() if n in db}
    return tuple(sorted(common.items(), key=lambda it: _rank(it[0])))


def _symmetric_mod(n: int, xi: int) -> int:
    r = n % xi
    return r - xi if r > xi // 2 else r


def _heu_interpolate(img: Polynomial, var: str, xi: int, max_digits: int) -> Optional[Polynomial]:
    """Recover a polynomial in var from its value at var=xi (base-xi digits)."""
    coeffs: list[Polynomial] = []
    gamma = img
    while not gamma.is_zero():
        if len(coeffs) > max_digits:
            return None
        digit_terms = {}
        for mono, c in gamma.terms.items():
            if c.denominator != 1:
                return None
            d = _symmetric_mod(c.numerator, xi)
            if d:
                digit_terms[mono] = Fraction(d)
        digit = Polynomial(digit_terms)
        coeffs.append(digit)
        gamma = (gamma - digit).scale(Fraction(1, xi))
    return Polynomial.from_coeffs_in(var, coeffs)


def _heugcd(f: Polynomial, g: Polynomial, varlist: tuple[str, ...]) -> Optional[Polynomial]:
    """Heuristic gcd by evaluation at a large integer, verified by trial division.

    Both inputs must be integer-primitive.  Returns a canonical divisor of
    both, or None when the heuristic fails (caller falls back to the PRS).
    """
    if not varlist:
        a = abs(f.as_constant().numerator)
        b = abs(g.as_constant().numerator)
        return Polynomial.const(_int_gcd(a, b))
    var = varlist[0]
    rest = varlist[1:]
    fnorm = max(abs(c.numerator) for c in f.terms.values())
    gnorm = max(abs(c.numerator) for c in g.terms.values())
    xi = 2 * min(fnorm, gnorm) + 29
    max_digits = min(f.degree(var), g.degree(var)) + 1
    for _ in range(6):
        fi = f.bind({var: Fraction(xi)})
        gi = g.bind({var: Fraction(xi)})
        if fi.is_zero() or gi.is_zero():
            xi = xi * 73794 // 27011 + 1
            continue
        # images keep their integer content: the base-xi digits of the image
        # gcd are exactly what reconstructs the polynomial
        sub_vars = tuple(v for v in rest if v in set(fi.variables()) | set(gi.variables()))
        h_img = _heugcd(fi, gi, sub_vars)
        if h_img is not None:
            h = _heu_interpolate(h_img, var, xi, max_digits)
            if h is not None and not h.is_zero():
                h = h.canonical()
                if exact_div(f, h) is not None and exact_div(g, h) is not None:
                    return h
        xi = xi * 73794 // 27011 + 1
    return None


def gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Exact polynomial gcd, canonical (integer-primitive, positive leading).

    Monomial content is split off first; the heuristic evaluation gcd does
    the heavy lifting (its answer is verified by exact trial division), with
    the subresultant PRS as a deterministic fallback.
    """
    if f.is_zero():
        return g.canonical()
    if g.is_zero():
        return f.canonical()
    if f.is_constant() or g.is_constant():
        return Polynomial.const(1)
    if f.terms == g.terms:
        return f.canonical()
    fm, gm = f.monomial_content(), g.monomial_content()
    if fm:
        f = f.div_mono(fm)
    if gm:
        g = g.div_mono(gm)
    shared = _mono_gcd(fm, gm)
    common = Polynomial({shared: Fraction(1)}) if shared else Polynomial.const(1)
    if f.is_constant() or g.is_constant():
        return common.canonical()
    # divide-through shortcut: nested powers of one base are frequent in
    # denominators, and exact division is much cheaper than a full gcd
    if f.total_degree() >= g.total_degree():
        if exact_div(f, g) is not None:
            return (common * g).canonical()
    elif exact_div(g, f) is not None:
        return (common * f).canonical()
    varlist = tuple(sorted(set(f.variables()) | set(g.variables()), key=_rank))
    h = _heugcd(f.canonical(), g.canonical(), varlist)
    if h is not None:
        return (common * h).canonical()
    if len(varlist) == 1:
        return (common * _gcd_univar(f, g, varlist[0])).canonical()
    return (common * _gcd_prs(f, g, varlist)).canonical()


def _gcd_prs(f: Polynomial, g: Polynomial, varlist: tuple[str, ...]) -> Polynomial:
    """Subresultant-PRS gcd; exact but slower than the heuristic path."""
    var = varlist[0]
    if f.degree(var) == 0:
        cg, _ = _cont_pp(g, var)
        return gcd(f, cg)
    if g.degree(var) == 0:
        cf, _ = _cont_pp(f, var)
        return gcd(cf, g)
    cf, pf = _cont_pp(f, var)
    cg, pg = _cont_pp(g, var)
    c = gcd(cf, cg)
    h = _subresultant_prs(pf, pg, var)
    if h.degree(var) == 0:
        return c.canonical()
    _, hp = _cont_pp(h, var)
    return (c * hp).canonical()


# -- printing -----------------------------------------------------------------


def _mono_str(mono: Mono) -> str:
    parts = []
    for name, e in mono:
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _coeff_str(q: Fraction) -> str:
    return str(q)  # Fraction prints as "p/q" or "p"


def sorted_terms(p: Polynomial) -> list[tuple[Mono, Fraction]]:
    varlist = p.variables()

    def key(item):
        mono, _ = item
        d = dict(mono)
        return (_mono_deg(mono),) + tuple(d.get(v, 0) for v in varlist)

    return sorted(p.terms.items(), key=key, reverse=True)


def poly_str(p: Polynomial) -> str:
    """Canonical printed form: graded-lex descending, re-parseable."""
    if p.is_zero():
        return "0"
    pieces: list[str] = []
    for i, (mono, coeff) in enumerate(sorted_terms(p)):
        neg = coeff < 0
        mag = -coeff if neg else coeff
        if not mono:
            body = _coeff_str(mag)
        elif mag == 1:
            body = _mono_str(mono)
        else:
            body = f"{_coeff_str(mag)}*{_mono_str(mono)}"
        if i == 0:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f" - {body}" if neg else f" + {body}")
    return "".join(pieces)
