"""Exact rational scalars, rational intervals, and rigorous polynomial ranges.

Polynomials are tuples of :class:`fractions.Fraction` coefficients in
ascending degree.  Nothing in this module touches floating point.
"""
from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import sympy

Rational = Fraction
Poly = tuple  # tuple[Fraction, ...], ascending degree

DEPTH_CAP = 64

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


class ArgumentError(ValueError):
    """Raised when an operation receives arguments outside its contract."""


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` (optionally signed) into a Fraction."""
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ArgumentError(f"not a rational numeral: {text!r}")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ArgumentError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise ArgumentError(f"cannot use {type(value).__name__} as an exact rational")


# ---------------------------------------------------------------------------
# intervals


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ArgumentError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, q) -> "Interval":
        q = as_rational(q)
        return cls(q, q)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, q) -> bool:
        return self.lo <= q <= self.hi

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: "Interval") -> "Interval":
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __mul__(self, other: "Interval") -> "Interval":
        products = (self.lo * other.lo, self.lo * other.hi,
                    self.hi * other.lo, self.hi * other.hi)
        return Interval(min(products), max(products))

    def scale(self, c: Fraction) -> "Interval":
        a, b = self.lo * c, self.hi * c
        return Interval(min(a, b), max(a, b))

    def shift(self, c: Fraction) -> "Interval":
        return Interval(self.lo + c, self.hi + c)

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __str__(self):
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"


@dataclass(frozen=True)
class Enclosure:
    """Rational interval certified to contain a real quantity."""

    bounds: Interval
    converged: bool = True

    @classmethod
    def exact(cls, q) -> "Enclosure":
        return cls(Interval.point(q), True)

    @classmethod
    def of(cls, lo, hi, tol=None) -> "Enclosure":
        iv = Interval(as_rational(lo), as_rational(hi))
        return cls(iv, True if tol is None else iv.width <= tol)

    @property
    def lo(self) -> Fraction:
        return self.bounds.lo

    @property
    def hi(self) -> Fraction:
        return self.bounds.hi

    @property
    def width(self) -> Fraction:
        return self.bounds.width

    def __contains__(self, q) -> bool:
        return q in self.bounds

    def overlaps(self, other: "Enclosure") -> bool:
        return self.bounds.intersects(other.bounds)

    def __str__(self):
        if self.lo == self.hi:
            return format_rational(self.lo)
        return str(self.bounds)


# ---------------------------------------------------------------------------
# interval sets


@dataclass(frozen=True)
class IntervalSet:
    """Finite disjoint union of intervals; each component is
    ``(lo, lo_open, hi, hi_open)`` and components are sorted by ``lo``."""

    components: tuple = ()

    def __post_init__(self):
        prev = None
        for comp in self.components:
            if len(comp) != 4:
                raise ArgumentError(f"malformed component {comp!r}")
            lo, lo_open, hi, hi_open = comp
            if lo > hi or (lo == hi and (lo_open or hi_open)):
                raise ArgumentError(f"empty component {comp!r}")
            if prev is not None:
                plo, _, phi, phi_open = prev
                if lo < phi or (lo == phi and not (phi_open or lo_open)):
                    raise ArgumentError("components overlap or are unsorted")
            prev = comp

    @classmethod
    def from_components(cls, comps: Iterable[tuple]) -> "IntervalSet":
        """Normalise arbitrary (possibly touching or overlapping) pieces."""
        items = sorted(
            (c for c in comps if c[0] < c[2] or (c[0] == c[2] and not c[1] and not c[3])),
            key=lambda c: (c[0], c[1]),
        )
        merged: list[list] = []
        for lo, lo_open, hi, hi_open in items:
            if merged:
                m = merged[-1]
                touching = lo < m[2] or (lo == m[2] and not (m[3] and lo_open))
                if touching:
                    if hi > m[2] or (hi == m[2] and not hi_open):
                        m[2], m[3] = hi, hi_open
                    continue
            merged.append([lo, lo_open, hi, hi_open])
        return cls(tuple(tuple(m) for m in merged))

    def __contains__(self, x) -> bool:
        for lo, lo_open, hi, hi_open in self.components:
            if (lo < x or (lo == x and not lo_open)) and (x < hi or (x == hi and not hi_open)):
                return True
        return False

    def __bool__(self):
        return bool(self.components)

    def __str__(self):
        if not self.components:
            return "{}"
        parts = []
        for lo, lo_open, hi, hi_open in self.components:
            parts.append(f"{']' if lo_open else '['}{format_rational(lo)}, "
                         f"{format_rational(hi)}{'[' if hi_open else ']'}")
        return " U ".join(parts)


def measure(s: IntervalSet) -> Fraction:
    """Exact Lebesgue measure of a finite interval union."""
    if not isinstance(s, IntervalSet):
        raise ArgumentError("measure expects an IntervalSet")
    return sum((hi - lo for lo, _, hi, _ in s.components), Fraction(0))


# ---------------------------------------------------------------------------
# polynomials


def make_poly(coeffs: Iterable) -> Poly:
    c = [as_rational(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c) if c else (Fraction(0),)


def poly_eval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_derivative(p: Sequence[Fraction]) -> Poly:
    if len(p) <= 1:
        return (Fraction(0),)
    return make_poly(k * p[k] for k in range(1, len(p)))


def poly_is_constant(p: Sequence[Fraction]) -> bool:
    return all(c == 0 for c in p[1:])


def taylor_shift(p: Sequence[Fraction], x0: Fraction) -> list[Fraction]:
    """Coefficients of ``t -> p(x0 + t)``."""
    a = list(p)
    n = len(a)
    for i in range(n - 1):
        for k in range(n - 2, i - 1, -1):
            a[k] += x0 * a[k + 1]
    return a


def interval_horner(p: Sequence[Fraction], x: Interval) -> Interval:
    acc = Interval.point(p[-1])
    for c in reversed(p[:-1]):
        acc = (acc * x).shift(c)
    return acc


def taylor_bounds(p: Sequence[Fraction], x: Interval) -> Interval:
    """Centred-form bound: expand about the midpoint, bound ``t**k`` on ``[-r, r]``."""
    a = taylor_shift(p, x.mid)
    r = x.width / 2
    lo = hi = a[0]
    rk = Fraction(1)
    for k in range(1, len(a)):
        rk *= r
        ak = a[k]
        if ak == 0:
            continue
        if k % 2:
            lo -= abs(ak) * rk
            hi += abs(ak) * rk
        elif ak > 0:
            hi += ak * rk
        else:
            lo += ak * rk
    return Interval(lo, hi)


def outer_range(p: Sequence[Fraction], x: Interval) -> Interval:
    """Rigorous outer range of ``p`` on ``x``: Horner and centred forms, intersected."""
    h = interval_horner(p, x)
    if len(p) <= 2:
        return h
    t = taylor_bounds(p, x)
    return Interval(max(h.lo, t.lo), min(h.hi, t.hi))


def _bb_sup(p, window: Interval, tol: Fraction) -> Enclosure:
    # best-first bisection; children inherit the parent's outer bound as a cap,
    # so the reported outer bound never grows as the search continues
    lo, hi = window.lo, window.hi
    best = max(poly_eval(p, lo), poly_eval(p, hi), poly_eval(p, window.mid))
    counter = 0
    heap = [(-outer_range(p, window).hi, counter, lo, hi, 0)]
    converged = True
    while heap:
        neg_u, _, blo, bhi, depth = heap[0]
        upper = max(-neg_u, best)
        if upper - best <= tol:
            return Enclosure(Interval(best, upper), True)
        if depth >= DEPTH_CAP:
            converged = False
            break
        heapq.heappop(heap)
        mid = (blo + bhi) / 2
        best = max(best, poly_eval(p, mid))
        for clo, chi in ((blo, mid), (mid, bhi)):
            child = Interval(clo, chi)
            u = min(-neg_u, outer_range(p, child).hi)
            if u > best:
                counter += 1
                heapq.heappush(heap, (-u, counter, clo, chi, depth + 1))
    upper = max(-heap[0][0], best) if heap else best
    return Enclosure(Interval(best, upper), converged and upper - best <= tol)


def range_enclosure(p: Sequence[Fraction], window: Interval, tol) -> tuple[Enclosure, Enclosure]:
    """Enclose the supremum and infimum of polynomial ``p`` over ``window``.

    Outer bounds come from interval evaluation, inner bounds from exact
    evaluations at subdivision points; boxes are bisected (best first) until
    the two meet within ``tol`` or a box reaches depth 64.

    Returns ``(sup, inf)``.
    """
    tol = as_rational(tol)
    if tol <= 0:
        raise ArgumentError("tol must be positive")
    p = make_poly(p)
    if window.lo == window.hi or poly_is_constant(p):
        v = poly_eval(p, window.lo)
        return Enclosure.exact(v), Enclosure.exact(v)
    sup = _bb_sup(p, window, tol)
    neg = _bb_sup(tuple(-c for c in p), window, tol)
    inf = Enclosure(-neg.bounds, neg.converged)
    return sup, inf


# ---------------------------------------------------------------------------
# real roots


@dataclass(frozen=True)
class RootBox:
    """A real root of a polynomial: exact when ``lo == hi``; otherwise the only
    root of the irreducible ``factor`` in the open interval ``]lo, hi[``."""

    lo: Fraction
    hi: Fraction
    factor: Poly = ()
    multiplicity: int = 1

    @property
    def exact(self) -> bool:
        return self.lo == self.hi


_X = sympy.Symbol("x")


@lru_cache(maxsize=4096)
def _factor_over_q(p: Poly) -> tuple:
    """Irreducible factors over Q as ``(coeff tuple ascending, multiplicity)``."""
    expr = sum(sympy.Rational(c.numerator, c.denominator) * _X**k for k, c in enumerate(p))
    _, factors = sympy.factor_list(sympy.Poly(expr, _X, domain="QQ"))
    out = []
    for fac, mult in factors:
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(fac.all_coeffs())]
        out.append((make_poly(coeffs), mult))
    return tuple(out)


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def _isolate_irreducible(g: Poly, lo: Fraction, hi: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for roots of a square-free ``g`` with no rational roots."""
    dg = poly_derivative(g)
    out = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        box = Interval(a, b)
        r = outer_range(g, box)
        if r.lo > 0 or r.hi < 0:
            continue
        sa, sb = _sign(poly_eval(g, a)), _sign(poly_eval(g, b))
        d = outer_range(dg, box)
        if d.lo > 0 or d.hi < 0:
            if sa != sb:
                out.append((a, b))
            continue
        m = (a + b) / 2
        stack.append((m, b))
        stack.append((a, m))
    out.sort()
    return out


def refine_root(box: RootBox, tol: Fraction) -> RootBox:
    """Bisect an isolating interval until its width is at most ``tol``."""
    if box.exact:
        return box
    g = box.factor
    a, b = box.lo, box.hi
    sa = _sign(poly_eval(g, a))
    while b - a > tol:
        m = (a + b) / 2
        sm = _sign(poly_eval(g, m))
        if sm == sa:
            a = m
        else:
            b = m
    return RootBox(a, b, g, box.multiplicity)


@lru_cache(maxsize=8192)
def isolate_roots(p: Poly, lo: Fraction, hi: Fraction) -> tuple[RootBox, ...]:
    """Distinct real roots of ``p`` in the open interval ``]lo, hi[``.

    Rational roots are returned exactly (from linear factors over Q); the
    others as isolating intervals of their irreducible factor.  ``p`` must not
    be the zero polynomial.
    """
    p = make_poly(p)
    if poly_is_constant(p):
        if p[0] == 0:
            raise ArgumentError("zero polynomial has no isolated roots")
        return ()
    roots: list[RootBox] = []
    for fac, mult in _factor_over_q(p):
        if len(fac) == 2:
            r = -fac[0] / fac[1]
            if lo < r < hi:
                roots.append(RootBox(r, r, fac, mult))
        elif len(fac) > 2:
            for a, b in _isolate_irreducible(fac, lo, hi):
                roots.append(RootBox(a, b, fac, mult))
    return tuple(_separate(roots))


def _separate(roots: list[RootBox]) -> list[RootBox]:
    # roots of different factors are distinct, so halving overlapping boxes terminates
    roots = sorted(roots, key=lambda r: (r.lo, r.hi))
    while True:
        clash = None
        for i in range(len(roots) - 1):
            a, b = roots[i], roots[i + 1]
            if b.lo < a.hi:
                clash = i
                break
        if clash is None:
            return roots
        for j in (clash, clash + 1):
            r = roots[j]
            if not r.exact:
                roots[j] = refine_root(r, r.hi - r.lo - (r.hi - r.lo) / 2)
        roots.sort(key=lambda r: (r.lo, r.hi))
