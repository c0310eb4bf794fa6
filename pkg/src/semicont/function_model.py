"""Piecewise polynomials on a compact interval, with explicit breakpoint values
and an optional countable modification."""
from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .core_numeric import (
    ArgumentError,
    Interval,
    as_rational,
    make_poly,
    poly_eval,
)

MAX_DEGREE = 12


class DomainError(ValueError):
    """A query point lies outside the function's domain."""


@dataclass(frozen=True)
class PieceExpr:
    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(self, "coefficients", make_poly(self.coefficients))
        if self.degree > MAX_DEGREE:
            raise ArgumentError(f"piece degree {self.degree} exceeds {MAX_DEGREE}")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x: Fraction) -> Fraction:
        return poly_eval(self.coefficients, x)

    def __neg__(self) -> "PieceExpr":
        return PieceExpr(tuple(-c for c in self.coefficients))


@dataclass(frozen=True)
class PiecewiseFunction:
    """Piece ``i`` governs the open interval ``]breakpoints[i], breakpoints[i+1][``;
    ``point_values[i]`` is the value at ``breakpoints[i]``."""

    breakpoints: tuple
    pieces: tuple
    point_values: tuple

    def __post_init__(self):
        bps = tuple(as_rational(b) for b in self.breakpoints)
        pieces = tuple(p if isinstance(p, PieceExpr) else PieceExpr(tuple(p)) for p in self.pieces)
        vals = tuple(as_rational(v) for v in self.point_values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "point_values", vals)
        if len(bps) < 2:
            raise ArgumentError("need at least two breakpoints (the domain ends)")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ArgumentError("breakpoints must be strictly increasing")
        if len(pieces) != len(bps) - 1:
            raise ArgumentError("piece count mismatch")
        if len(vals) != len(bps):
            raise ArgumentError("point value count mismatch")

    @property
    def domain_lo(self) -> Fraction:
        return self.breakpoints[0]

    @property
    def domain_hi(self) -> Fraction:
        return self.breakpoints[-1]


class ModKind(enum.Enum):
    FINITE = "finite"
    SYMBOLIC_DENSE = "dense"


class DenseTag(enum.Enum):
    RATIONALS = "rationals"
    DYADICS = "dyadics"

    def contains(self, x: Fraction) -> bool:
        if self is DenseTag.RATIONALS:
            return True
        d = x.denominator
        return d & (d - 1) == 0


@dataclass(frozen=True)
class CountableModification:
    kind: ModKind
    points: tuple = ()  # FINITE: ((x, value), ...) with x strictly increasing
    tag: Optional[DenseTag] = None
    value: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind is ModKind.FINITE:
            pts = tuple((as_rational(x), as_rational(v)) for x, v in self.points)
            if any(a[0] >= b[0] for a, b in zip(pts, pts[1:])):
                raise ArgumentError("modification points must be strictly increasing")
            object.__setattr__(self, "points", pts)
            object.__setattr__(self, "_xs", tuple(x for x, _ in pts))
        else:
            if not isinstance(self.tag, DenseTag) or self.value is None:
                raise ArgumentError("dense modification needs a tag and a value")
            object.__setattr__(self, "value", as_rational(self.value))

    @classmethod
    def finite(cls, points: Iterable) -> "CountableModification":
        return cls(ModKind.FINITE, tuple(sorted((as_rational(x), as_rational(v)) for x, v in points)))

    @classmethod
    def dense(cls, tag: DenseTag, value) -> "CountableModification":
        return cls(ModKind.SYMBOLIC_DENSE, (), tag, as_rational(value))

    @property
    def is_dense(self) -> bool:
        return self.kind is ModKind.SYMBOLIC_DENSE

    def lookup(self, x: Fraction) -> Optional[Fraction]:
        """The modified value at ``x``, or None if ``x`` is not modified."""
        if self.is_dense:
            return self.value if self.tag.contains(x) else None
        i = bisect.bisect_left(self._xs, x)
        if i < len(self._xs) and self._xs[i] == x:
            return self.points[i][1]
        return None

    def points_in(self, lo: Fraction, hi: Fraction) -> tuple:
        """FINITE points with ``lo <= x <= hi``."""
        i = bisect.bisect_left(self._xs, lo)
        j = bisect.bisect_right(self._xs, hi)
        return self.points[i:j]


@dataclass(frozen=True)
class FunctionModel:
    base: PiecewiseFunction
    modification: Optional[CountableModification] = None

    def __post_init__(self):
        mod = self.modification
        if mod is not None and mod.kind is ModKind.FINITE:
            for x, _ in mod.points:
                if not self.domain_lo <= x <= self.domain_hi:
                    raise ArgumentError(f"modification point {x} outside the domain")

    @classmethod
    def build(cls, breakpoints, pieces, point_values, modification=None) -> "FunctionModel":
        return cls(PiecewiseFunction(tuple(breakpoints), tuple(pieces), tuple(point_values)),
                   modification)

    @property
    def domain_lo(self) -> Fraction:
        return self.base.breakpoints[0]

    @property
    def domain_hi(self) -> Fraction:
        return self.base.breakpoints[-1]

    @property
    def breakpoints(self) -> tuple:
        return self.base.breakpoints

    @property
    def pieces(self) -> tuple:
        return self.base.pieces

    @property
    def dense(self) -> Optional[CountableModification]:
        m = self.modification
        return m if m is not None and m.is_dense else None

    @property
    def finite_points(self) -> tuple:
        m = self.modification
        return m.points if m is not None and not m.is_dense else ()

    def unmodified(self) -> "FunctionModel":
        return FunctionModel(self.base, None)

    def __neg__(self) -> "FunctionModel":
        mod = self.modification
        if mod is not None:
            if mod.is_dense:
                mod = CountableModification.dense(mod.tag, -mod.value)
            else:
                mod = CountableModification(ModKind.FINITE, tuple((x, -v) for x, v in mod.points))
        base = PiecewiseFunction(self.base.breakpoints,
                                 tuple(-p for p in self.base.pieces),
                                 tuple(-v for v in self.base.point_values))
        return FunctionModel(base, mod)

    def check_domain(self, x) -> Fraction:
        x = as_rational(x)
        if not self.domain_lo <= x <= self.domain_hi:
            raise DomainError(f"x = {x} outside the domain [{self.domain_lo}, {self.domain_hi}]")
        return x

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)


@dataclass(frozen=True)
class Breakpoint:
    index: int


def piece_at(f: FunctionModel, x) -> Union[tuple[PieceExpr, Interval], Breakpoint]:
    """The piece governing ``x`` with its (open) interval, or the breakpoint at ``x``."""
    x = f.check_domain(x)
    bps = f.base.breakpoints
    i = bisect.bisect_left(bps, x)
    if i < len(bps) and bps[i] == x:
        return Breakpoint(i)
    return f.base.pieces[i - 1], Interval(bps[i - 1], bps[i])


def evaluate(f: FunctionModel, x) -> Fraction:
    x = f.check_domain(x)
    if f.modification is not None:
        v = f.modification.lookup(x)
        if v is not None:
            return v
    loc = piece_at(f, x)
    if isinstance(loc, Breakpoint):
        return f.base.point_values[loc.index]
    return loc[0](x)
