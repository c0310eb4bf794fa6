"""Upper/lower limit envelopes, one-sided envelopes, and pointwise
semicontinuity / one-sided continuity classification.

Every value here is computed symbolically: within the model class the limit
over a shrinking window is attained by a finite max/min, so no tolerance is
involved anywhere in this module.
"""
from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core_numeric import as_rational
from .function_model import Breakpoint, DomainError, FunctionModel, evaluate, piece_at


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class Property(enum.Enum):
    USC = "usc"
    LSC = "lsc"
    LEFT_CONT = "left"
    RIGHT_CONT = "right"
    CONT = "cont"


@dataclass(frozen=True)
class PointClass:
    is_usc: bool
    is_lsc: bool
    is_left_cont: bool
    is_right_cont: bool
    is_cont: bool

    def holds(self, prop: Property) -> bool:
        return {
            Property.USC: self.is_usc,
            Property.LSC: self.is_lsc,
            Property.LEFT_CONT: self.is_left_cont,
            Property.RIGHT_CONT: self.is_right_cont,
            Property.CONT: self.is_cont,
        }[prop]


@dataclass(frozen=True)
class EnvelopeValues:
    value: Fraction
    two_sided_sup: Fraction
    two_sided_inf: Fraction
    left_sup: Optional[Fraction]
    left_inf: Optional[Fraction]
    right_sup: Optional[Fraction]
    right_inf: Optional[Fraction]

    @property
    def oscillation(self) -> Fraction:
        return self.two_sided_sup - self.two_sided_inf


def _side_limit(f: FunctionModel, x: Fraction, side: Side) -> Optional[Fraction]:
    """Limit of the base piece adjacent to ``x`` on ``side`` (None at the domain edge)."""
    if side is Side.LEFT and x == f.domain_lo:
        return None
    if side is Side.RIGHT and x == f.domain_hi:
        return None
    loc = piece_at(f, x)
    if isinstance(loc, Breakpoint):
        idx = loc.index - 1 if side is Side.LEFT else loc.index
        return f.pieces[idx](x)
    return loc[0](x)


def one_sided_limits(f: FunctionModel, x, side: Side) -> Optional[tuple[Fraction, Fraction]]:
    """``(limsup, liminf)`` of ``f(y)`` as ``y`` tends to ``x`` from ``side``,
    over windows that exclude ``x``; None where the window is empty."""
    x = f.check_domain(x)
    lim = _side_limit(f, x, side)
    if lim is None:
        return None
    dense = f.dense
    if dense is None:
        # finitely many breakpoints and modified points: none survive a small window
        return lim, lim
    return max(lim, dense.value), min(lim, dense.value)


def two_sided_limits(f: FunctionModel, x) -> tuple[Fraction, Fraction]:
    """``(f*(x), f_*(x))``: the window ``]x-e, x+e[`` contains ``x`` itself."""
    env = envelope_at(f, x)
    return env.two_sided_sup, env.two_sided_inf


def envelope_at(f: FunctionModel, x) -> EnvelopeValues:
    x = f.check_domain(x)
    fx = evaluate(f, x)
    left = one_sided_limits(f, x, Side.LEFT)
    right = one_sided_limits(f, x, Side.RIGHT)
    sups = [fx] + [s[0] for s in (left, right) if s is not None]
    infs = [fx] + [s[1] for s in (left, right) if s is not None]
    return EnvelopeValues(
        value=fx,
        two_sided_sup=max(sups),
        two_sided_inf=min(infs),
        left_sup=left[0] if left else None,
        left_inf=left[1] if left else None,
        right_sup=right[0] if right else None,
        right_inf=right[1] if right else None,
    )


def _classify(env: EnvelopeValues) -> PointClass:
    fx = env.value
    usc = env.two_sided_sup == fx
    lsc = env.two_sided_inf == fx
    left = env.left_sup is None or env.left_sup == env.left_inf == fx
    right = env.right_sup is None or env.right_sup == env.right_inf == fx
    return PointClass(usc, lsc, left, right, usc and lsc)


def classify_point(f: FunctionModel, x) -> PointClass:
    return _classify(envelope_at(f, x))


@dataclass(frozen=True)
class DenseFailure:
    """Failure of a property on a dense countable set and its complement.

    ``modified_region`` is where points of the tagged set fail, and
    ``unmodified_region`` where the remaining points fail; both are level
    sets of the unmodified base function relative to the dense value
    (breakpoints are reported separately and exactly).  ``tagged_points``
    are the breakpoints in the tagged set where the property fails.
    """

    tag: object
    value: Fraction
    modified_region: tuple = ()  # of LevelSet, union is the failure region
    unmodified_region: tuple = ()
    tagged_points: tuple = ()


@dataclass(frozen=True)
class ExceptionReport:
    property: Property
    points: tuple = ()
    dense: Optional[DenseFailure] = None

    @property
    def is_finite(self) -> bool:
        return self.dense is None


def _candidate_points(f: FunctionModel) -> list[Fraction]:
    pts = set(f.breakpoints)
    pts.update(x for x, _ in f.finite_points)
    return sorted(pts)


def exceptional_points(f: FunctionModel, prop: Property, tol=Fraction(1, 2**40)) -> ExceptionReport:
    """Where ``prop`` fails.  Off the breakpoints and the finitely many
    modified points every piece is continuous, so those are the only
    candidates unless the modification is dense."""
    prop = Property(prop)
    failures = tuple(x for x in _candidate_points(f) if not classify_point(f, x).holds(prop))
    dense = f.dense
    if dense is None:
        return ExceptionReport(prop, failures, None)

    from .measure_integration import Relation, level_set

    tagged = tuple(x for x in failures if dense.tag.contains(x))
    failures = tuple(x for x in failures if not dense.tag.contains(x))
    base = f.unmodified()
    v = dense.value
    # at a non-breakpoint x with base value p(x): modified points carry v,
    # the one-sided envelopes are max/min(p(x), v)
    above = level_set(base, v, Relation.GT, tol)
    below = level_set(base, v, Relation.LT, tol)
    if prop is Property.USC:
        mod_region, unmod_region = (above,), (below,)
    elif prop is Property.LSC:
        mod_region, unmod_region = (below,), (above,)
    else:
        mod_region = unmod_region = (above, below)
    return ExceptionReport(prop, failures, DenseFailure(dense.tag, v, mod_region, unmod_region, tagged))


def envelope_table(f: FunctionModel, grid, workers: int = 1) -> list[tuple[Fraction, EnvelopeValues]]:
    """Envelope values at every grid point, in grid order."""
    xs = [as_rational(x) for x in grid]
    for x in xs:
        if not f.domain_lo <= x <= f.domain_hi:
            raise DomainError(f"grid point {x} outside the domain [{f.domain_lo}, {f.domain_hi}]")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda x: envelope_at(f, x), xs))
    else:
        rows = [envelope_at(f, x) for x in xs]
    return list(zip(xs, rows))
