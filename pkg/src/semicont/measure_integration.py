"""Level sets, measurability certificates, Darboux and Lebesgue integrals.

Darboux sums use closed cells.  On each piece the polynomial is monotone
between its critical points, so a cell's extrema are found among its
endpoints and the critical points inside it.  Irrational critical points are
bracketed between consecutive points of a fixed global grid (the level-64
dyadic nodes of the domain plus the breakpoints and rational critical
points); the inner bound of a cell is then the exact extremum of the piece
over that grid restricted to the cell.  Because the grid does not depend on
the partition, refining a dyadic partition can only move the inner bounds of
lower sums up and of upper sums down.
"""
from __future__ import annotations

import enum
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .core_numeric import (
    ArgumentError,
    Enclosure,
    Interval,
    IntervalSet,
    as_rational,
    isolate_roots,
    make_poly,
    measure,
    poly_derivative,
    poly_eval,
    poly_is_constant,
    range_enclosure,
    refine_root,
    taylor_shift,
)
from .function_model import DenseTag, FunctionModel, PiecewiseFunction, evaluate

GRID_LEVEL = 64
_BRACKET_TOL = Fraction(1, 2**100)


class Relation(enum.Enum):
    GT = ">"
    GE = ">="
    LT = "<"
    LE = "<="

    def holds(self, a: Fraction, c: Fraction) -> bool:
        return {
            Relation.GT: operator.gt,
            Relation.GE: operator.ge,
            Relation.LT: operator.lt,
            Relation.LE: operator.le,
        }[self](a, c)


# ---------------------------------------------------------------------------
# level sets


@dataclass(frozen=True)
class PointSet:
    """A countable set of points: an explicit finite tuple or a dense tag."""

    points: tuple = ()
    tag: Optional[DenseTag] = None

    @property
    def is_empty(self) -> bool:
        return not self.points and self.tag is None

    def __str__(self):
        if self.tag is not None:
            return f"dense({self.tag.value})"
        return "{" + ", ".join(str(x) for x in self.points) + "}"


@dataclass(frozen=True)
class LevelSet:
    """``{x : f(x) rel c}`` as an interval union adjusted by countable sets.

    ``base_set`` is the level set of the unmodified function with every
    uncertain root box removed; the true boundary point inside each box in
    ``boundary_enclosures`` is irrational.
    """

    c: Fraction
    relation: Relation
    base_set: IntervalSet
    added_points: PointSet = PointSet()
    removed_points: PointSet = PointSet()
    boundary_enclosures: tuple = ()
    tol: Fraction = Fraction(0)


def _piece_level_components(p: tuple, c: Fraction, rel: Relation, u: Fraction, w: Fraction, tol):
    q = make_poly((p[0] - c,) + tuple(p[1:]))
    if poly_is_constant(q):
        return ([(u, True, w, True)] if rel.holds(q[0], 0) else []), []
    comps, boxes = [], []
    prev = u
    for root in isolate_roots(q, u, w):
        root = refine_root(root, tol)
        if prev < root.lo and rel.holds(poly_eval(q, (prev + root.lo) / 2), 0):
            comps.append((prev, True, root.lo, True))
        if root.exact:
            if rel.holds(Fraction(0), 0):
                comps.append((root.lo, False, root.lo, False))
        else:
            boxes.append(Enclosure(Interval(root.lo, root.hi), root.hi - root.lo <= tol))
        prev = root.hi
    if prev < w and rel.holds(poly_eval(q, (prev + w) / 2), 0):
        comps.append((prev, True, w, True))
    return comps, boxes


def level_set(f: FunctionModel, c, relation: Relation, tol) -> LevelSet:
    c = as_rational(c)
    tol = as_rational(tol)
    relation = Relation(relation)
    if tol <= 0:
        raise ArgumentError("tol must be positive")
    base = f.base
    comps, boxes = [], []
    for i, piece in enumerate(base.pieces):
        pc, pb = _piece_level_components(piece.coefficients, c, relation,
                                         base.breakpoints[i], base.breakpoints[i + 1], tol)
        comps.extend(pc)
        boxes.extend(pb)
    for x, v in zip(base.breakpoints, base.point_values):
        if relation.holds(v, c):
            comps.append((x, False, x, False))
    base_set = IntervalSet.from_components(comps)

    added = removed = PointSet()
    mod = f.modification
    if mod is not None and mod.is_dense:
        if relation.holds(mod.value, c):
            added = PointSet(tag=mod.tag)
        else:
            removed = PointSet(tag=mod.tag)
    elif mod is not None:
        plain = f.unmodified()
        add, rem = [], []
        for x, v in mod.points:
            was = relation.holds(evaluate(plain, x), c)
            now = relation.holds(v, c)
            if now and not was:
                add.append(x)
            elif was and not now:
                rem.append(x)
        added, removed = PointSet(tuple(add)), PointSet(tuple(rem))
    return LevelSet(c, relation, base_set, added, removed, tuple(boxes), tol)


def level_measure(ls: LevelSet) -> Enclosure:
    """Measure of a level set; countable adjustments contribute nothing."""
    lo = measure(ls.base_set)
    slack = sum((b.width for b in ls.boundary_enclosures), Fraction(0))
    return Enclosure(Interval(lo, lo + slack), all(b.converged for b in ls.boundary_enclosures))


# ---------------------------------------------------------------------------
# measurability


@dataclass(frozen=True)
class SpotCheck:
    c: Fraction
    relation: Relation
    measure: Enclosure
    base_measure: Enclosure
    shape_ok: bool
    matches_base: bool


@dataclass(frozen=True)
class Certificate:
    n_pieces: int
    n_breakpoints: int
    base_borel: bool
    exception_kind: str  # "none", "finite" or "dense"
    exception_cardinality: Optional[int]  # None for a countably infinite set
    exception_tag: Optional[DenseTag]
    countable: bool
    measurable: bool
    spot_checks: tuple = ()

    @property
    def all_checks_pass(self) -> bool:
        return all(s.shape_ok and s.matches_base for s in self.spot_checks)


def _shape_ok(f: FunctionModel, ls: LevelSet) -> bool:
    comps = ls.base_set.components
    if comps and (comps[0][0] < f.domain_lo or comps[-1][2] > f.domain_hi):
        return False
    a, r = ls.added_points, ls.removed_points
    if a.tag is not None and r.tag is not None:
        return False
    return not set(a.points) & set(r.points)


def measurability_report(f: FunctionModel, samples: int = 5, tol=Fraction(1, 2**30)) -> Certificate:
    """Certificate that ``f`` is Borel measurable.

    The base function is continuous on finitely many open intervals and
    takes finitely many breakpoint values, so every level set is a finite
    interval union; ``f`` differs from it on a countable set.  The spot
    checks recompute a few level sets of ``f`` and of the base and compare
    their measures exactly.
    """
    mod = f.modification
    if mod is None:
        kind, card, tag = "none", 0, None
    elif mod.is_dense:
        kind, card, tag = "dense", None, mod.tag
    else:
        kind, card, tag = "finite", len(mod.points), None

    lo, hi = essential_range(f)
    relations = (Relation.GT, Relation.GE, Relation.LT, Relation.LE)
    plain = f.unmodified()
    checks = []
    for k in range(1, samples + 1):
        c = lo + (hi - lo) * k / (samples + 1) if hi > lo else lo
        rel = relations[(k - 1) % 4]
        ls = level_set(f, c, rel, tol)
        ls0 = level_set(plain, c, rel, tol)
        m, m0 = level_measure(ls), level_measure(ls0)
        checks.append(SpotCheck(c, rel, m, m0, _shape_ok(f, ls), m.bounds == m0.bounds))
    return Certificate(
        n_pieces=len(f.pieces),
        n_breakpoints=len(f.breakpoints),
        base_borel=True,
        exception_kind=kind,
        exception_cardinality=card,
        exception_tag=tag,
        countable=True,
        measurable=True,
        spot_checks=tuple(checks),
    )


# ---------------------------------------------------------------------------
# per-piece extremum data


@dataclass(frozen=True)
class _Critical:
    lo: Fraction  # bracket [lo, hi]; lo == hi for a rational critical point
    hi: Fraction
    vlo: Fraction
    vhi: Fraction
    outer_inf: Fraction
    outer_sup: Fraction


@dataclass(frozen=True)
class _PieceInfo:
    poly: tuple
    u: Fraction
    w: Fraction
    crits: tuple


def _grid_node(a: Fraction, span: Fraction, n: int) -> Fraction:
    return a + span * n / 2**GRID_LEVEL


@lru_cache(maxsize=4096)
def _piece_info(base: PiecewiseFunction, i: int) -> _PieceInfo:
    p = base.pieces[i].coefficients
    u, w = base.breakpoints[i], base.breakpoints[i + 1]
    dp = poly_derivative(p)
    if poly_is_constant(dp):
        return _PieceInfo(p, u, w, ())
    roots = isolate_roots(dp, u, w)
    a, span = base.breakpoints[0], base.breakpoints[-1] - base.breakpoints[0]
    scale = 2**GRID_LEVEL / span
    extras = sorted(set(base.breakpoints) | {r.lo for r in roots if r.exact})
    crits = []
    for r in roots:
        if r.exact:
            v = poly_eval(p, r.lo)
            crits.append(_Critical(r.lo, r.lo, v, v, v, v))
            continue
        g, lo, hi = r.factor, r.lo, r.hi
        while True:
            # bisect over the grid nodes strictly inside the isolating interval
            n_lo = math.floor((lo - a) * scale) + 1
            n_hi = math.ceil((hi - a) * scale) - 1
            if n_lo <= n_hi:
                cut = _grid_node(a, span, (n_lo + n_hi) // 2)
            else:
                cut = next((e for e in extras if lo < e < hi), None)
            if cut is None:
                break
            if (poly_eval(g, cut) > 0) == (poly_eval(g, lo) > 0):
                lo = cut
            else:
                hi = cut
        g_lo = max([_grid_node(a, span, math.floor((lo - a) * scale))] + [e for e in extras if e <= lo])
        g_hi = min([_grid_node(a, span, math.ceil((hi - a) * scale))] + [e for e in extras if e >= hi])
        sup, inf = range_enclosure(p, Interval(g_lo, g_hi), _BRACKET_TOL)
        crits.append(_Critical(g_lo, g_hi, poly_eval(p, g_lo), poly_eval(p, g_hi), inf.lo, sup.hi))
    return _PieceInfo(p, u, w, tuple(crits))


def _part_bounds(info: _PieceInfo, s: Fraction, t: Fraction, ps=None, pt=None):
    """``(inf_outer, inf_inner, sup_inner, sup_outer)`` of the piece on ``[s, t]``."""
    p = info.poly
    ps = poly_eval(p, s) if ps is None else ps
    pt = poly_eval(p, t) if pt is None else pt
    inf_o = inf_i = min(ps, pt)
    sup_i = sup_o = max(ps, pt)
    for cr in info.crits:
        if cr.lo == cr.hi:
            if s < cr.lo < t:
                inf_i, inf_o = min(inf_i, cr.vlo), min(inf_o, cr.vlo)
                sup_i, sup_o = max(sup_i, cr.vlo), max(sup_o, cr.vlo)
            continue
        if not (cr.lo < t and cr.hi > s):
            continue
        cs, ct = max(cr.lo, s), min(cr.hi, t)
        if (cs, ct) == (cr.lo, cr.hi):
            vs, vt, lo_b, hi_b = cr.vlo, cr.vhi, cr.outer_inf, cr.outer_sup
        else:
            vs, vt = poly_eval(p, cs), poly_eval(p, ct)
            sup, inf = range_enclosure(p, Interval(cs, ct), _BRACKET_TOL)
            lo_b, hi_b = inf.lo, sup.hi
        inf_i = min(inf_i, vs, vt)
        sup_i = max(sup_i, vs, vt)
        inf_o = min(inf_o, lo_b)
        sup_o = max(sup_o, hi_b)
    return min(inf_o, inf_i), inf_i, sup_i, max(sup_o, sup_i)


# ---------------------------------------------------------------------------
# cell tables


@dataclass
class _Run:
    """Consecutive full cells ``j0 .. j1-1`` of one piece, monotone on each
    cell; node values are ``V[k] / Q`` at node ``j0 + k``."""

    j0: int
    j1: int
    Q: int
    V: np.ndarray

    @property
    def mins(self):
        return np.minimum(self.V[:-1], self.V[1:])

    @property
    def maxs(self):
        return np.maximum(self.V[:-1], self.V[1:])


@dataclass
class _CellTable:
    a: Fraction
    h: Fraction
    n: int
    runs: list
    special: dict  # cell index -> list of (width, inf_o, inf_i, sup_i, sup_o)

    def node(self, j: int) -> Fraction:
        return self.a + self.h * j


def _node_values(p: tuple, a: Fraction, h: Fraction, j0: int, j1: int):
    # p(a + h j) as an integer polynomial in j over a common denominator
    shifted = taylor_shift(p, a)
    coeffs = [c * h**k for k, c in enumerate(shifted)]
    Q = 1
    for c in coeffs:
        Q = Q * c.denominator // math.gcd(Q, c.denominator)
    ints = [int(c * Q) for c in coeffs]
    if len(ints) == 1 or all(c == 0 for c in ints[1:]):
        return Q, np.full(j1 - j0 + 1, ints[0], dtype=object)
    js = np.arange(j0, j1 + 1, dtype=object)
    acc = np.full(j1 - j0 + 1, ints[-1], dtype=object)
    for c in reversed(ints[:-1]):
        acc = acc * js + c
    return Q, acc


def _uniform_table(base: PiecewiseFunction, depth: int) -> _CellTable:
    a, b = base.breakpoints[0], base.breakpoints[-1]
    n = 2**depth
    h = (b - a) / n
    runs, special = [], {}

    def add_part(j, s, t):
        info = _piece_info(base, piece)
        special.setdefault(j, []).append((t - s,) + _part_bounds(info, s, t))

    for piece in range(len(base.pieces)):
        u, w = base.breakpoints[piece], base.breakpoints[piece + 1]
        info = _piece_info(base, piece)
        jf = math.ceil((u - a) / h)
        jl = math.floor((w - a) / h)
        if jf > jl:  # the whole piece sits inside one cell
            add_part(jl, u, w)
            continue
        if a + h * jf > u:
            add_part(jf - 1, u, a + h * jf)
        if a + h * jl < w:
            add_part(jl, a + h * jl, w)
        marked = set()
        for cr in info.crits:
            lo_j = math.floor((cr.lo - a) / h)
            hi_j = math.ceil((cr.hi - a) / h)
            if cr.lo == cr.hi:
                if a + h * lo_j == cr.lo:
                    continue  # on a node: both neighbours are monotone
                hi_j = lo_j + 1
            marked.update(range(max(lo_j, jf), min(hi_j, jl)))
        j = jf
        for m in sorted(marked) + [jl]:
            if m > j:
                Q, V = _node_values(info.poly, a, h, j, m)
                runs.append(_Run(j, m, Q, V))
            if m < jl:
                add_part(m, a + h * m, a + h * (m + 1))
            j = m + 1
    return _CellTable(a, h, n, runs, special)


def _generic_parts(base: PiecewiseFunction, s: Fraction, t: Fraction):
    parts = []
    bps = base.breakpoints
    for i in range(len(base.pieces)):
        lo, hi = max(s, bps[i]), min(t, bps[i + 1])
        if lo < hi:
            parts.append((hi - lo,) + _part_bounds(_piece_info(base, i), lo, hi))
    return parts


def _point_extremes(f: FunctionModel, s: Fraction, t: Fraction):
    vals = [evaluate(f, x) for x in f.breakpoints if s <= x <= t]
    mod = f.modification
    if mod is not None and not mod.is_dense:
        vals.extend(v for _, v in mod.points_in(s, t))
    if not vals:
        return None
    return min(vals), max(vals)


def _cell_points(f: FunctionModel, table: _CellTable) -> dict:
    """Cell index -> (min, max) of breakpoint and finite modified values in the closed cell."""
    xs = list(f.breakpoints) + [x for x, _ in f.finite_points]
    out: dict = {}
    for x in xs:
        k = (x - table.a) / table.h
        cells = (k - 1, k) if k.denominator == 1 else (math.floor(k),)
        v = evaluate(f, x)
        for j in cells:
            j = int(j)
            if 0 <= j < table.n:
                if j in out:
                    lo, hi = out[j]
                    out[j] = (min(lo, v), max(hi, v))
                else:
                    out[j] = (v, v)
    return out


# ---------------------------------------------------------------------------
# Darboux sums


@dataclass(frozen=True)
class _Sums:
    """Outer/inner enclosures of four cell sums at one partition."""

    lower: Enclosure  # lower sum of f
    upper: Enclosure  # upper sum of f
    lower_env_upper: Fraction  # upper sum of the lower envelope (outer bound)
    upper_env_lower: Fraction  # lower sum of the upper envelope (outer bound)


def _clip(arr, v, fn):
    return arr if v is None else fn(arr, v)


def _table_sums(f: FunctionModel, table: _CellTable, tol: Fraction) -> _Sums:
    dense = f.dense
    v = dense.value if dense is not None else None
    pts = _cell_points(f, table)
    h = table.h
    lo_o = lo_i = up_i = up_o = Fraction(0)
    env_up = env_lo = Fraction(0)
    in_run = {}
    for run in table.runs:
        mins, maxs = run.mins, run.maxs
        vq = None if v is None else v * run.Q
        if vq is not None and vq.denominator == 1:
            vq = int(vq)
        s_lo = sum(_clip(mins, vq, np.minimum).tolist(), 0)
        s_up = sum(_clip(maxs, vq, np.maximum).tolist(), 0)
        s_env_up = sum(_clip(maxs, vq, np.minimum).tolist(), 0)
        s_env_lo = sum(_clip(mins, vq, np.maximum).tolist(), 0)
        scale = h / run.Q
        lo_o += scale * s_lo
        up_o += scale * s_up
        env_up += scale * s_env_up
        env_lo += scale * s_env_lo
        for j in pts:
            if run.j0 <= j < run.j1:
                k = j - run.j0
                in_run[j] = (Fraction(mins[k], run.Q), Fraction(maxs[k], run.Q))
    lo_i, up_i = lo_o, up_o
    for j, (pmin, pmax) in pts.items():
        if j not in in_run:
            continue
        pi, ps = in_run[j]
        if v is not None:
            pi_v, ps_v = min(pi, v), max(ps, v)
        else:
            pi_v, ps_v = pi, ps
        d_lo = h * (min(pi_v, pmin) - pi_v)
        d_up = h * (max(ps_v, pmax) - ps_v)
        lo_o += d_lo
        lo_i += d_lo
        up_o += d_up
        up_i += d_up
    for j, parts in table.special.items():
        cl_o = min(p[1] for p in parts)
        cl_i = min(p[2] for p in parts)
        cu_i = max(p[3] for p in parts)
        cu_o = max(p[4] for p in parts)
        width = sum(p[0] for p in parts)
        if v is not None:
            env_up += width * min(cu_o, v)
            env_lo += width * max(cl_o, v)
            cl_o, cl_i = min(cl_o, v), min(cl_i, v)
            cu_i, cu_o = max(cu_i, v), max(cu_o, v)
        else:
            env_up += width * cu_o
            env_lo += width * cl_o
        if j in pts:
            pmin, pmax = pts[j]
            cl_o, cl_i = min(cl_o, pmin), min(cl_i, pmin)
            cu_i, cu_o = max(cu_i, pmax), max(cu_o, pmax)
        lo_o += width * cl_o
        lo_i += width * cl_i
        up_i += width * cu_i
        up_o += width * cu_o
    return _Sums(Enclosure.of(lo_o, lo_i, tol), Enclosure.of(up_i, up_o, tol), env_up, env_lo)


def _generic_sums(f: FunctionModel, partition, tol: Fraction) -> _Sums:
    dense = f.dense
    v = dense.value if dense is not None else None
    lo_o = lo_i = up_i = up_o = env_up = env_lo = Fraction(0)
    for s, t in zip(partition, partition[1:]):
        parts = _generic_parts(f.base, s, t)
        cl_o = min(p[1] for p in parts)
        cl_i = min(p[2] for p in parts)
        cu_i = max(p[3] for p in parts)
        cu_o = max(p[4] for p in parts)
        width = t - s
        if v is not None:
            env_up += width * min(cu_o, v)
            env_lo += width * max(cl_o, v)
            cl_o, cl_i, cu_i, cu_o = min(cl_o, v), min(cl_i, v), max(cu_i, v), max(cu_o, v)
        else:
            env_up += width * cu_o
            env_lo += width * cl_o
        ext = _point_extremes(f, s, t)
        if ext is not None:
            cl_o, cl_i = min(cl_o, ext[0]), min(cl_i, ext[0])
            cu_i, cu_o = max(cu_i, ext[1]), max(cu_o, ext[1])
        lo_o += width * cl_o
        lo_i += width * cl_i
        up_i += width * cu_i
        up_o += width * cu_o
    return _Sums(Enclosure.of(lo_o, lo_i, tol), Enclosure.of(up_i, up_o, tol), env_up, env_lo)


def _check_tol(tol) -> Fraction:
    tol = as_rational(tol)
    if tol <= 0:
        raise ArgumentError("tol must be positive")
    return tol


def _uniform_depth(f: FunctionModel, partition) -> Optional[int]:
    n = len(partition) - 1
    if n < 1 or n & (n - 1):
        return None
    a, b = f.domain_lo, f.domain_hi
    h = (b - a) / n
    if all(x == a + h * j for j, x in enumerate(partition)):
        return n.bit_length() - 1
    return None


def darboux_sums(f: FunctionModel, partition, tol) -> tuple[Enclosure, Enclosure]:
    """Enclosures of the lower and upper Darboux sums of ``f`` on a partition.

    Each closed cell's infimum and supremum account for the pieces, for
    breakpoint and modified values inside the cell, and for a dense
    modification value (which meets every cell).
    """
    tol = _check_tol(tol)
    partition = [as_rational(x) for x in partition]
    if (len(partition) < 2 or partition[0] != f.domain_lo or partition[-1] != f.domain_hi
            or any(s >= t for s, t in zip(partition, partition[1:]))):
        raise ArgumentError("partition must be strictly increasing and span the domain")
    depth = _uniform_depth(f, partition)
    if depth is not None:
        sums = _table_sums(f, _uniform_table(f.base, depth), tol)
    else:
        sums = _generic_sums(f, partition, tol)
    return sums.lower, sums.upper


def uniform_partition(f: FunctionModel, depth: int) -> list[Fraction]:
    a, b = f.domain_lo, f.domain_hi
    n = 2**depth
    return [a + (b - a) * j / n for j in range(n + 1)]


@dataclass(frozen=True)
class DarbouxResult:
    lower_integral: Enclosure
    upper_integral: Enclosure
    partition_depth: int

    @property
    def gap(self) -> Fraction:
        return self.upper_integral.hi - self.lower_integral.lo

    @property
    def certified_gap(self) -> Fraction:
        """Guaranteed lower bound on upper minus lower integral."""
        return max(Fraction(0), self.upper_integral.lo - self.lower_integral.hi)


def _darboux_at(f: FunctionModel, depth: int, tol: Fraction) -> DarbouxResult:
    s = _table_sums(f, _uniform_table(f.base, depth), tol)
    # lower integral = integral of the lower envelope <= its upper sum; dually
    lower = Enclosure.of(s.lower.lo, max(s.lower_env_upper, s.lower.lo), tol)
    upper = Enclosure.of(min(s.upper_env_lower, s.upper.hi), s.upper.hi, tol)
    return DarbouxResult(lower, upper, depth)


def darboux_integrals(f: FunctionModel, tol, max_depth: int) -> DarbouxResult:
    """Enclose the lower and upper Darboux integrals by dyadic refinement.

    Stops at the first depth where both enclosures are within ``tol`` and the
    two integrals are either resolved to within ``tol`` of each other or
    certified apart; otherwise at ``max_depth``.
    """
    tol = _check_tol(tol)
    if max_depth < 1:
        raise ArgumentError("max_depth must be at least 1")
    result = None
    for depth in range(1, max_depth + 1):
        result = _darboux_at(f, depth, tol)
        done = result.lower_integral.converged and result.upper_integral.converged
        if done and (result.gap <= tol or result.certified_gap > 0):
            break
    return result


# ---------------------------------------------------------------------------
# Lebesgue integral


def essential_range(f: FunctionModel) -> tuple[Fraction, Fraction]:
    """Rational bounds ``m <= f <= M`` almost everywhere (pieces only)."""
    lo, hi = None, None
    for i in range(len(f.pieces)):
        info = _piece_info(f.base, i)
        _, inf_i, sup_i, _ = _part_bounds(info, info.u, info.w)
        lo = inf_i if lo is None else min(lo, inf_i)
        hi = sup_i if hi is None else max(hi, sup_i)
    return lo, hi


def _ceil_div(num, den):
    return -((-num) // den)


def _layer_cake(table: _CellTable, L: Fraction, K: int) -> Enclosure:
    """Simple-function bounds of the integral from level-set measure brackets.

    With levels ``y_j = m + j*d`` the integral is ``m*L`` plus the integral of
    ``t -> measure{f > t}`` over ``[m, M]``.  Parts of cells whose outer
    infimum exceeds a level lie inside that level set; parts whose outer
    supremum does not exceed it lie outside; countable sets are ignored.
    """
    m = M = None
    for run in table.runs:
        m0, M0 = Fraction(min(run.V.tolist()), run.Q), Fraction(max(run.V.tolist()), run.Q)
        m = m0 if m is None else min(m, m0)
        M = M0 if M is None else max(M, M0)
    for parts in table.special.values():
        for p in parts:
            m = p[1] if m is None else min(m, p[1])
            M = p[4] if M is None else max(M, p[4])
    if M == m:
        return Enclosure.exact(m * L)
    d = (M - m) / K
    h = table.h
    cnt_lo = cnt_hi = Fraction(0)
    for run in table.runs:
        # level index of a node value V/Q: (V/Q - m)/d = (V*Ad - An*Q)*Dd / (Q*Ad*Dn)
        An, Ad = m.numerator, m.denominator
        Dn, Dd = d.numerator, d.denominator
        den = run.Q * Ad * Dn

        def counts(vals, offset):
            c = _ceil_div((vals * Ad - An * run.Q) * Dd, den) - offset
            return sum(np.minimum(np.maximum(c, 0), K).tolist(), 0)

        cnt_lo += h * counts(run.mins, 1)
        cnt_hi += h * counts(run.maxs, 0)
    for parts in table.special.values():
        for width, inf_o, _, _, sup_o in parts:
            c_lo = min(max(math.ceil((inf_o - m) / d) - 1, 0), K)
            c_hi = min(max(math.ceil((sup_o - m) / d), 0), K)
            cnt_lo += width * c_lo
            cnt_hi += width * c_hi
    return Enclosure(Interval(m * L + d * cnt_lo, m * L + d * cnt_hi))


def lebesgue_integral(f: FunctionModel, tol, max_depth: int = 24) -> Enclosure:
    """Enclose the Lebesgue integral of ``f`` over its domain.

    Round ``r`` uses ``8 * 2**r`` levels and measures the level sets on the
    dyadic grid of depth ``max(1, r - 3)``; rounds continue until the
    enclosure width is at most ``tol`` or the grid depth would exceed
    ``max_depth`` (then the last enclosure is returned unconverged).
    """
    tol = _check_tol(tol)
    if max_depth < 1:
        raise ArgumentError("max_depth must be at least 1")
    L = f.domain_hi - f.domain_lo
    enc = None
    for r in range(max_depth + 4):
        K = 8 * 2**r
        table = _uniform_table(f.base, max(1, r - 3))
        enc = _layer_cake(table, L, K)
        if enc.width <= tol:
            return Enclosure(enc.bounds, True)
    return Enclosure(enc.bounds, False)


# ---------------------------------------------------------------------------
# comparison


class Verdict(enum.Enum):
    YES = "YES"
    NO = "NO"
    UNDECIDED_AT_TOLERANCE = "UNDECIDED_AT_TOLERANCE"


@dataclass(frozen=True)
class ComparisonReport:
    riemann_integrable: Verdict
    riemann_value: Optional[Enclosure]
    lebesgue_value: Enclosure
    agree: Optional[bool]
    oscillation_evidence: tuple  # of (eps, Enclosure)
    darboux: DarbouxResult


def oscillation_measure(f: FunctionModel, eps, tol=Fraction(1, 2**40)) -> Enclosure:
    """Enclosure of ``measure{x : oscillation of f at x >= eps}``.

    Finite exception sets contribute nothing.  With a dense modification of
    value ``v``, the oscillation off the breakpoints is ``|p(x) - v|``.
    """
    eps = as_rational(eps)
    dense = f.dense
    if dense is None:
        return Enclosure.exact(0)
    base = f.unmodified()
    up = level_measure(level_set(base, dense.value + eps, Relation.GE, tol))
    down = level_measure(level_set(base, dense.value - eps, Relation.LE, tol))
    return Enclosure(Interval(up.lo + down.lo, up.hi + down.hi))


def compare_report(f: FunctionModel, tol, max_depth: int, levels: int = 10) -> ComparisonReport:
    tol = _check_tol(tol)
    dr = darboux_integrals(f, tol, max_depth)
    leb = lebesgue_integral(f, tol, max_depth)
    if dr.gap <= tol:
        verdict = Verdict.YES
    elif f.dense is not None and dr.certified_gap > tol:
        verdict = Verdict.NO
    else:
        verdict = Verdict.UNDECIDED_AT_TOLERANCE
    riemann = None
    agree = None
    if verdict is Verdict.YES:
        riemann = Enclosure(Interval(dr.lower_integral.lo, dr.upper_integral.hi))
        agree = riemann.overlaps(leb)
    evidence = tuple((Fraction(1, 2**j), oscillation_measure(f, Fraction(1, 2**j)))
                     for j in range(1, levels + 1))
    return ComparisonReport(verdict, riemann, leb, agree, evidence, dr)
