import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from corpus import _rat, constant, dirichlet, heaviside, modify_finite, random_model, square
from semicont.core_numeric import ArgumentError, IntervalSet
from semicont.function_model import CountableModification, DenseTag, FunctionModel, PieceExpr
from semicont.measure_integration import (
    Relation,
    Verdict,
    _generic_sums,
    compare_report,
    darboux_integrals,
    darboux_sums,
    lebesgue_integral,
    level_measure,
    level_set,
    measurability_report,
    oscillation_measure,
    uniform_partition,
)

H, D = heaviside(), dirichlet()
TOL = F(1, 2**30)


def antiderivative_integral(f: FunctionModel) -> F:
    """Exact integral of the unmodified pieces."""
    total = F(0)
    for (u, w), piece in zip(zip(f.breakpoints, f.breakpoints[1:]), f.pieces):
        for k, c in enumerate(piece.coefficients):
            total += c * (w ** (k + 1) - u ** (k + 1)) / (k + 1)
    return total


class TestLevelSets:
    def test_heaviside(self):
        ls = level_set(H, F(1, 2), Relation.GT, TOL)
        assert ls.base_set == IntervalSet(((F(0), False, F(1), False),))
        assert ls.added_points.is_empty and ls.removed_points.is_empty
        assert level_measure(ls).bounds.lo == level_measure(ls).bounds.hi == 1

    def test_square(self):
        ls = level_set(square(-1, 1), F(1, 4), Relation.GT, TOL)
        assert ls.base_set == IntervalSet(((F(-1), False, F(-1, 2), True), (F(1, 2), True, F(1), False)))
        assert ls.boundary_enclosures == ()
        m = level_measure(ls)
        assert m.lo == m.hi == 1

    def test_dirichlet(self):
        ls = level_set(D, F(1, 2), Relation.GT, TOL)
        assert not ls.base_set
        assert ls.added_points.tag is DenseTag.RATIONALS
        assert level_measure(ls).hi == 0

    def test_irrational_boundary(self):
        # {x^2 > 1/2} on [0,1] = ]1/sqrt2, 1]
        ls = level_set(square(), F(1, 2), Relation.GT, F(1, 2**40))
        (box,) = ls.boundary_enclosures
        assert box.lo**2 < F(1, 2) < box.hi**2 and box.width <= F(1, 2**40)
        m = level_measure(ls)
        assert m.lo <= 1 - box.hi and m.hi >= 1 - box.lo and m.width <= F(1, 2**40)

    def test_bad_tol(self):
        with pytest.raises(ArgumentError):
            level_set(H, 0, Relation.GT, 0)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**9))
    def test_membership_matches_evaluation(self, seed):
        rng = random.Random(seed)
        f = modify_finite(rng, random_model(rng), 50)
        c, rel = _rat(rng), rng.choice(list(Relation))
        ls = level_set(f, c, rel, TOL)
        xs = list(f.breakpoints) + [p for p, _ in f.finite_points]
        xs += [f.domain_lo + (f.domain_hi - f.domain_lo) * F(rng.randint(0, 10**4), 10**4) for _ in range(50)]
        for x in xs:
            if any(b.lo <= x <= b.hi for b in ls.boundary_enclosures):
                continue
            inside = (x in ls.base_set and x not in ls.removed_points.points) or x in ls.added_points.points
            assert inside == rel.holds(f(x), c)


class TestMeasurability:
    def test_heaviside(self):
        cert = measurability_report(H)
        assert (cert.n_pieces, cert.n_breakpoints) == (2, 3)
        assert cert.exception_kind == "none" and cert.exception_cardinality == 0
        assert cert.measurable and cert.all_checks_pass

    def test_dirichlet(self):
        cert = measurability_report(D)
        assert cert.n_pieces == 1
        assert cert.exception_kind == "dense" and cert.exception_tag is DenseTag.RATIONALS
        assert cert.countable and cert.measurable

    def test_square_with_thousand_points(self):
        rng = random.Random(7)
        f = modify_finite(rng, square(-1, 1), 1000)
        cert = measurability_report(f)
        assert cert.exception_cardinality == 1000 and cert.measurable
        assert len(cert.spot_checks) == 5 and cert.all_checks_pass
        # cross-validate against the unmodified level sets
        for chk in cert.spot_checks:
            base = level_measure(level_set(square(-1, 1), chk.c, chk.relation, F(1, 2**30)))
            assert chk.measure.bounds == base.bounds


class TestDarbouxSums:
    def test_identity_quarters(self):
        f = FunctionModel.build([0, 1], [PieceExpr((0, 1))], [0, 1])
        lo, up = darboux_sums(f, [0, F(1, 4), F(1, 2), F(3, 4), 1], TOL)
        assert lo.bounds.lo == lo.bounds.hi == F(3, 8)
        assert up.bounds.lo == up.bounds.hi == F(5, 8)

    @pytest.mark.parametrize("partition", [[0, 2], [0, F(1, 3), 2], [0, 1, F(3, 2), 2]])
    def test_constant(self, partition):
        lo, up = darboux_sums(constant(5, 0, 2), partition, TOL)
        assert lo.lo == lo.hi == up.lo == up.hi == 10

    @pytest.mark.parametrize("partition", [[0, 1], [0, F(1, 7), F(2, 3), 1]] + [None])
    def test_dirichlet(self, partition):
        partition = partition or uniform_partition(D, 5)
        lo, up = darboux_sums(D, partition, TOL)
        assert (lo.lo, lo.hi, up.lo, up.hi) == (0, 0, 1, 1)

    def test_invalid_partition(self):
        with pytest.raises(ArgumentError):
            darboux_sums(H, [-1, 1, 0], TOL)
        with pytest.raises(ArgumentError):
            darboux_sums(H, [-1, F(1, 2)], TOL)

    def test_point_value_moves_cell(self):
        f = FunctionModel.build([0, 1], [PieceExpr((0,))], [0, 0], CountableModification.finite([(F(1, 3), 9)]))
        lo, up = darboux_sums(f, [0, F(1, 2), 1], TOL)
        assert lo.lo == lo.hi == 0
        assert up.lo == up.hi == F(9, 2)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**9), st.integers(1, 7))
    def test_uniform_engine_matches_generic(self, seed, depth):
        rng = random.Random(seed)
        f = modify_finite(rng, random_model(rng), 40)
        part = uniform_partition(f, depth)
        lo, up = darboux_sums(f, part, TOL)
        g = _generic_sums(f, part, TOL)
        assert (lo.bounds, up.bounds) == (g.lower.bounds, g.upper.bounds)
        exact = antiderivative_integral(f)
        assert lo.lo <= exact <= up.hi

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**9))
    def test_refinement_monotone(self, seed):
        rng = random.Random(seed)
        f = modify_finite(rng, random_model(rng), 100)
        prev = None
        for depth in range(1, 9):
            lo, up = darboux_sums(f, uniform_partition(f, depth), TOL)
            if prev is not None:
                assert prev[0] <= lo.lo and up.hi <= prev[1]
            prev = lo.lo, up.hi

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10**9), st.integers(2, 6))
    def test_nonuniform_nested_partitions(self, seed, n):
        rng = random.Random(seed)
        f = random_model(rng)
        a, b = f.domain_lo, f.domain_hi
        coarse = sorted({a, b} | {a + (b - a) * F(rng.randint(1, 99), 100) for _ in range(n)})
        fine = sorted(set(coarse) | {a + (b - a) * F(rng.randint(1, 999), 1000) for _ in range(n)})
        c_lo, c_up = darboux_sums(f, coarse, TOL)
        f_lo, f_up = darboux_sums(f, fine, TOL)
        assert c_lo.lo <= f_lo.hi and f_up.lo <= c_up.hi


class TestIntegrals:
    def test_square(self):
        r = darboux_integrals(square(), F(1, 10**6), 30)
        for enc in (r.lower_integral, r.upper_integral):
            assert F(1, 3) in enc and enc.width <= F(1, 10**6)
        assert r.gap <= F(2, 10**6)

    def test_dirichlet_every_depth(self):
        for depth in (1, 2, 5, 9):
            r = darboux_integrals(D, F(1, 10**6), depth)
            assert r.lower_integral.bounds.lo == r.lower_integral.bounds.hi == 0
            assert r.upper_integral.bounds.lo == r.upper_integral.bounds.hi == 1
            assert r.gap == 1 and r.certified_gap == 1

    def test_heaviside(self):
        r = darboux_integrals(H, F(1, 10**6), 30)
        assert 1 in r.lower_integral and 1 in r.upper_integral

    def test_lebesgue_examples(self):
        e = lebesgue_integral(D, F(1, 10**6))
        assert e.lo == e.hi == 0
        e = lebesgue_integral(square(), F(1, 10**6))
        assert F(1, 3) in e and e.width <= F(1, 10**6) and e.converged
        e = lebesgue_integral(H, F(1, 10**6))
        assert 1 in e and e.width <= F(1, 10**6)

    def test_lebesgue_bad_tol(self):
        with pytest.raises(ArgumentError):
            lebesgue_integral(H, F(-1))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**9))
    def test_antiderivative_oracle_and_sandwich(self, seed):
        rng = random.Random(seed)
        f = random_model(rng)
        exact = antiderivative_integral(f)
        tol = F(1, 1000)
        r = darboux_integrals(f, tol, 16)
        leb = lebesgue_integral(f, tol)
        assert exact in leb
        assert r.lower_integral.lo <= exact <= r.upper_integral.hi
        if r.lower_integral.converged and r.gap <= tol:
            assert exact in r.lower_integral and exact in r.upper_integral
        # sandwich
        assert r.lower_integral.lo <= leb.hi and leb.lo <= r.upper_integral.hi

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10**9))
    def test_countable_invariance(self, seed):
        rng = random.Random(seed)
        f = random_model(rng)
        g = modify_finite(rng, f, 200)
        tol = F(1, 100)
        assert lebesgue_integral(f, tol).overlaps(lebesgue_integral(g, tol))
        for _ in range(3):
            c, rel = _rat(rng), rng.choice(list(Relation))
            assert level_measure(level_set(f, c, rel, TOL)).bounds == level_measure(level_set(g, c, rel, TOL)).bounds


class TestCompare:
    def test_square(self):
        r = compare_report(square(), F(1, 10**6), 30)
        assert r.riemann_integrable is Verdict.YES and r.agree is True
        assert F(1, 3) in r.riemann_value and F(1, 3) in r.lebesgue_value
        assert all(m.lo == m.hi == 0 for _, m in r.oscillation_evidence)

    def test_dirichlet(self):
        r = compare_report(D, F(1, 1000), 20)
        assert r.riemann_integrable is Verdict.NO and r.darboux.certified_gap == 1
        assert r.lebesgue_value.lo == r.lebesgue_value.hi == 0
        assert r.agree is None
        assert dict(r.oscillation_evidence)[F(1, 2)].bounds.lo == 1
        assert oscillation_measure(D, F(1, 2)).bounds.hi == 1

    def test_heaviside(self):
        r = compare_report(H, F(1, 10**4), 30)
        assert r.riemann_integrable is Verdict.YES and r.agree is True
        assert 1 in r.riemann_value and 1 in r.lebesgue_value
        assert all(m.hi == 0 for _, m in r.oscillation_evidence)

    def test_undecided_without_structural_evidence(self):
        # tolerance far below what depth 3 can resolve, no dense modification
        r = compare_report(square(), F(1, 10**9), 3)
        assert r.riemann_integrable is Verdict.UNDECIDED_AT_TOLERANCE

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10**9), st.booleans())
    def test_lebesgue_criterion_coherence(self, seed, dense):
        rng = random.Random(seed)
        f = random_model(rng, max_pieces=3, max_degree=2)
        if dense:
            f = FunctionModel(f.base, CountableModification.dense(rng.choice(list(DenseTag)), _rat(rng)))
        r = compare_report(f, F(1, 100), 14, levels=6)
        if r.riemann_integrable is Verdict.YES:
            assert all(0 in m for _, m in r.oscillation_evidence)
        if r.riemann_integrable is Verdict.NO:
            assert any(m.lo > 0 for _, m in r.oscillation_evidence)
