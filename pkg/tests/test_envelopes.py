import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from corpus import constant, dirichlet, heaviside, modify_finite, random_model, square, window_estimate
from semicont.function_model import CountableModification, DenseTag, DomainError, FunctionModel, PieceExpr
from semicont.envelopes import (
    Property,
    Side,
    classify_point,
    envelope_at,
    envelope_table,
    exceptional_points,
    one_sided_limits,
    two_sided_limits,
)
from semicont.measure_integration import level_measure

H, D = heaviside(), dirichlet()
SQ = square(-1, 1)


class TestExamples:
    def test_two_sided(self):
        assert two_sided_limits(H, 0) == (1, 0)
        assert two_sided_limits(SQ, 0) == (0, 0)
        assert two_sided_limits(D, F(1, 2)) == (1, 0)

    def test_one_sided(self):
        assert one_sided_limits(H, 0, Side.LEFT) == (0, 0)
        assert one_sided_limits(H, 0, Side.RIGHT) == (1, 1)
        assert one_sided_limits(SQ, 0, Side.LEFT) == (0, 0)
        assert one_sided_limits(D, F(1, 2), Side.LEFT) == (1, 0)

    def test_endpoints_have_empty_side(self):
        assert one_sided_limits(H, -1, Side.LEFT) is None
        assert one_sided_limits(H, 1, Side.RIGHT) is None
        c = classify_point(H, -1)
        assert c.is_left_cont and c.is_right_cont and c.is_cont

    def test_classify(self):
        c = classify_point(H, 0)
        assert (c.is_usc, c.is_lsc, c.is_left_cont, c.is_right_cont, c.is_cont) == (True, False, False, True, False)
        c = classify_point(SQ, 0)
        assert all((c.is_usc, c.is_lsc, c.is_left_cont, c.is_right_cont, c.is_cont))
        c = classify_point(D, F(1, 2))
        assert (c.is_usc, c.is_lsc, c.is_left_cont, c.is_right_cont, c.is_cont) == (True, False, False, False, False)

    def test_exceptional_points(self):
        r = exceptional_points(H, Property.CONT)
        assert r.points == (0,) and r.dense is None
        for prop in Property:
            r = exceptional_points(constant(5), prop)
            assert r.points == () and r.dense is None

    def test_dirichlet_lsc_report(self):
        r = exceptional_points(D, Property.LSC)
        assert r.points == ()
        assert r.dense is not None and r.dense.tag.value == "rationals"
        # the domain ends are rational, hence modified, and fail lsc too
        assert r.dense.tagged_points == (0, 1)
        # every modified point (base 0 < value 1) fails lsc: region is the whole domain
        (region,) = r.dense.modified_region
        assert level_measure(region).bounds.lo == 1 == level_measure(region).bounds.hi
        (other,) = r.dense.unmodified_region
        assert level_measure(other).hi == 0

    def test_table(self):
        rows = envelope_table(H, [F(-1, 2), 0, F(1, 2)])
        assert [e.oscillation for _, e in rows] == [0, 1, 0]
        rows = envelope_table(square(), [0, F(1, 2), 1])
        assert [e.oscillation for _, e in rows] == [0, 0, 0]
        rows = envelope_table(D, [F(k, 5) for k in range(5)])
        assert [e.oscillation for _, e in rows] == [1] * 5

    def test_table_domain_error_names_point(self):
        with pytest.raises(DomainError, match="3/2"):
            envelope_table(H, [0, F(3, 2)])

    def test_table_parallel_matches(self):
        grid = [F(k, 64) - 1 for k in range(129)]
        assert envelope_table(H, grid, workers=4) == envelope_table(H, grid)


def _random_case(seed):
    rng = random.Random(seed)
    f = random_model(rng)
    if rng.random() < 0.5:
        f = modify_finite(rng, f, 30)
    xs = list(f.breakpoints) + [p for p, _ in f.finite_points[:5]]
    xs += [f.domain_lo + (f.domain_hi - f.domain_lo) * F(rng.randint(0, 999), 999) for _ in range(5)]
    return f, xs


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_envelope_invariants(seed):
    f, xs = _random_case(seed)
    g = -f
    for x in xs:
        e = envelope_at(f, x)
        # sandwich
        assert e.two_sided_inf <= e.value <= e.two_sided_sup
        for s, i in ((e.left_sup, e.left_inf), (e.right_sup, e.right_inf)):
            if s is not None:
                assert i <= s
        # duality
        n = envelope_at(g, x)
        assert n.two_sided_sup == -e.two_sided_inf and n.two_sided_inf == -e.two_sided_sup
        # decomposition
        assert e.two_sided_sup == max(v for v in (e.left_sup, e.value, e.right_sup) if v is not None)
        assert e.two_sided_inf == min(v for v in (e.left_inf, e.value, e.right_inf) if v is not None)
        # coherence
        c = classify_point(f, x)
        assert c.is_cont == (e.oscillation == 0 and e.two_sided_sup == e.value)
        if f.domain_lo < x < f.domain_hi and c.is_cont:
            assert c.is_left_cont and c.is_right_cont


@pytest.mark.parametrize("seed", range(6))
def test_shrinking_window_oracle(seed):
    rng = random.Random(1000 + seed)
    f = random_model(rng)
    for x in f.breakpoints:
        e = envelope_at(f, x)
        errs = []
        for k in range(1, 21):
            sup, inf, left, right = window_estimate(f, x, F(1, 2**k), rng)
            errs.append(max(abs(sup - e.two_sided_sup), abs(inf - e.two_sided_inf)))
            if k == 20:
                for est, s, i in ((left, e.left_sup, e.left_inf), (right, e.right_sup, e.right_inf)):
                    assert (est is None) == (s is None)
                    if est is not None:
                        assert abs(est[0] - s) <= F(1, 2**10) and abs(est[1] - i) <= F(1, 2**10)
        assert errs[-1] <= F(1, 2**10)


def test_dense_dyadic_envelopes():
    f = FunctionModel.build([0, 1], [PieceExpr((0, 1))], [0, 1],
                            CountableModification.dense(DenseTag.DYADICS, F(1, 2)))
    # at 1/3 (not dyadic): value 1/3, dyadics with 1/2 crowd in from both sides
    e = envelope_at(f, F(1, 3))
    assert (e.value, e.two_sided_sup, e.two_sided_inf) == (F(1, 3), F(1, 2), F(1, 3))
    assert classify_point(f, F(1, 3)).is_lsc and not classify_point(f, F(1, 3)).is_usc
