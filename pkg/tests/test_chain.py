"""Chain structure: expansions, truncations, Newton polygons, invariants."""

import random
from fractions import Fraction

import pytest

from keypoly import (
    ChainOracle,
    KeyChain,
    Poly,
    QWithPAdic,
    Value,
    determines_side,
    newton_polygon,
    standard_expansion,
    truncation_value,
)
from keypoly.chain import newton_svg
from keypoly.errors import NonPositiveValueOfX, ZeroPolynomial
from keypoly.graded import support_set
from keypoly.oracle import random_poly

import fixtures as fx

F = QWithPAdic(2)
X = Poly.x(F)


def c(n):
    return Poly.constant(F, Fraction(n))


def test_standard_expansion_examples():
    ch = fx.sqrt2_chain()
    # [DERIVED] x^3 + x = 3x + x (x^2 - 2)
    d = standard_expansion(X**3 + X, ch, 2)
    assert d == [c(3) * X, X]
    # [TRIVIAL] h = Q_i
    Q2 = ch.entries[1].Q
    assert standard_expansion(Q2, ch, 2) == [Poly.zero(F), Poly.one(F)]
    # [TRIVIAL] division is vacuous below the degree
    assert standard_expansion(X + c(5), ch, 2) == [X + c(5)]
    with pytest.raises(ZeroPolynomial):
        standard_expansion(Poly.zero(F), ch, 2)


def test_expansion_degree_bound():
    ch = fx.ladder_chain()
    rng = random.Random(3)
    for i in range(1, 5):
        Qi = ch.entries[i - 1].Q
        for _ in range(20):
            h = random_poly(F, rng, max_deg=9)
            coeffs = ch.expansion(h, i)
            assert all(d.degree < Qi.degree for d in coeffs if not d.is_zero())
            assert len(coeffs) - 1 <= h.degree // Qi.degree
            total = Poly.zero(F)
            for j, d in enumerate(coeffs):
                total = total + d * Qi**j
            assert total == h


def test_truncation_examples():
    ch = KeyChain.start(F, Value.rational(Fraction(1, 2)))
    # [DERIVED] min(1, 1)
    assert truncation_value(X**2 - c(2), ch, 1) == Value.rational(1)
    # [TRIVIAL] constants
    assert truncation_value(c(12), ch, 1) == Value.rational(2)
    ch1 = KeyChain.start(F, Value.rational(1))
    # [DERIVED] min(2, 2, 2)
    assert truncation_value(X**2 + c(2) * X + c(4), ch1, 1) == Value.rational(2)
    assert not truncation_value(Poly.zero(F), ch, 1).is_finite


def test_newton_polygon_example():
    # [DERIVED] 3-point hull with slopes -2 and -1/2
    ch = KeyChain.start(F, Value.rational(1))
    np_ = newton_polygon(X**3 + c(2) * X + c(8), ch, 1)
    assert [(j, v.a) for j, v in np_.points] == [(0, 3), (1, 1), (3, 0)]
    assert [(j, v.a) for j, v in np_.hull] == [(0, 3), (1, 1), (3, 0)]
    assert [(s.slope.a, s.j_from, s.j_to) for s in np_.sides] == [
        (Fraction(-2), 0, 1),
        (Fraction(-1, 2), 1, 3),
    ]
    # candidate betas are the negated slopes
    assert sorted(-s.slope.a for s in np_.sides) == [Fraction(1, 2), Fraction(2)]


def test_newton_polygon_degenerate():
    ch = KeyChain.start(F, Value.rational(1))
    # [TRIVIAL] single monomial
    np_ = newton_polygon(X**4, ch, 1)
    assert np_.points == ((4, Value.rational(0)),)
    assert np_.sides == ()
    # [TRIVIAL] single nonzero coefficient d_0
    np0 = newton_polygon(c(6), ch, 1)
    assert np0.points == ((0, Value.rational(1)),)
    assert newton_svg(np_).startswith("<svg")


def test_hull_lies_below_points():
    ch = fx.ladder_chain()
    rng = random.Random(9)
    for i in (1, 2, 3):
        for _ in range(25):
            h = random_poly(F, rng, max_deg=8)
            np_ = newton_polygon(h, ch, i)
            hull = list(np_.hull)
            assert all(j2 > j1 for (j1, _a), (j2, _b) in zip(hull, hull[1:]))
            slopes = [s.slope for s in np_.sides]
            assert all(s2 > s1 for s1, s2 in zip(slopes, slopes[1:]))
            # every point on or above every side
            for j, v in np_.points:
                for s in np_.sides:
                    if s.j_from <= j <= s.j_to:
                        v1 = dict(hull)[s.j_from]
                        predicted = v1 + s.slope.scale(j - s.j_from)
                        assert v >= predicted


def test_determines_side_examples():
    ch = KeyChain.start(F, Value.rational(1))
    h = X**3 + c(2) * X + c(8)
    # [DERIVED] values 3, 1.5, 1.5 at beta = 1/2
    assert determines_side(h, ch, 1, Value.rational(Fraction(1, 2)))
    # [DERIVED] values 3, 2, 3 at beta = 1: single minimum
    assert not determines_side(h, ch, 1, Value.rational(1))
    # [TRIVIAL] single term
    assert not determines_side(X**5, ch, 1, Value.rational(7))


def test_truncation_below_oracle_and_equality_region():
    rng = random.Random(13)
    for ch in (fx.sqrt2_chain(), fx.ladder_chain()):
        orc = ChainOracle(ch)
        top = ch.top_level
        for _ in range(60):
            h = random_poly(F, rng, max_deg=7)
            target = orc.evaluate(h)
            for i in range(1, top + 1):
                assert ch.nu(h, i) <= target
            # equality whenever the degree sits below the next key polynomial
            for i in range(1, top):
                if h.degree < ch.entries[i].Q.degree:
                    assert ch.nu(h, i) == target


def test_side_determination_on_defect():
    # a strict truncation defect forces at least two support indices, and
    # the support part of h gains value
    ch = fx.ladder_chain()
    orc = ChainOracle(ch)
    rng = random.Random(15)
    seen = 0
    for _ in range(120):
        h = random_poly(F, rng, max_deg=7)
        for i in range(1, ch.top_level):
            vi = ch.nu(h, i)
            if vi < orc.evaluate(h):
                seen += 1
                assert determines_side(h, ch, i, ch.beta(i))
                S = support_set(h, ch, i, ch.beta(i))
                part = Poly.zero(F)
                coeffs = ch.expansion(h, i)
                Qi = ch.entries[i - 1].Q
                for j in S:
                    part = part + coeffs[j] * Qi**j
                assert orc.evaluate(part) > vi
    assert seen > 5


def test_truncation_is_valuation():
    rng = random.Random(21)
    ch = fx.ladder_chain()
    for i in range(1, 5):
        for _ in range(40):
            f = random_poly(F, rng, max_deg=5)
            g = random_poly(F, rng, max_deg=5)
            vf, vg = ch.nu(f, i), ch.nu(g, i)
            assert ch.nu(f * g, i) == vf + vg
            vs = ch.nu(f + g, i)
            low = vf if vf < vg else vg
            assert vs >= low
            if vf != vg:
                assert vs == low


def test_chain_invariants():
    for ch in (fx.sqrt2_chain(), fx.ladder_chain(), fx.puiseux_chain_finite()):
        deg = 1
        prev_ratio = None
        for idx, e in enumerate(ch.entries, start=1):
            deg *= e.alpha
            assert e.Q.degree == deg
            assert e.Q.is_monic()
            if idx >= 2:
                floor = ch.beta(idx - 1).scale(e.alpha)
                assert not e.beta.is_finite or e.beta > floor
            if e.beta.is_finite:
                ratio = e.beta.scale(Fraction(1, e.Q.degree))
                if prev_ratio is not None:
                    assert ratio > prev_ratio
                prev_ratio = ratio


def _leaf_constants(ch, h, level):
    if level == 1:
        return [d.coeff(0) for d in [h] if not d.is_zero()]
    out = []
    for d in ch.expansion(h, level - 1):
        if not d.is_zero():
            out.extend(_leaf_constants(ch, d, level - 1))
    return out


def test_subalpha_coefficients_have_positive_value():
    # the below-top coefficients of each key polynomial expand into
    # generalized monomials whose K-constants all have positive value
    for ch in (fx.ladder_chain(), fx.sqrt2_chain()):
        Fld = ch.field
        for i in range(2, ch.top_level + 1):
            Qi = ch.entries[i - 1].Q
            coeffs = ch.expansion(Qi, i - 1)
            alpha = ch.alpha(i)
            for j in range(min(alpha, len(coeffs))):
                d = coeffs[j]
                if d.is_zero():
                    continue
                for leaf in _leaf_constants(ch, d, i - 1):
                    assert Fld.val(leaf).sign() > 0


def test_start_requires_positive_value():
    with pytest.raises(NonPositiveValueOfX):
        KeyChain.start(F, Value.rational(0))
    with pytest.raises(NonPositiveValueOfX):
        KeyChain.start(F, Value.rational(-1))


def test_chain_json_roundtrip():
    for ch in (fx.sqrt2_chain(), fx.ladder_chain()):
        data = ch.to_json()
        back = KeyChain.from_json(ch.field, data)
        assert len(back) == len(ch)
        for a, b in zip(back.entries, ch.entries):
            assert a.Q == b.Q and a.beta == b.beta and a.alpha == b.alpha


def test_infinite_tail_truncation():
    ch = fx.sqrt2_chain()
    Q2 = ch.entries[1].Q
    # divisible by the terminal polynomial: value infinity
    assert not ch.nu(Q2 * (X + c(1)), 2).is_finite
    # otherwise the value of the remainder
    assert ch.nu(X**3 + X, 2) == Value.rational(Fraction(1, 2))
