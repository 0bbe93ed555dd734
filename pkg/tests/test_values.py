"""Value-group element tests: exact order, arithmetic, group indices."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from keypoly import INF, Value, group_index
from keypoly.scalars.values import ValueLattice, vmin


def test_rational_order_and_arithmetic():
    a = Value.rational(Fraction(1, 2))
    b = Value.rational(Fraction(1, 3))
    assert a > b
    assert a + b == Value.rational(Fraction(5, 6))
    assert (a - b) == Value.rational(Fraction(1, 6))
    assert a.scale(4) == Value.rational(2)


def test_infinity_absorbs():
    v = Value.rational(7)
    assert INF + v == INF
    assert v + INF == INF
    assert INF > v
    assert INF == INF
    assert not (INF < INF)
    assert INF.scale(0) == Value.rational(0)
    with pytest.raises(ValueError):
        INF.scale(-1)
    with pytest.raises(ValueError):
        v - INF


def test_quadratic_exact_comparisons():
    # 1 + sqrt2 vs 2 + 0*sqrt2: sqrt2 > 1
    assert Value.quadratic(1, 1) > Value.quadratic(2, 0)
    # 3 - 2 sqrt2 > 0 since 9 > 8
    assert Value.quadratic(3, -2).sign() == 1
    # 7 - 5 sqrt2 < 0 since 49 < 50
    assert Value.quadratic(7, -5).sign() == -1
    assert Value.quadratic(0, 1).approx() == pytest.approx(math.sqrt(2))


fracs = st.fractions(min_value=-50, max_value=50, max_denominator=16)


@given(fracs, fracs, fracs, fracs, fracs, fracs)
def test_quadratic_total_order(a1, b1, a2, b2, a3, b3):
    u, v, w = Value.quadratic(a1, b1), Value.quadratic(a2, b2), Value.quadratic(a3, b3)
    # trichotomy
    assert (u < v) + (u == v) + (u > v) == 1
    # transitivity
    if u <= v and v <= w:
        assert u <= w
    # order respects addition
    if u < v:
        assert u + w < v + w


def test_group_index_examples():
    one = Value.rational(1)
    # [TRIVIAL] 2*(3/2) = 3 is integral, 1*(3/2) is not
    assert group_index([one], Value.rational(Fraction(3, 2))) == 2
    # [PAPER] "if beta = 0 then Delta : beta = 1"
    assert group_index([one], Value.rational(0)) == 1
    # [DERIVED] brute force over alpha = 1..30 against (1/6)Z
    gens = [Value.rational(Fraction(1, 2)), Value.rational(Fraction(1, 3))]
    beta = Value.rational(Fraction(1, 5))
    lattice = ValueLattice(gens)
    brute = next(
        a for a in range(1, 31) if lattice.contains(beta.scale(a))
    )
    assert brute == 5
    assert group_index(gens, beta) == brute


def test_group_index_quadratic():
    gens = [Value.quadratic(1, 0), Value.quadratic(0, 1)]
    assert group_index(gens, Value.quadratic(Fraction(1, 2), Fraction(3, 2))) == 2
    assert group_index(gens, Value.quadratic(Fraction(2, 3), 0)) == 3
    # outside the Q-span of a rank-1 quadratic lattice
    assert group_index([Value.quadratic(1, 1)], Value.quadratic(1, 0)) is None


def test_group_index_membership_property():
    import random

    rng = random.Random(7)
    for _ in range(50):
        gens = [
            Value.quadratic(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                            Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
            for _ in range(rng.randint(1, 3))
        ]
        gens = [g for g in gens if not g.is_zero()] or [Value.rational(1)]
        beta = Value.quadratic(Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
                               Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
        if beta.is_zero():
            continue
        idx = group_index(gens, beta)
        lattice = ValueLattice(gens)
        if idx is None:
            assert not any(lattice.contains(beta.scale(a)) for a in range(1, 13))
        else:
            assert lattice.contains(beta.scale(idx))
            for a in range(1, idx):
                assert not lattice.contains(beta.scale(a))


def test_serialization_roundtrip():
    v = Value.rational(Fraction(-7, 3))
    assert Value.from_json(v.to_json("rational")) == v
    q = Value.quadratic(Fraction(1, 2), Fraction(-3, 4))
    assert Value.from_json(q.to_json("quadratic")) == q
    assert Value.from_json("inf") == INF
    assert INF.to_json("rational") == "inf"


def test_vmin():
    vals = [Value.rational(3), INF, Value.rational(Fraction(1, 2))]
    assert vmin(vals) == Value.rational(Fraction(1, 2))
    with pytest.raises(ValueError):
        vmin([])
