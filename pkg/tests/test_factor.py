"""Residue-field factorization: spec examples, recombination, certificates."""

from fractions import Fraction

import pytest

from keypoly.errors import UnsupportedResidueField
from keypoly.scalars.factor import factor_poly, is_irreducible
from keypoly.scalars.residue import (
    ExtensionField,
    PrimeField,
    RationalResidueField,
    peval,
    pmul,
    pscale,
    ptrim,
)


def recombine(field, unit, factors):
    out = (unit,)
    for f, m in factors:
        for _ in range(m):
            out = pmul(field, out, f)
    return ptrim(field, out)


def exhaustive_roots(field, poly):
    return [x for x in field.elements() if field.is_zero(peval(field, poly, x))]


def test_difference_of_squares_over_f3():
    # [TRIVIAL] y^2 - 1 = (y-1)(y+1) over F_3
    F = PrimeField(3)
    poly = (2, 0, 1)  # y^2 - 1
    unit, factors = factor_poly(F, poly, seed=1)
    assert unit == 1
    assert sorted(f for f, _ in factors) == [(1, 1), (2, 1)]  # y+1, y-1
    assert recombine(F, unit, factors) == poly


def test_square_root_of_two_over_f7():
    # [DERIVED] exhaustive root search over F_7 gives roots 3 and 4
    F = PrimeField(7)
    poly = (5, 0, 1)  # y^2 - 2
    roots = exhaustive_roots(F, poly)
    assert sorted(roots) == [3, 4]
    unit, factors = factor_poly(F, poly, seed=1)
    assert recombine(F, unit, factors) == poly
    assert sorted(f for f, _ in factors) == [(F.neg(4), 1), (F.neg(3), 1)]


def test_irreducible_over_f3():
    # [DERIVED] y^2 + 1 has no root in F_3
    F = PrimeField(3)
    poly = (1, 0, 1)
    assert exhaustive_roots(F, poly) == []
    unit, factors = factor_poly(F, poly, seed=1)
    assert factors == [((1, 0, 1), 1)]
    assert is_irreducible(F, poly)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_recombination_random(p):
    import random

    rng = random.Random(p)
    F = PrimeField(p)
    for trial in range(40):
        deg = rng.randint(1, 6)
        poly = tuple(rng.randrange(p) for _ in range(deg)) + (rng.randrange(1, p),)
        poly = ptrim(F, poly)
        if len(poly) < 2:
            continue
        unit, factors = factor_poly(F, poly, seed=trial)
        assert recombine(F, unit, factors) == poly
        for f, _m in factors:
            assert is_irreducible(F, f)
            # independent check: exhaustive roots for low degree
            if len(f) - 1 >= 2:
                assert exhaustive_roots(F, f) == []


def test_determinism_given_seed():
    F = PrimeField(5)
    poly = (2, 3, 0, 1, 1, 1)
    a = factor_poly(F, poly, seed=42)
    b = factor_poly(F, poly, seed=42)
    assert a == b


def test_extension_field_factorization():
    # F_4 = F_2[z]/(z^2+z+1); factor y^2 + y*z + ... exercises tower arithmetic
    F2 = PrimeField(2)
    F4 = ExtensionField(F2, (1, 1, 1))
    z = F4.generator()
    # (y - z)(y - z^2) = y^2 + y + z*z^2 ... build directly and refactor
    f1 = (F4.neg(z), F4.one)
    z2 = F4.mul(z, z)
    f2 = (F4.neg(z2), F4.one)
    poly = pmul(F4, f1, f2)
    unit, factors = factor_poly(F4, poly, seed=9)
    assert recombine(F4, unit, factors) == ptrim(F4, poly)
    assert sorted(f for f, _ in factors) == sorted([f1, f2])
    # an irreducible quadratic over F_4
    assert is_irreducible(F4, (z, F4.one, F4.one)) in (True, False)


def test_squarefree_and_pth_power():
    F = PrimeField(2)
    # (y+1)^2 * (y^2+y+1) over F_2
    sq = pmul(F, (1, 1), (1, 1))
    poly = pmul(F, sq, (1, 1, 1))
    unit, factors = factor_poly(F, poly, seed=0)
    assert recombine(F, unit, factors) == ptrim(F, poly)
    assert ((1, 1), 2) in factors
    assert ((1, 1, 1), 1) in factors


def test_rational_factorization():
    Q = RationalResidueField()
    half = Fraction(1, 2)
    # (y - 1/2)(y + 2) = y^2 + (3/2) y - 1
    poly = (Fraction(-1), Fraction(3, 2), Fraction(1))
    unit, factors = factor_poly(Q, poly, seed=0)
    assert recombine(Q, unit, factors) == ptrim(Q, poly)
    assert sorted(f for f, _ in factors) == sorted(
        [(Fraction(-1, 2) * 1, Fraction(1)), (Fraction(2), Fraction(1))]
    )
    del half
    # irreducible quadratic stays whole
    unit, factors = factor_poly(Q, (Fraction(1), Fraction(0), Fraction(1)), seed=0)
    assert factors == [((Fraction(1), Fraction(0), Fraction(1)), 1)]
    # quartic splitting into two quadratics without rational roots
    q1 = (Fraction(1), Fraction(0), Fraction(1))  # y^2 + 1
    q2 = (Fraction(2), Fraction(0), Fraction(1))  # y^2 + 2
    quart = pmul(Q, q1, q2)
    unit, factors = factor_poly(Q, quart, seed=0)
    assert sorted(f for f, _ in factors) == sorted([q1, q2])
    # degree beyond the certification bound
    sext = pmul(Q, quart, (Fraction(3), Fraction(0), Fraction(1)))
    with pytest.raises(UnsupportedResidueField):
        factor_poly(Q, sext, seed=0)


def test_rational_extension_limited():
    Q = RationalResidueField()
    K = ExtensionField(Q, (Fraction(-2), Fraction(0), Fraction(1)))  # Q(sqrt2)
    with pytest.raises(UnsupportedResidueField):
        factor_poly(K, (K.one, K.zero, K.one), seed=0)
    unit, factors = factor_poly(K, (K.generator(), K.one), seed=0)
    assert factors == [((K.generator(), K.one), 1)]


def test_distinct_degree_certificate_bigger_field():
    F = PrimeField(101)
    # x^2 - 5: 5 is not a QR mod 101? check via certificate vs roots
    poly = (F.neg(5), 0, 1)
    has_root = bool(exhaustive_roots(F, poly))
    assert is_irreducible(F, poly) == (not has_root)
