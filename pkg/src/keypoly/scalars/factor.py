"""Univariate factorization over residue fields.

Finite fields (prime fields and their tower extensions) get the full
squarefree / distinct-degree / equal-degree pipeline; equal-degree splitting
is randomized and requires an explicit seed so results are reproducible.
Over Q the implementation extracts rational roots and certifies
irreducibility up to a configurable degree bound (default 4).
"""

from __future__ import annotations

import random
from fractions import Fraction

from ..errors import UnsupportedResidueField
from . import residue as rf
from .residue import (
    ExtensionField,
    PrimeField,
    RationalResidueField,
    field_pow,
    pconst,
    pdeg,
    pderiv,
    pdivmod,
    peval,
    pgcd,
    pis_zero,
    pmod,
    pmonic,
    pmul,
    ppow_mod,
    ptrim,
    pX,
)


def factor_poly(field, poly, seed: int, qbound: int = 4):
    """Factor a nonzero polynomial into monic irreducibles.

    Returns (unit, [(factor, multiplicity), ...]) with the factor list
    sorted deterministically and unit * prod(factor^mult) == poly.
    """
    poly = ptrim(field, poly)
    if pis_zero(poly):
        raise ValueError("factor of zero polynomial")
    monic, unit = pmonic(field, poly)
    if pdeg(monic) == 0:
        return unit, []
    if field.order() is None:
        factors = _factor_rational(field, monic, qbound)
    else:
        factors = _factor_finite(field, monic, seed)
    factors.sort(key=lambda fm: (pdeg(fm[0]), _sort_key(field, fm[0]), fm[1]))
    return unit, factors


def is_irreducible(field, poly) -> bool:
    """Independent irreducibility certificate.

    Over finite fields: exhaustive root scan for degree <= 3 when the field
    is small, otherwise the distinct-degree criterion f | x^(q^n) - x with
    gcd(x^(q^k) - x, f) trivial for k < n.  Over Q: no rational root for
    degree <= 3, quadratic-split search for degree 4.
    """
    poly = ptrim(field, poly)
    n = pdeg(poly)
    if n <= 0:
        return False
    if n == 1:
        return True
    q = field.order()
    if q is None:
        return _is_irreducible_rational(field, poly)
    if n <= 3 and q <= 4096:
        for x in field.elements():
            if field.is_zero(peval(field, poly, x)):
                return False
        if n == 2 or n == 3:
            return True
    return _ddf_certificate(field, poly)


def _sort_key(field, poly):
    return tuple(repr(field.to_json(c)) for c in poly)


# -- finite fields -------------------------------------------------------


def _ddf_certificate(field, poly) -> bool:
    q = field.order()
    n = pdeg(poly)
    monic, _ = pmonic(field, poly)
    x = pX(field)
    xq = x
    for k in range(1, n // 2 + 1):
        xq = ppow_mod(field, xq, q, monic)
        g = pgcd(field, rf.psub(field, xq, x), monic)
        if pdeg(g) > 0:
            return False
    return True


def _pth_root_poly(field, poly):
    """Inverse Frobenius on coefficients plus exponent division by p."""
    p = field.char
    out = []
    for i in range(0, pdeg(poly) + 1, p):
        out.append(field.pth_root(poly[i]))
    return ptrim(field, out)


def _squarefree(field, poly):
    """[(squarefree part, multiplicity), ...] for a monic polynomial."""
    p = field.char
    result = []

    def accumulate(f, mult):
        f = ptrim(field, f)
        if pdeg(f) == 0:
            return
        d = pderiv(field, f)
        if pis_zero(d):
            # f is a polynomial in x^p
            root = _pth_root_poly(field, f)
            accumulate(root, mult * p)
            return
        g = pgcd(field, f, d)
        w = pdivmod(field, f, g)[0]
        i = 1
        while pdeg(w) > 0:
            y = pgcd(field, w, g)
            z = pdivmod(field, w, y)[0]
            if pdeg(z) > 0:
                result.append((z, mult * i))
            w = y
            g = pdivmod(field, g, y)[0]
            i += 1
        if pdeg(g) > 0:
            accumulate(g, mult)

    accumulate(poly, 1)
    return result


def _distinct_degree(field, poly):
    """[(product of irreducible factors of degree d, d), ...] for squarefree input."""
    q = field.order()
    out = []
    f = poly
    x = pX(field)
    xq = x
    d = 0
    while pdeg(f) > 0:
        d += 1
        if 2 * d > pdeg(f):
            out.append((f, pdeg(f)))
            break
        xq = ppow_mod(field, xq, q, f)
        g = pgcd(field, rf.psub(field, xq, x), f)
        if pdeg(g) > 0:
            out.append((g, d))
            f = pdivmod(field, f, g)[0]
            xq = pmod(field, xq, f)
    return out


def _random_poly(field, rng, deg_bound):
    elems = None
    q = field.order()
    coeffs = []
    for _ in range(deg_bound + 1):
        if isinstance(field, PrimeField):
            coeffs.append(rng.randrange(q))
        else:
            if elems is None:
                elems = list(field.elements()) if q <= 4096 else None
            if elems is not None:
                coeffs.append(elems[rng.randrange(len(elems))])
            else:
                coeffs.append(field_pow(field, _any_generator(field), rng.randrange(q - 1)))
    return ptrim(field, coeffs)


def _any_generator(field):
    if isinstance(field, ExtensionField):
        return field.generator()
    return field.from_int(1)


def _equal_degree(field, poly, d, rng):
    """Split a squarefree product of degree-d irreducibles (Cantor-Zassenhaus)."""
    n = pdeg(poly)
    if n == d:
        return [poly]
    q = field.order()
    p = field.char
    while True:
        r = _random_poly(field, rng, n - 1)
        if pdeg(r) < 1:
            continue
        g = pgcd(field, r, poly)
        if 0 < pdeg(g) < n:
            pieces = [g, pdivmod(field, poly, g)[0]]
        else:
            if p == 2:
                # trace map over F_{2^m}: r + r^2 + r^4 + ...
                m = 0
                qq = q**d
                t = r
                acc = r
                while 2 ** (m + 1) < qq:
                    t = pmod(field, pmul(field, t, t), poly)
                    acc = rf.padd(field, acc, t)
                    m += 1
                g = pgcd(field, acc, poly)
            else:
                e = (q**d - 1) // 2
                t = ppow_mod(field, r, e, poly)
                g = pgcd(field, rf.psub(field, t, pconst(field, field.one)), poly)
            if not (0 < pdeg(g) < n):
                continue
            pieces = [g, pdivmod(field, poly, g)[0]]
        out = []
        for piece in pieces:
            piece, _ = pmonic(field, piece)
            out.extend(_equal_degree(field, piece, d, rng))
        return out


def _factor_finite(field, monic, seed):
    rng = random.Random(seed)
    factors = []
    for sqfree, mult in _squarefree(field, monic):
        for prod, d in _distinct_degree(field, sqfree):
            for irr in _equal_degree(field, prod, d, rng):
                factors.append((irr, mult))
    return factors


# -- rationals -----------------------------------------------------------


def _integerize(poly):
    """Scale a polynomial over Q to integer coefficients."""
    den = 1
    for c in poly:
        den = den * c.denominator // _gcd(den, c.denominator)
    return [int(c * den) for c in poly]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _divisors(n):
    n = abs(n)
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _rational_roots(field, poly):
    """All rational roots with multiplicity, removing them from poly."""
    roots = []
    current = ptrim(field, poly)
    while pdeg(current) >= 1:
        ints = _integerize(current)
        found = None
        if ints[0] == 0:
            found = Fraction(0)
        else:
            for pnum in _divisors(ints[0]):
                for pden in _divisors(ints[-1]):
                    for sign in (1, -1):
                        cand = Fraction(sign * pnum, pden)
                        if peval(field, current, cand) == 0:
                            found = cand
                            break
                    if found is not None:
                        break
                if found is not None:
                    break
        if found is None:
            break
        roots.append(found)
        current = pdivmod(field, current, (-found, Fraction(1)))[0]
    return roots, current


def _quadratic_split(field, monic4):
    """Split a rootless monic rational quartic into two monic quadratics.

    After the substitution x -> y/s the quartic becomes monic over Z, where
    a monic rational factorization exists iff an integer one does (Gauss).
    """
    monic4 = ptrim(field, monic4)
    s = 1
    for c in monic4[:-1]:
        s = s * c.denominator // _gcd(s, c.denominator)
    g = [int(monic4[i] * s ** (4 - i)) for i in range(4)] + [1]
    g0, g1, g2, g3 = g[0], g[1], g[2], g[3]
    if g0 == 0:
        return None
    for babs in _divisors(g0):
        for b in (babs, -babs):
            if b == 0 or g0 % b != 0:
                continue
            d = g0 // b
            # A + C = g3, B + D + AC = g2, AD + BC = g1
            disc = g3 * g3 - 4 * (g2 - b - d)
            if disc < 0:
                continue
            r = _isqrt(disc)
            if r * r != disc:
                continue
            for a in {(g3 + r) // 2, (g3 - r) // 2}:
                c = g3 - a
                if a * c != g2 - b - d or a * d + b * c != g1:
                    continue
                f1 = ptrim(field, (Fraction(b, s * s), Fraction(a, s), Fraction(1)))
                f2 = ptrim(field, (Fraction(d, s * s), Fraction(c, s), Fraction(1)))
                if pmul(field, f1, f2) == monic4:
                    return f1, f2
    return None


def _isqrt(n: int) -> int:
    import math

    return math.isqrt(n)


def _is_irreducible_rational(field, poly) -> bool:
    n = pdeg(poly)
    if n > 4:
        raise UnsupportedResidueField(
            f"irreducibility over Q certified only up to degree 4, got {n}"
        )
    roots, _ = _rational_roots(field, poly)
    if roots:
        return False
    if n <= 3:
        return True
    return _quadratic_split(field, poly) is None


def _factor_rational(field, monic, qbound):
    if isinstance(field, ExtensionField):
        if pdeg(monic) == 1:
            return [(monic, 1)]
        raise UnsupportedResidueField(
            "factorization over extensions of Q is limited to linear inputs"
        )
    factors: dict = {}
    roots, rest = _rational_roots(field, monic)
    for r in roots:
        key = (-r, Fraction(1))
        factors[key] = factors.get(key, 0) + 1
    n = pdeg(rest)
    if n > min(4, qbound):
        raise UnsupportedResidueField(
            f"rootless factor of degree {n} exceeds the certification bound"
        )
    if n > 0:
        pieces = [rest]
        if n == 4:
            split = _quadratic_split(field, rest)
            if split is not None:
                pieces = list(split)
        for f in pieces:
            key = ptrim(field, f)
            factors[key] = factors.get(key, 0) + 1
    return [(k, m) for k, m in factors.items()]
