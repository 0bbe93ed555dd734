"""Residue fields and univariate polynomial arithmetic over them.

Field elements are plain immutable Python values (ints for prime fields,
Fractions for Q, nested tuples for tower extensions); all operations go
through an explicit field object passed as the first argument.  Polynomials
over a residue field are dense coefficient tuples with trailing zeros
trimmed; () is the zero polynomial.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from ..errors import UnsupportedResidueField


class PrimeField:
    """F_p with elements represented as ints in {0, ..., p-1}."""

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.zero = 0
        self.one = 1

    def key(self):
        return ("Fp", self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"F{self.p}"

    def from_int(self, n: int):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a % self.p == 0

    def order(self):
        return self.p

    def elements(self):
        return range(self.p)

    def pth_root(self, a):
        # Frobenius is the identity on F_p.
        return a % self.p

    def to_json(self, a):
        return a % self.p

    def from_json(self, obj):
        return int(obj) % self.p


class RationalResidueField:
    """Q as a residue field (char 0 case); elements are Fractions."""

    def __init__(self):
        self.char = 0
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def key(self):
        return ("QQ",)

    def __eq__(self, other):
        return isinstance(other, RationalResidueField)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "QQ"

    def from_int(self, n: int):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / Fraction(b)

    def is_zero(self, a):
        return a == 0

    def order(self):
        return None

    def elements(self):
        raise UnsupportedResidueField("Q has infinitely many elements")

    def to_json(self, a):
        a = Fraction(a)
        return {"num": a.numerator, "den": a.denominator}

    def from_json(self, obj):
        return Fraction(obj["num"], obj["den"])


class ExtensionField:
    """Simple extension base[y]/(modulus) of a residue field.

    Elements are tuples of base elements of length deg(modulus); the
    modulus must be monic and irreducible over the base.  Towers are built
    by nesting extensions.
    """

    def __init__(self, base, modulus, name="y"):
        modulus = ptrim(base, tuple(modulus))
        if not modulus or not base_eq(base, modulus[-1], base.one):
            raise ValueError("modulus must be monic")
        if pdeg(modulus) < 1:
            raise ValueError("modulus must have degree >= 1")
        self.base = base
        self.modulus = modulus
        self.deg = pdeg(modulus)
        self.name = name
        self.char = base.char
        self.zero = tuple([base.zero] * self.deg)
        self.one = tuple([base.one] + [base.zero] * (self.deg - 1))

    def key(self):
        return ("Ext", self.base.key(), self.modulus)

    def __eq__(self, other):
        return isinstance(other, ExtensionField) and other.key() == self.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"{self.base!r}[{self.name}]/(deg {self.deg})"

    def embed(self, a):
        """Embed a base-field element as a constant of this extension."""
        return tuple([a] + [self.base.zero] * (self.deg - 1))

    def generator(self):
        if self.deg == 1:
            # y is congruent to the negated constant term of the modulus
            return (self.base.neg(self.modulus[0]),)
        return tuple(
            [self.base.zero, self.base.one] + [self.base.zero] * (self.deg - 2)
        )

    def from_int(self, n: int):
        return self.embed(self.base.from_int(n))

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def _pad(self, coeffs):
        out = list(coeffs) + [self.base.zero] * (self.deg - len(coeffs))
        return tuple(out[: self.deg])

    def mul(self, a, b):
        prod = pmul(self.base, ptrim(self.base, a), ptrim(self.base, b))
        rem = pmod(self.base, prod, self.modulus)
        return self._pad(rem)

    def inv(self, a):
        at = ptrim(self.base, a)
        if not at:
            raise ZeroDivisionError("inverse of zero")
        g, s, _t = pxgcd(self.base, at, self.modulus)
        if pdeg(g) != 0:
            raise ZeroDivisionError("element not invertible (modulus reducible?)")
        c = self.base.inv(g[0])
        return self._pad(pscale(self.base, s, c))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def order(self):
        q = self.base.order()
        return None if q is None else q**self.deg

    def elements(self):
        if self.base.order() is None:
            raise UnsupportedResidueField("infinite residue field")
        for combo in itertools.product(self.base.elements(), repeat=self.deg):
            yield tuple(combo)

    def pth_root(self, a):
        q = self.order()
        if q is None:
            raise UnsupportedResidueField("p-th root needs a finite field")
        # Frobenius inverse: a -> a^(q/p)
        return field_pow(self, a, q // self.char)

    def to_json(self, a):
        return [self.base.to_json(x) for x in a]

    def from_json(self, obj):
        return self._pad(tuple(self.base.from_json(x) for x in obj))


def base_eq(field, a, b):
    return field.is_zero(field.sub(a, b))


def field_pow(field, a, n: int):
    if n < 0:
        return field_pow(field, field.inv(a), -n)
    result = field.one
    while n:
        if n & 1:
            result = field.mul(result, a)
        a = field.mul(a, a)
        n >>= 1
    return result


# -- dense univariate polynomials over a residue field ------------------


def ptrim(field, coeffs) -> tuple:
    coeffs = list(coeffs)
    while coeffs and field.is_zero(coeffs[-1]):
        coeffs.pop()
    return tuple(coeffs)


def pdeg(coeffs) -> int:
    return len(coeffs) - 1


def pis_zero(coeffs) -> bool:
    return len(coeffs) == 0


def pconst(field, c) -> tuple:
    return ptrim(field, (c,))


def pX(field) -> tuple:
    return (field.zero, field.one)


def padd(field, a, b) -> tuple:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else field.zero
        y = b[i] if i < len(b) else field.zero
        out.append(field.add(x, y))
    return ptrim(field, out)


def pneg(field, a) -> tuple:
    return tuple(field.neg(x) for x in a)


def psub(field, a, b) -> tuple:
    return padd(field, a, pneg(field, b))


def pmul(field, a, b) -> tuple:
    if not a or not b:
        return ()
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if field.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(x, y))
    return ptrim(field, out)


def pscale(field, a, c) -> tuple:
    return ptrim(field, tuple(field.mul(x, c) for x in a))


def pdivmod(field, a, b):
    """Quotient and remainder; the leading coefficient of b is inverted."""
    b = ptrim(field, b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(ptrim(field, a))
    inv_lead = field.inv(b[-1])
    q = [field.zero] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        c = field.mul(a[-1], inv_lead)
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] = field.sub(a[k + i], field.mul(c, y))
        while a and field.is_zero(a[-1]):
            a.pop()
    return ptrim(field, q), ptrim(field, a)


def pmod(field, a, b):
    return pdivmod(field, a, b)[1]


def pmonic(field, a):
    """(monic polynomial, leading unit) with a = unit * monic."""
    a = ptrim(field, a)
    if not a:
        raise ZeroDivisionError("monic form of zero")
    lead = a[-1]
    return pscale(field, a, field.inv(lead)), lead


def pgcd(field, a, b):
    a, b = ptrim(field, a), ptrim(field, b)
    while b:
        a, b = b, pmod(field, a, b)
    if not a:
        return ()
    return pmonic(field, a)[0]


def pxgcd(field, a, b):
    """g, s, t with s*a + t*b = g (g not normalized monic)."""
    r0, r1 = ptrim(field, a), ptrim(field, b)
    s0, s1 = pconst(field, field.one), ()
    t0, t1 = (), pconst(field, field.one)
    while r1:
        q, r = pdivmod(field, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(field, s0, pmul(field, q, s1))
        t0, t1 = t1, psub(field, t0, pmul(field, q, t1))
    return r0, s0, t0


def ppow_mod(field, a, n: int, mod) -> tuple:
    result = pconst(field, field.one)
    a = pmod(field, a, mod)
    while n:
        if n & 1:
            result = pmod(field, pmul(field, result, a), mod)
        a = pmod(field, pmul(field, a, a), mod)
        n >>= 1
    return result


def pderiv(field, a) -> tuple:
    out = []
    for i in range(1, len(a)):
        out.append(field.mul(a[i], field.from_int(i)))
    return ptrim(field, out)


def peval(field, a, x):
    acc = field.zero
    for c in reversed(a):
        acc = field.add(field.mul(acc, x), c)
    return acc


def pcompose_linear(field, a, shift):
    """a(X + shift), used by small certification helpers."""
    out = pconst(field, field.zero)
    xs = padd(field, pX(field), pconst(field, shift))
    power = pconst(field, field.one)
    for c in a:
        out = padd(field, out, pscale(field, power, c))
        power = pmul(field, power, xs)
    return out
