"""Dense exact-coefficient univariate polynomials over a base field K.

Coefficients are indexed by degree with trailing zeros trimmed; the zero
polynomial has an empty coefficient tuple and degree -1.  Arithmetic is
schoolbook; chain polynomials stay at desk scale.
"""

from __future__ import annotations

import math

from .errors import NonMonicDivisor, ZeroPolynomial


class Poly:
    """Immutable dense polynomial over a base field."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        coeffs = list(coeffs)
        while coeffs and field.is_zero(coeffs[-1]):
            coeffs.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, *args):
        raise AttributeError("Poly is immutable")

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, field) -> "Poly":
        return cls(field, ())

    @classmethod
    def one(cls, field) -> "Poly":
        return cls(field, (field.one,))

    @classmethod
    def x(cls, field) -> "Poly":
        return cls(field, (field.zero, field.one))

    @classmethod
    def constant(cls, field, c) -> "Poly":
        return cls(field, (c,))

    @classmethod
    def from_int_coeffs(cls, field, ints) -> "Poly":
        return cls(field, [field.from_int(n) for n in ints])

    # -- basic structure -------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.field.eq(self.coeffs[-1], self.field.one)

    def coeff(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if self.field.key() != other.field.key():
            return False
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(self.field.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.field.key(), self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if self.field.is_zero(c):
                continue
            cs = self.field.format_elem(c)
            if i == 0:
                parts.append(cs)
            else:
                xs = "x" if i == 1 else f"x^{i}"
                parts.append(xs if cs == "1" else f"({cs})*{xs}")
        return "Poly(" + " + ".join(parts) + ")"

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(F, [F.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __sub__(self, other: "Poly") -> "Poly":
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(F, [F.sub(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self) -> "Poly":
        return Poly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __mul__(self, other: "Poly") -> "Poly":
        F = self.field
        if self.is_zero() or other.is_zero():
            return Poly.zero(F)
        out = [F.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if F.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Poly(F, out)

    def scale(self, c) -> "Poly":
        F = self.field
        return Poly(F, [F.mul(a, c) for a in self.coeffs])

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return Poly(self.field, (self.field.zero,) * k + self.coeffs)

    def __pow__(self, n: int) -> "Poly":
        result = Poly.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


def euclid_div(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Quotient and remainder of f by a monic g of degree >= 1, exactly."""
    if g.degree < 1 or not g.is_monic():
        raise NonMonicDivisor(f"divisor must be monic of degree >= 1: {g!r}")
    F = f.field
    rem = list(f.coeffs)
    dg = g.degree
    q = [F.zero] * max(0, len(rem) - dg)
    while len(rem) - 1 >= dg:
        c = rem[-1]
        k = len(rem) - 1 - dg
        q[k] = c
        for i in range(dg + 1):
            rem[k + i] = F.sub(rem[k + i], F.mul(c, g.coeffs[i]))
        while rem and F.is_zero(rem[-1]):
            rem.pop()
    return Poly(F, q), Poly(F, rem)


def divmod_general(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Division with remainder for any nonzero g (field inverse of the lead)."""
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    F = f.field
    lead_inv = F.inv(g.coeffs[-1])
    rem = list(f.coeffs)
    dg = g.degree
    q = [F.zero] * max(0, len(rem) - dg)
    while len(rem) - 1 >= dg:
        c = F.mul(rem[-1], lead_inv)
        k = len(rem) - 1 - dg
        q[k] = c
        for i in range(dg + 1):
            rem[k + i] = F.sub(rem[k + i], F.mul(c, g.coeffs[i]))
        while rem and F.is_zero(rem[-1]):
            rem.pop()
    return Poly(F, q), Poly(F, rem)


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """g, s, t with s*a + t*b = g over the base field."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = Poly.one(F), Poly.zero(F)
    t0, t1 = Poly.zero(F), Poly.one(F)
    while not r1.is_zero():
        q, r = divmod_general(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return r0, s0, t0


def hasse_derivative(f: Poly, b: int) -> Poly:
    """Divided-power derivative: x^n maps to binom(n, b) x^(n-b).

    The binomial coefficient is computed in Z and then mapped into K, so
    the operator is well defined in positive characteristic.
    """
    if b < 0:
        raise ValueError("derivative order must be >= 0")
    if b == 0:
        return f
    F = f.field
    out = []
    for n in range(b, f.degree + 1):
        out.append(F.mul(f.coeffs[n], F.from_int(math.comb(n, b))))
    return Poly(F, out)


class FieldEvalContext:
    """Evaluation of polynomials at a plain base-field point."""

    def __init__(self, field):
        self.field = field

    def embed(self, c):
        return c

    def add(self, a, b):
        return self.field.add(a, b)

    def mul(self, a, b):
        return self.field.mul(a, b)


def evaluate(f: Poly, point, ctx=None):
    """Evaluate f at a point through an evaluation context.

    Without a context the point must be a base-field element.  Contexts
    supply embed/add/mul and let the same Horner loop run inside quotient
    rings and truncated-series backends.
    """
    if ctx is None:
        ctx = FieldEvalContext(f.field)
    if f.is_zero():
        return ctx.embed(f.field.zero)
    acc = ctx.embed(f.coeffs[-1])
    for i in range(f.degree - 1, -1, -1):
        acc = ctx.add(ctx.mul(acc, point), ctx.embed(f.coeffs[i]))
    return acc


def poly_to_json(f: Poly):
    return {"coeffs": [f.field.to_json(c) for c in f.coeffs]}


def poly_from_json(field, obj) -> Poly:
    return Poly(field, [field.from_json(c) for c in obj["coeffs"]])
