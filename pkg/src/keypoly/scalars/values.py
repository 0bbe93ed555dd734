"""Exact value-group elements: rationals, or a + b*sqrt(2), plus infinity.

The value group is either Q (rational mode) or Q + Q*sqrt(2) (quadratic
mode).  Both are totally ordered archimedean groups and every comparison
here is exact: a + b*sqrt(2) against c + d*sqrt(2) is decided by sign
analysis of (a - c) and of (a - c)^2 versus 2*(d - b)^2, never by floats.
"""

from __future__ import annotations

import math
from fractions import Fraction

Frac = Fraction


def _sign_quad(a: Frac, b: Frac) -> int:
    """Exact sign of a + b*sqrt(2)."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return 1 if b > 0 else -1
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    # Opposite signs: compare a^2 with 2 b^2 (sqrt(2) irrational, no tie).
    lhs, rhs = a * a, 2 * b * b
    if a > 0:
        return 1 if lhs > rhs else -1
    return -1 if lhs > rhs else 1


class Value:
    """One element of the value group, or +infinity.

    Immutable.  Supports addition, subtraction, scaling by rationals and
    total-order comparison.  Infinity absorbs addition and dominates every
    finite value; it compares equal only to itself.
    """

    __slots__ = ("a", "b", "infinite")

    def __init__(self, a=0, b=0, infinite=False):
        if infinite:
            object.__setattr__(self, "a", None)
            object.__setattr__(self, "b", None)
        else:
            object.__setattr__(self, "a", Frac(a))
            object.__setattr__(self, "b", Frac(b))
        object.__setattr__(self, "infinite", infinite)

    def __setattr__(self, *args):
        raise AttributeError("Value is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def rational(cls, q) -> "Value":
        return cls(Frac(q), 0)

    @classmethod
    def quadratic(cls, a, b) -> "Value":
        return cls(Frac(a), Frac(b))

    @classmethod
    def infinity(cls) -> "Value":
        return INF

    # -- predicates ----------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return not self.infinite

    def is_zero(self) -> bool:
        return self.is_finite and self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.is_finite and self.b == 0

    def sign(self) -> int:
        if self.infinite:
            return 1
        return _sign_quad(self.a, self.b)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "Value") -> "Value":
        if not isinstance(other, Value):
            return NotImplemented
        if self.infinite or other.infinite:
            return INF
        return Value(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "Value") -> "Value":
        if not isinstance(other, Value):
            return NotImplemented
        if other.infinite:
            raise ValueError("cannot subtract infinity")
        if self.infinite:
            return INF
        return Value(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "Value":
        if self.infinite:
            raise ValueError("cannot negate infinity")
        return Value(-self.a, -self.b)

    def scale(self, k) -> "Value":
        """k * self for a rational scalar k >= 0 (0 * infinity = 0)."""
        k = Frac(k)
        if self.infinite:
            if k == 0:
                return Value(0)
            if k < 0:
                raise ValueError("negative multiple of infinity")
            return INF
        return Value(k * self.a, k * self.b)

    def __mul__(self, k):
        if isinstance(k, (int, Fraction)):
            return self.scale(k)
        return NotImplemented

    __rmul__ = __mul__

    # -- comparison ----------------------------------------------------

    def _cmp(self, other: "Value") -> int:
        if self.infinite and other.infinite:
            return 0
        if self.infinite:
            return 1
        if other.infinite:
            return -1
        return _sign_quad(self.a - other.a, self.b - other.b)

    def __eq__(self, other):
        if not isinstance(other, Value):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        if self.infinite:
            return hash("value-infinity")
        return hash((self.a, self.b))

    def __repr__(self):
        if self.infinite:
            return "Value(inf)"
        if self.b == 0:
            return f"Value({self.a})"
        return f"Value({self.a} + {self.b}*sqrt2)"

    def approx(self) -> float:
        """Decimal approximation, for display only (SVG coordinates)."""
        if self.infinite:
            return math.inf
        return float(self.a) + float(self.b) * math.sqrt(2.0)

    # -- serialization ---------------------------------------------------

    def to_json(self, mode: str = "rational"):
        if self.infinite:
            return "inf"
        if mode == "quadratic":
            return {
                "a": {"num": self.a.numerator, "den": self.a.denominator},
                "b": {"num": self.b.numerator, "den": self.b.denominator},
                "mode": "quadratic",
            }
        if self.b != 0:
            raise ValueError("quadratic value in rational mode")
        return {"num": self.a.numerator, "den": self.a.denominator}

    @classmethod
    def from_json(cls, obj) -> "Value":
        if obj == "inf":
            return INF
        if "mode" in obj and obj["mode"] == "quadratic":
            a = Frac(obj["a"]["num"], obj["a"]["den"])
            b = Frac(obj["b"]["num"], obj["b"]["den"])
            return cls(a, b)
        return cls(Frac(obj["num"], obj["den"]))


INF = Value(infinite=True)
ZERO = Value(0)


def vmin(values) -> Value:
    """Minimum of a nonempty iterable of Values."""
    best = None
    for v in values:
        if best is None or v < best:
            best = v
    if best is None:
        raise ValueError("vmin of empty iterable")
    return best


class ValueLattice:
    """Finitely generated subgroup of the value group.

    Stored as a triangular Z-basis in the (a, b) coordinates of a + b*sqrt(2):
    at most one vector u with u[0] != 0 plus at most one vector (0, w).
    Rational-mode groups are the special case with all b-coordinates zero.
    """

    __slots__ = ("gens",)

    def __init__(self, gens=()):
        basis = []
        for g in gens:
            if isinstance(g, Value):
                if g.infinite:
                    raise ValueError("infinite lattice generator")
                vec = (Frac(g.a), Frac(g.b))
            else:
                vec = (Frac(g[0]), Frac(g[1]))
            basis = self._insert(basis, vec)
        self.gens = tuple(basis)

    @staticmethod
    def _insert(basis, vec):
        """Return the triangular basis of <basis, vec>."""
        rows = list(basis)
        if vec != (0, 0):
            rows.append(vec)
        u = None
        tails = []
        for r in rows:
            if r[0] == 0:
                tails.append(r)
                continue
            if u is None:
                u = r
                continue
            x, y = u, r
            while y[0] != 0:
                n = math.floor(Frac(x[0], y[0]))
                x = (x[0] - n * y[0], x[1] - n * y[1])
                x, y = y, x
            u = x
            tails.append(y)
        w = None
        for r in tails:
            if r[1] == 0:
                continue
            w = r[1] if w is None else _frac_gcd(w, r[1])
        out = []
        if u is not None:
            if w is not None:
                u = (u[0], u[1] % w)
            out.append(u)
        if w is not None:
            out.append((Frac(0), w))
        return out

    def extend(self, v: Value) -> "ValueLattice":
        if v.infinite:
            raise ValueError("infinite lattice generator")
        lat = ValueLattice()
        lat.gens = tuple(self._insert(list(self.gens), (Frac(v.a), Frac(v.b))))
        return lat

    def _solve(self, v: Value):
        """Coordinates of v in the basis, or None if v is outside Q-span."""
        a, b = Frac(v.a), Frac(v.b)
        gens = self.gens
        if not gens:
            return () if (a, b) == (0, 0) else None
        if len(gens) == 1:
            (u1, u2) = gens[0]
            if u1 != 0:
                c = a / u1
                if u2 * c == b:
                    return (c,)
                return None
            if a != 0 or u2 == 0:
                return None
            return (b / u2,)
        (u1, u2), (_z, w2) = gens
        c1 = a / u1
        c2 = (b - c1 * u2) / w2
        return (c1, c2)

    def contains(self, v: Value) -> bool:
        if v.infinite:
            return False
        sol = self._solve(v)
        if sol is None:
            return False
        return all(c.denominator == 1 for c in sol)

    def index(self, v: Value):
        """Smallest alpha >= 1 with alpha*v in the lattice; None if none."""
        if v.is_zero():
            return 1
        sol = self._solve(v)
        if sol is None:
            return None
        alpha = 1
        for c in sol:
            alpha = alpha * c.denominator // math.gcd(alpha, c.denominator)
        return alpha


def _frac_gcd(x: Frac, y: Frac) -> Frac:
    x, y = abs(Frac(x)), abs(Frac(y))
    num = math.gcd(x.numerator * y.denominator, y.numerator * x.denominator)
    return Frac(num, x.denominator * y.denominator)


def group_index(gens, beta: Value):
    """min{alpha in N : alpha*beta in <gens>}, 1 for beta = 0, None for infinity."""
    if beta.infinite:
        raise ValueError("group index of infinity")
    if beta.is_zero():
        return 1
    return ValueLattice([g for g in gens if not g.infinite]).index(beta)
