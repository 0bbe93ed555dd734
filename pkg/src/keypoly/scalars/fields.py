"""Base fields K with their valuations, residues and canonical monomials.

Four descriptors are supported:

* ``Q`` with a prime p        -- p-adic valuation, nu(p) = 1, residue F_p
* ``Fp_t`` with a prime p     -- t-adic valuation on F_p(t), residue F_p
* ``Q_t``                     -- t-adic valuation on Q(t), residue Q
* ``Fp_uv`` with a prime p    -- monomial valuation on F_p(u, v) with
                                 nu(u) = 1, nu(v) = sqrt(2), residue F_p

Field elements are immutable; all arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import NonUnitValue
from . import residue as rf
from .values import INF, Value, ValueLattice

Frac = Fraction


def _vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("vp(0)")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


class QWithPAdic:
    """K = Q with the p-adic valuation, normalized nu(p) = 1."""

    value_mode = "rational"

    def __init__(self, p: int):
        self.p = p
        self.residue_field = rf.PrimeField(p)
        self.char = 0
        self.p_convention = p  # char of the residue field
        self.zero = Frac(0)
        self.one = Frac(1)

    def key(self):
        return ("Q", self.p)

    def __eq__(self, other):
        return isinstance(other, QWithPAdic) and other.p == self.p

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Q(p={self.p})"

    def descriptor(self):
        return {"base": "Q", "p": self.p}

    def from_int(self, n):
        return Frac(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return Frac(a) / Frac(b)

    def inv(self, a):
        return 1 / Frac(a)

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def val(self, a) -> Value:
        a = Frac(a)
        if a == 0:
            return INF
        return Value.rational(_vp(a.numerator, self.p) - _vp(a.denominator, self.p))

    def residue(self, a):
        a = Frac(a)
        if not self.val(a).is_zero():
            raise NonUnitValue(f"val({a}) != 0")
        # reduced fraction with val 0: p divides neither part
        return (a.numerator % self.p) * pow(a.denominator, -1, self.p) % self.p

    def lift_residue(self, r):
        return Frac(int(r) % self.p)

    def gamma_lattice(self) -> ValueLattice:
        return ValueLattice([Value.rational(1)])

    def gamma_coords(self, v: Value):
        if v.b != 0 or v.a.denominator != 1:
            raise ValueError(f"{v!r} is not in the value group of {self!r}")
        return (int(v.a),)

    def monomial(self, v: Value):
        (k,) = self.gamma_coords(v)
        return Frac(self.p) ** k

    def monomial_from_coords(self, coords):
        return Frac(self.p) ** coords[0]

    def symbol_elements(self):
        return {}

    def random_element(self, rng, size=6):
        num = rng.randint(-size, size)
        if num == 0:
            num = 1
        den = rng.randint(1, size)
        return Frac(num, den) * Frac(self.p) ** rng.randint(0, 2)

    def to_json(self, a):
        a = Frac(a)
        return {"num": a.numerator, "den": a.denominator}

    def from_json(self, obj):
        return Frac(obj["num"], obj["den"])

    def format_elem(self, a) -> str:
        return str(Frac(a))


class _RatFunc:
    """Reduced rational function num/den over a coefficient field."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num = num
        self.den = den

    def __eq__(self, other):
        return (
            isinstance(other, _RatFunc)
            and other.num == self.num
            and other.den == self.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.num}, {self.den})"


class RationalFunctionField:
    """K = k(t) with the t-adic valuation; k is F_p or Q."""

    value_mode = "rational"

    def __init__(self, p: int | None):
        if p is None:
            self.cf = rf.RationalResidueField()
            self.char = 0
            self.p_convention = 1  # char k_nu = 0, paper convention p = 1
        else:
            self.cf = rf.PrimeField(p)
            self.char = p
            self.p_convention = p
        self.p = p
        self.residue_field = self.cf
        self.zero = self._make((), (self.cf.one,))
        self.one = self._make((self.cf.one,), (self.cf.one,))
        self.t = self._make((self.cf.zero, self.cf.one), (self.cf.one,))

    def key(self):
        return ("Fp_t", self.p) if self.p is not None else ("Q_t",)

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField) and other.p == self.p

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"F{self.p}(t)" if self.p is not None else "Q(t)"

    def descriptor(self):
        if self.p is not None:
            return {"base": "Fp_t", "p": self.p}
        return {"base": "Q_t"}

    def _make(self, num, den) -> _RatFunc:
        num = rf.ptrim(self.cf, num)
        den = rf.ptrim(self.cf, den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return _RatFunc((), (self.cf.one,))
        g = rf.pgcd(self.cf, num, den)
        if rf.pdeg(g) > 0:
            num = rf.pdivmod(self.cf, num, g)[0]
            den = rf.pdivmod(self.cf, den, g)[0]
        den, lead = rf.pmonic(self.cf, den)
        num = rf.pscale(self.cf, num, self.cf.inv(lead))
        return _RatFunc(num, den)

    def from_int(self, n):
        return self._make((self.cf.from_int(n),), (self.cf.one,))

    def add(self, a, b):
        num = rf.padd(
            self.cf,
            rf.pmul(self.cf, a.num, b.den),
            rf.pmul(self.cf, b.num, a.den),
        )
        return self._make(num, rf.pmul(self.cf, a.den, b.den))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        return _RatFunc(rf.pneg(self.cf, a.num), a.den)

    def mul(self, a, b):
        return self._make(
            rf.pmul(self.cf, a.num, b.num), rf.pmul(self.cf, a.den, b.den)
        )

    def div(self, a, b):
        if not b.num:
            raise ZeroDivisionError("division by zero")
        return self._make(
            rf.pmul(self.cf, a.num, b.den), rf.pmul(self.cf, a.den, b.num)
        )

    def inv(self, a):
        return self.div(self.one, a)

    def is_zero(self, a):
        return not a.num

    def eq(self, a, b):
        return a == b

    def _ord_poly(self, coeffs) -> int:
        for i, c in enumerate(coeffs):
            if not self.cf.is_zero(c):
                return i
        raise ValueError("ord of zero")

    def val(self, a) -> Value:
        if not a.num:
            return INF
        return Value.rational(self._ord_poly(a.num) - self._ord_poly(a.den))

    def residue(self, a):
        if not a.num:
            raise NonUnitValue("val(0) != 0")
        on, od = self._ord_poly(a.num), self._ord_poly(a.den)
        if on != od:
            raise NonUnitValue("val != 0")
        return self.cf.div(a.num[on], a.den[od])

    def lift_residue(self, r):
        if self.p is not None:
            r = int(r) % self.p
            return self._make((self.cf.from_int(r),), (self.cf.one,))
        return self._make((Frac(r),), (self.cf.one,))

    def gamma_lattice(self) -> ValueLattice:
        return ValueLattice([Value.rational(1)])

    def gamma_coords(self, v: Value):
        if v.b != 0 or v.a.denominator != 1:
            raise ValueError(f"{v!r} is not in the value group of {self!r}")
        return (int(v.a),)

    def monomial(self, v: Value):
        (k,) = self.gamma_coords(v)
        return self.monomial_from_coords((k,))

    def monomial_from_coords(self, coords):
        k = coords[0]
        tk = (self.cf.zero,) * abs(k) + (self.cf.one,)
        if k >= 0:
            return self._make(tk, (self.cf.one,))
        return self._make((self.cf.one,), tk)

    def symbol_elements(self):
        return {"t": self.t}

    def random_element(self, rng, size=4):
        def rpoly(lo):
            deg = rng.randint(lo, 2)
            coeffs = [self.cf.from_int(rng.randint(0, 6) - 3) for _ in range(deg + 1)]
            if all(self.cf.is_zero(c) for c in coeffs):
                coeffs[0] = self.cf.one
            return tuple(coeffs)

        num = rpoly(0)
        den = rpoly(0)
        if all(self.cf.is_zero(c) for c in den):
            den = (self.cf.one,)
        try:
            return self._make(num, den)
        except ZeroDivisionError:
            return self.one

    def to_json(self, a):
        return {
            "num": [self.cf.to_json(c) for c in a.num],
            "den": [self.cf.to_json(c) for c in a.den],
        }

    def from_json(self, obj):
        return self._make(
            tuple(self.cf.from_json(c) for c in obj["num"]),
            tuple(self.cf.from_json(c) for c in obj["den"]),
        )

    def format_elem(self, a) -> str:
        def fmt(coeffs):
            if not coeffs:
                return "0"
            parts = []
            for i, c in enumerate(coeffs):
                if self.cf.is_zero(c):
                    continue
                if i == 0:
                    parts.append(str(c))
                elif i == 1:
                    parts.append(f"{c}*t")
                else:
                    parts.append(f"{c}*t^{i}")
            return " + ".join(parts)

        if rf.pdeg(a.den) == 0 and rf.base_eq(self.cf, a.den[0], self.cf.one):
            return fmt(a.num)
        return f"({fmt(a.num)})/({fmt(a.den)})"


class _Frac2:
    """Fraction of two-variable polynomials; entries ((i, j), c) sorted.

    Fractions are only monomial-reduced, so equality cross-multiplies and
    the hash uses data invariant under common polynomial factors (the
    valuation exponents only).
    """

    __slots__ = ("num", "den", "p")

    def __init__(self, num, den, p):
        self.num = num
        self.den = den
        self.p = p

    def __eq__(self, other):
        if not isinstance(other, _Frac2):
            return NotImplemented
        if self.num == other.num and self.den == other.den:
            return True
        lhs = _poly2_mul(dict(self.num), dict(other.den), self.p)
        rhs = _poly2_mul(dict(other.num), dict(self.den), self.p)
        return lhs == rhs

    def __hash__(self):
        if not self.num:
            return hash(("uv", "zero"))
        nk = TwoVariableField._min_key(dict(self.num))
        dk = TwoVariableField._min_key(dict(self.den))
        return hash(("uv", nk[0] - dk[0], nk[1] - dk[1]))

    def __repr__(self):
        return f"Frac2({self.num}, {self.den})"


def _poly2_mul(a: dict, b: dict, p=None) -> dict:
    out: dict = {}
    for (i, j), c in a.items():
        for (k, m), d in b.items():
            key = (i + k, j + m)
            out[key] = out.get(key, 0) + c * d
    if p is not None:
        return {k: v % p for k, v in out.items() if v % p}
    return out


class TwoVariableField:
    """K = F_p(u, v) with the monomial valuation nu(u)=1, nu(v)=sqrt(2).

    Monomials u^i v^j have pairwise distinct values i + j*sqrt(2), so the
    minimal monomial of any polynomial is unique and the valuation and the
    residue map are exact even on unreduced fractions.
    """

    value_mode = "quadratic"

    def __init__(self, p: int):
        self.p = p
        self.residue_field = rf.PrimeField(p)
        self.char = p
        self.p_convention = p
        self.zero = self._make({}, {(0, 0): 1})
        self.one = self._make({(0, 0): 1}, {(0, 0): 1})
        self.u = self._make({(1, 0): 1}, {(0, 0): 1})
        self.v = self._make({(0, 1): 1}, {(0, 0): 1})

    def key(self):
        return ("Fp_uv", self.p)

    def __eq__(self, other):
        return isinstance(other, TwoVariableField) and other.p == self.p

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"F{self.p}(u,v)"

    def descriptor(self):
        return {"base": "Fp_uv", "p": self.p}

    @staticmethod
    def _min_key(poly: dict):
        """Key of the unique monomial of minimal value i + j*sqrt(2)."""
        best = None
        for i, j in poly:
            if best is None or _quad_less(i, j, best[0], best[1]):
                best = (i, j)
        return best

    def _make(self, num: dict, den: dict) -> _Frac2:
        num = {k: c % self.p for k, c in num.items() if c % self.p}
        den = {k: c % self.p for k, c in den.items() if c % self.p}
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return _Frac2((), (((0, 0), 1),), self.p)
        # cancel common monomial factors
        si = min(min(i for i, _ in num), min(i for i, _ in den))
        sj = min(min(j for _, j in num), min(j for _, j in den))
        num = {(i - si, j - sj): c for (i, j), c in num.items()}
        den = {(i - si, j - sj): c for (i, j), c in den.items()}
        # normalize the minimal monomial of the denominator to coefficient 1
        mk = self._min_key(den)
        scale = pow(den[mk], -1, self.p)
        num = {k: (c * scale) % self.p for k, c in num.items()}
        den = {k: (c * scale) % self.p for k, c in den.items()}
        return _Frac2(tuple(sorted(num.items())), tuple(sorted(den.items())), self.p)

    def from_int(self, n):
        n = n % self.p
        return self._make({(0, 0): n} if n else {}, {(0, 0): 1})

    def add(self, a, b):
        an, ad = dict(a.num), dict(a.den)
        bn, bd = dict(b.num), dict(b.den)
        num = _poly2_mul(an, bd)
        for k, c in _poly2_mul(bn, ad).items():
            num[k] = num.get(k, 0) + c
        return self._make(num, _poly2_mul(ad, bd))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def neg(self, a):
        return self._make({k: -c for k, c in a.num}, dict(a.den))

    def mul(self, a, b):
        return self._make(
            _poly2_mul(dict(a.num), dict(b.num)),
            _poly2_mul(dict(a.den), dict(b.den)),
        )

    def div(self, a, b):
        if not b.num:
            raise ZeroDivisionError("division by zero")
        return self._make(
            _poly2_mul(dict(a.num), dict(b.den)),
            _poly2_mul(dict(a.den), dict(b.num)),
        )

    def inv(self, a):
        return self.div(self.one, a)

    def is_zero(self, a):
        return not a.num

    def eq(self, a, b):
        return a == b

    def val(self, a) -> Value:
        if not a.num:
            return INF
        nk = self._min_key(dict(a.num))
        dk = self._min_key(dict(a.den))
        return Value.quadratic(nk[0] - dk[0], nk[1] - dk[1])

    def residue(self, a):
        if not a.num:
            raise NonUnitValue("val(0) != 0")
        nk = self._min_key(dict(a.num))
        dk = self._min_key(dict(a.den))
        if nk != dk:
            raise NonUnitValue("val != 0")
        return dict(a.num)[nk] * pow(dict(a.den)[dk], -1, self.p) % self.p

    def lift_residue(self, r):
        return self.from_int(int(r))

    def gamma_lattice(self) -> ValueLattice:
        return ValueLattice([Value.quadratic(1, 0), Value.quadratic(0, 1)])

    def gamma_coords(self, v: Value):
        if v.a.denominator != 1 or v.b.denominator != 1:
            raise ValueError(f"{v!r} is not in the value group of {self!r}")
        return (int(v.a), int(v.b))

    def monomial(self, v: Value):
        return self.monomial_from_coords(self.gamma_coords(v))

    def monomial_from_coords(self, coords):
        i, j = coords
        num = {(max(i, 0), max(j, 0)): 1}
        den = {(max(-i, 0), max(-j, 0)): 1}
        return self._make(num, den)

    def symbol_elements(self):
        return {"u": self.u, "v": self.v}

    def random_element(self, rng, size=3):
        def rpoly():
            terms = {}
            for _ in range(rng.randint(1, 3)):
                key = (rng.randint(0, 2), rng.randint(0, 2))
                terms[key] = terms.get(key, 0) + rng.randint(1, self.p - 1)
            return terms

        num = rpoly()
        if all(c % self.p == 0 for c in num.values()):
            num = {(0, 0): 1}
        return self._make(num, {(0, 0): 1})

    def to_json(self, a):
        return {
            "num": [[i, j, c] for (i, j), c in a.num],
            "den": [[i, j, c] for (i, j), c in a.den],
        }

    def from_json(self, obj):
        return self._make(
            {(i, j): c for i, j, c in obj["num"]},
            {(i, j): c for i, j, c in obj["den"]},
        )

    def format_elem(self, a) -> str:
        def fmt(entries):
            if not entries:
                return "0"
            parts = []
            for (i, j), c in entries:
                factors = []
                if c != 1 or (i == 0 and j == 0):
                    factors.append(str(c))
                if i:
                    factors.append(f"u^{i}" if i != 1 else "u")
                if j:
                    factors.append(f"v^{j}" if j != 1 else "v")
                parts.append("*".join(factors))
            return " + ".join(parts)

        if a.den == (((0, 0), 1),):
            return fmt(a.num)
        return f"({fmt(a.num)})/({fmt(a.den)})"


def _quad_less(i1, j1, i2, j2) -> bool:
    """i1 + j1*sqrt2 < i2 + j2*sqrt2 for integers, exactly."""
    a, b = i1 - i2, j1 - j2
    if b == 0:
        return a < 0
    if a == 0:
        return b < 0
    if a < 0 and b < 0:
        return True
    if a > 0 and b > 0:
        return False
    # opposite signs; sqrt(2) is irrational so there is no tie
    if a < 0:
        return a * a > 2 * b * b
    return a * a < 2 * b * b


def field_from_json(obj):
    base = obj["base"]
    if base == "Q":
        return QWithPAdic(obj["p"])
    if base == "Fp_t":
        return RationalFunctionField(obj["p"])
    if base == "Q_t":
        return RationalFunctionField(None)
    if base == "Fp_uv":
        return TwoVariableField(obj["p"])
    raise ValueError(f"unknown base field descriptor {obj!r}")
