"""Target-valuation backends.

Every oracle exposes ``evaluate(f) -> Value`` satisfying the valuation
axioms on its domain, plus a short ``describe()``.  Backends are restricted
to cases where the target valuation is independently computable: stored
chains, ramified-root min formulas, and truncated generalized power series
whose finite answers are precision-certified (uncertain results raise
PrecisionExhausted rather than guess).
"""

from __future__ import annotations

from fractions import Fraction

from .chain import KeyChain
from .errors import PrecisionExhausted
from .poly import Poly, euclid_div, hasse_derivative, poly_from_json
from .scalars.fields import QWithPAdic, RationalFunctionField, TwoVariableField
from .scalars.values import INF, Value, vmin


class ChainOracle:
    """Evaluates the top truncation of a stored chain.

    A complete chain determines its valuation entirely, so this backend is
    exact; the final entry may carry an infinite value (pseudo-valuation).
    """

    def __init__(self, chain: KeyChain):
        self.chain = chain
        self.field = chain.field

    def describe(self) -> str:
        return f"chain oracle over {len(self.chain)} levels"

    def evaluate(self, f: Poly) -> Value:
        return self.chain.nu(f, self.chain.top_level)


class EisensteinRootOracle:
    """w(f(theta)) for theta a root of a declared monic polynomial m.

    Values are computed by the min formula w(sum a_i theta^i) =
    min_i(val(a_i) + i/e) on the remainder of f modulo m.  The formula is
    structurally valid only when the exponents i/e are distinct modulo 1,
    which the constructor checks; deeper consistency (the declared e really
    being the ramification of m) is the job of axioms_selftest.
    """

    def __init__(self, field, min_poly: Poly, e: int):
        if not min_poly.is_monic() or min_poly.degree < 1:
            raise ValueError("minimal polynomial must be monic of degree >= 1")
        if e < 1 or min_poly.degree > e:
            raise ValueError("declared ramification must be >= deg(min_poly)")
        self.field = field
        self.min_poly = min_poly
        self.e = e

    def describe(self) -> str:
        return f"root oracle mod degree-{self.min_poly.degree} polynomial, e={self.e}"

    def evaluate(self, f: Poly) -> Value:
        _q, r = euclid_div(f, self.min_poly)
        if r.is_zero():
            return INF
        vals = []
        for i, c in enumerate(r.coeffs):
            if self.field.is_zero(c):
                continue
            vals.append(self.field.val(c) + Value.rational(Fraction(i, self.e)))
        return vmin(vals)


class SeriesOracle:
    """Order of f at a truncated generalized power series point.

    For a t-adic base field the point is sum c_q t^q with rational
    exponents; for the p-adic rationals it is a digit expansion in powers
    of p.  ``frontier=None`` declares the point exact.  Finite answers are
    certified against the truncation tail via Taylor remainders; an
    optional ``extend`` hook supplies more terms on demand.
    """

    def __init__(self, field, terms, frontier=None, extend=None, max_refines=24):
        self.field = field
        self.terms = list(terms)
        self.frontier = frontier
        self.extend = extend
        self.max_refines = max_refines
        if isinstance(field, QWithPAdic):
            self._flavor = "padic"
        elif isinstance(field, RationalFunctionField):
            self._flavor = "tadic"
        else:
            raise ValueError("series backend needs a p-adic or t-adic base field")

    def describe(self) -> str:
        return f"series oracle ({self._flavor}), frontier={self.frontier}"

    # -- p-adic flavor ----------------------------------------------------

    def _theta_rational(self):
        p = self.field.p
        return sum((Fraction(c) * Fraction(p) ** k for k, c in self.terms), Fraction(0))

    def _eval_padic(self, f: Poly):
        theta = self._theta_rational()
        fx = Fraction(0)
        for c in reversed(f.coeffs):
            fx = fx * theta + Fraction(c)
        v0 = self.field.val(fx)
        if self.frontier is None:
            return v0, None
        floor = None
        for b in range(1, f.degree + 1):
            db = hasse_derivative(f, b)
            dx = Fraction(0)
            for c in reversed(db.coeffs):
                dx = dx * theta + Fraction(c)
            if dx == 0:
                continue
            bound = self.field.val(dx) + Value.rational(b * self.frontier)
            if floor is None or bound < floor:
                floor = bound
        return v0, floor

    # -- t-adic flavor -----------------------------------------------------

    def _series_point(self):
        cf = self.field.cf
        point = {}
        for q, c in self.terms:
            q = Fraction(q)
            if not cf.is_zero(c):
                point[q] = cf.add(point.get(q, cf.zero), c)
        return {q: c for q, c in point.items() if not cf.is_zero(c)}

    def _order_at_point(self, g: Poly, point):
        """Order of g(theta) minus denominator order, exactly."""
        cf = self.field.cf
        # clear rational-function denominators
        dens = [c.den for c in g.coeffs if not self.field.is_zero(c)]
        from .scalars import residue as rfops

        D = (cf.one,)
        for den in dens:
            gcd = rfops.pgcd(cf, D, den)
            D = rfops.pmul(cf, D, rfops.pdivmod(cf, den, gcd)[0])
        numerators = []
        for c in g.coeffs:
            if self.field.is_zero(c):
                numerators.append(())
            else:
                quot = rfops.pdivmod(cf, D, c.den)[0]
                numerators.append(rfops.pmul(cf, c.num, quot))
        acc: dict = {}
        for numc in reversed(numerators):
            acc = _series_mul(cf, acc, point)
            for i, cc in enumerate(numc):
                if cf.is_zero(cc):
                    continue
                q = Fraction(i)
                acc[q] = cf.add(acc.get(q, cf.zero), cc)
            acc = {q: c for q, c in acc.items() if not cf.is_zero(c)}
        d_ord = 0
        for i, cc in enumerate(D):
            if not cf.is_zero(cc):
                d_ord = i
                break
        if not acc:
            return None, d_ord
        return min(acc.keys()), d_ord

    def _eval_tadic(self, f: Poly):
        point = self._series_point()
        o, d_ord = self._order_at_point(f, point)
        v0 = INF if o is None else Value.rational(o - d_ord)
        if self.frontier is None:
            return v0, None
        floor = None
        for b in range(1, f.degree + 1):
            db = hasse_derivative(f, b)
            if db.is_zero():
                continue
            ob, dob = self._order_at_point(db, point)
            if ob is None:
                continue
            bound = Value.rational(ob - dob + b * Fraction(self.frontier))
            if floor is None or bound < floor:
                floor = bound
        return v0, floor

    # -- shared driver -------------------------------------------------------

    def _bounds(self, f: Poly):
        if self._flavor == "padic":
            return self._eval_padic(f)
        return self._eval_tadic(f)

    def evaluate(self, f: Poly) -> Value:
        refines = 0
        while True:
            v0, floor = self._bounds(f)
            if floor is None or v0 < floor:
                return v0
            if self.extend is not None and refines < self.max_refines:
                self.terms, self.frontier = self.extend(self.frontier)
                refines += 1
                continue
            raise PrecisionExhausted(
                f"order of f touches the truncation frontier {self.frontier}",
                frontier=self.frontier,
            )

    def exceeds(self, f: Poly, bound: Value) -> bool:
        """Certified one-sided test nu'(f) > bound.

        Uses nu'(f) >= min(order at the truncated point, Taylor floor), so
        strict excess can be certified even when the exact value cannot.
        """
        refines = 0
        while True:
            v0, floor = self._bounds(f)
            lower = v0 if floor is None else (v0 if v0 < floor else floor)
            if lower > bound:
                return True
            if floor is None or v0 < floor:
                return v0 > bound
            if self.extend is not None and refines < self.max_refines:
                self.terms, self.frontier = self.extend(self.frontier)
                refines += 1
                continue
            raise PrecisionExhausted(
                f"comparison against {bound!r} touches the frontier {self.frontier}",
                frontier=self.frontier,
            )


def value_exceeds(oracle, f: Poly, bound: Value) -> bool:
    """nu'(f) > bound, via a certified one-sided test when the backend has one."""
    if hasattr(oracle, "exceeds"):
        return oracle.exceeds(f, bound)
    return oracle.evaluate(f) > bound


def _series_mul(cf, A: dict, B: dict) -> dict:
    if not A or not B:
        return {}
    out: dict = {}
    for qa, ca in A.items():
        for qb, cb in B.items():
            q = qa + qb
            prev = out.get(q, cf.zero)
            out[q] = cf.add(prev, cf.mul(ca, cb))
    return {q: c for q, c in out.items() if not cf.is_zero(c)}


class ScriptedLimitOracle:
    """Scripted stalled-family valuation for limit-key-polynomial studies.

    The script declares a degree-one tail Q_t = x + theta_t with strictly
    increasing values beta_t bounded by bar_beta, plus a declared limit
    polynomial with its value.  Queries are answered by the limit
    augmentation formula; coefficient values along the tail are certified
    over the declared window and a rise that persists to the window edge is
    reported at the bound (window-certified, as all "for all t" statements
    here are).
    """

    def __init__(self, field, monomials, betas, bar_beta, limit_poly, limit_value, depth=24):
        if not isinstance(field, TwoVariableField):
            raise ValueError("the scripted limit oracle runs in quadratic mode")
        self.field = field
        self._monomials = monomials  # m(t) for t >= 1, value beta_t
        self._betas = betas  # beta(t), strictly increasing
        self.declared_beta_bar = bar_beta
        self.limit_poly = limit_poly
        self.limit_value = limit_value
        self.depth = depth
        self._theta_cache = {1: field.zero}

    def describe(self) -> str:
        return f"scripted limit oracle, window depth {self.depth}"

    def theta(self, t: int):
        """Sum of the first t-1 tail monomials (theta_1 = 0)."""
        if t not in self._theta_cache:
            prev = self.theta(t - 1)
            self._theta_cache[t] = self.field.add(prev, self._monomials(t - 1))
        return self._theta_cache[t]

    def beta(self, t: int) -> Value:
        return self._betas(t)

    def tail_polynomial(self, t: int) -> Poly:
        return Poly.x(self.field) + Poly.constant(self.field, self.theta(t))

    def _w(self, c: Poly) -> Value:
        """Limit-family value of a polynomial of degree < deg(limit_poly)."""
        F = self.field
        if c.is_zero():
            return INF
        if c.degree == 0:
            return F.val(c.coeff(0))
        d1, d0 = c.coeff(1), c.coeff(0)
        vd1 = F.val(d1)
        for t in range(1, self.depth + 1):
            e_t = F.sub(d0, F.mul(d1, self.theta(t)))
            a = F.val(e_t)
            b = vd1 + self.beta(t)
            if a < b:
                return a
            if a > b:
                return b
        return vd1 + self.declared_beta_bar

    def evaluate(self, f: Poly) -> Value:
        if f.is_zero():
            return INF
        if f.degree < self.limit_poly.degree:
            return self._w(f)
        vals = []
        cur = f
        j = 0
        while not cur.is_zero():
            cur, r = euclid_div(cur, self.limit_poly)
            if not r.is_zero():
                vals.append(self.limit_value.scale(j) + self._w(r))
            j += 1
        if not vals:
            return INF
        return vmin(vals)


def random_poly(field, rng, max_deg=3, ensure_nonzero=True) -> Poly:
    deg = rng.randint(0, max_deg)
    coeffs = []
    for _ in range(deg + 1):
        if rng.random() < 0.25:
            coeffs.append(field.zero)
        else:
            coeffs.append(field.random_element(rng))
    p = Poly(field, coeffs)
    if ensure_nonzero and p.is_zero():
        return Poly.one(field)
    return p


def axioms_selftest(oracle, sample_budget: int = 100, seed: int = 0, max_deg: int = 3):
    """Randomized multiplicativity and ultrametric checks.

    Returns a report dict; a failed report marks the oracle invalid for
    runs.  Samples that exhaust precision are skipped and counted.
    """
    import random as _random

    rng = _random.Random(seed)
    field = oracle.field
    failures = []
    checked = 0
    skipped = 0
    for _ in range(sample_budget):
        f = random_poly(field, rng, max_deg)
        g = random_poly(field, rng, max_deg)
        try:
            vf, vg = oracle.evaluate(f), oracle.evaluate(g)
            vfg = oracle.evaluate(f * g)
            vsum = oracle.evaluate(f + g)
        except PrecisionExhausted:
            skipped += 1
            continue
        checked += 1
        if vfg != vf + vg:
            failures.append(
                {"law": "multiplicative", "f": repr(f), "g": repr(g),
                 "vf": repr(vf), "vg": repr(vg), "vfg": repr(vfg)}
            )
        lower = vf if vf < vg else vg
        if vsum < lower:
            failures.append(
                {"law": "ultrametric", "f": repr(f), "g": repr(g), "vsum": repr(vsum)}
            )
        if vf != vg and vsum != lower:
            failures.append(
                {"law": "ultrametric-equality", "f": repr(f), "g": repr(g)}
            )
        if len(failures) >= 8:
            break
    return {
        "passed": not failures,
        "checked": checked,
        "skipped": skipped,
        "failures": failures,
        "description": oracle.describe(),
    }


def oracle_from_json(field, obj):
    kind = obj["kind"]
    if kind == "chain":
        return ChainOracle(KeyChain.from_json(field, obj["chain"]))
    if kind == "eisenstein":
        return EisensteinRootOracle(
            field, poly_from_json(field, obj["min_poly"]), obj["e"]
        )
    if kind == "series":
        terms = []
        for item in obj["terms"]:
            exp = item["exp"]
            if isinstance(exp, dict):
                exp = Fraction(exp["num"], exp["den"])
            coeff = item["coeff"]
            if isinstance(field, RationalFunctionField):
                coeff = field.cf.from_json(coeff)
            terms.append((exp, coeff))
        frontier = obj.get("frontier")
        if isinstance(frontier, dict):
            frontier = Fraction(frontier["num"], frontier["den"])
        return SeriesOracle(field, terms, frontier)
    raise ValueError(f"unknown oracle kind {kind!r}")
