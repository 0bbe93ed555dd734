"""Key-polynomial chains, standard expansions, truncations, Newton polygons.

A chain is an ordered list of entries (Q_i, beta_i, alpha_i) starting at
Q_1 = x.  Appending an entry validates it as a key polynomial over the
current chain: its initial form must compress to a monic irreducible
minimal polynomial over the residue tower, and the declared value must
exceed the truncation value.  The residue-tower step data extracted during
validation is what the graded module consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import graded
from .errors import NonPositiveValueOfX, NotIrreducible, ZeroPolynomial
from .poly import Poly, euclid_div, poly_from_json, poly_to_json
from .scalars import factor as fact
from .scalars import residue as rf
from .scalars.values import INF, Value, ValueLattice


@dataclass
class ChainEntry:
    """One chain level; step data toward the next level fills in lazily."""

    Q: Poly
    beta: Value
    alpha: int
    abar: int | None = None  # index of beta in the group below this level
    y: tuple | None = None  # witness monomial of value abar * beta
    lam: tuple | None = None  # minimal polynomial of z over the tower field
    d: int | None = None
    z: object | None = None  # z = in(Q)^abar / y in the next tower field


class KeyChain:
    """Ordered key-polynomial chain with residue-tower bookkeeping."""

    def __init__(self, base_field, entries, lattices, tfields, caches=None, limit=None):
        self.field = base_field
        self.entries = entries
        self._lattices = lattices
        self._tfields = tfields
        self.limit = limit
        if caches is None:
            caches = {"exp": {}, "nu": {}, "resid": {}, "mono": {}}
        self._caches = caches

    # cache views used by the graded module
    @property
    def _exp_cache(self):
        return self._caches["exp"]

    @property
    def _nu_cache(self):
        return self._caches["nu"]

    @property
    def _resid_cache(self):
        return self._caches["resid"]

    @property
    def _mono_cache(self):
        return self._caches["mono"]

    # -- construction ------------------------------------------------------

    @classmethod
    def start(cls, base_field, beta1: Value) -> "KeyChain":
        if beta1.is_finite and beta1.sign() <= 0:
            raise NonPositiveValueOfX(f"value of x must be positive, got {beta1!r}")
        entry = ChainEntry(Q=Poly.x(base_field), beta=beta1, alpha=1)
        chain = cls(base_field, [entry], [base_field.gamma_lattice()],
                    [base_field.residue_field])
        chain._fill_entry_monomial(1)
        return chain

    @classmethod
    def build(cls, base_field, pairs, limit=None) -> "KeyChain":
        """Build and validate a chain from (Q, beta) pairs; Q_1 must be x."""
        if not pairs:
            raise ValueError("empty chain")
        Q1, beta1 = pairs[0]
        if Q1 != Poly.x(base_field):
            raise ValueError("the first key polynomial must be x")
        chain = cls.start(base_field, beta1)
        for Q, beta in pairs[1:]:
            chain = chain.append(Q, beta)
        chain.limit = limit
        return chain

    def _fill_entry_monomial(self, i: int):
        entry = self.entries[i - 1]
        if entry.beta.is_finite:
            entry.abar = self.lattice(i).index(entry.beta)
            if entry.abar is not None:
                entry.y = graded.canonical_monomial(
                    self, i, entry.beta.scale(entry.abar)
                )

    def append(self, Q: Poly, beta: Value) -> "KeyChain":
        """Validated extension by one key polynomial."""
        i = len(self.entries)
        top = self.entries[-1]
        if not top.beta.is_finite:
            raise ValueError("cannot extend a chain past an infinite value")
        if not Q.is_monic():
            raise ValueError("key polynomials must be monic")
        degQ = self.entries[-1].Q.degree
        if Q.degree < degQ or Q.degree % degQ != 0:
            raise ValueError("degree of the new key polynomial must be a multiple")
        alpha_new = Q.degree // degQ
        ge = graded.initial_form(Q, self, i)
        if ge.value != top.beta.scale(alpha_new) or max(ge.support) != alpha_new:
            raise ValueError("initial form is not homogeneous of the full degree")
        if min(ge.support) != 0:
            raise NotIrreducible("initial form divisible by the level variable")
        comp = graded.compress_initial(self, i, ge)
        tf = self.tower_field(i)
        lam, _lead = rf.pmonic(tf, comp.zpoly)
        d = rf.pdeg(lam)
        if d * comp.abar != alpha_new:
            raise NotIrreducible("initial form is not the minimal relation")
        if tf.is_zero(lam[0]):
            raise NotIrreducible("relation polynomial vanishes at 0")
        if not fact.is_irreducible(tf, lam):
            raise NotIrreducible("initial form does not factor irreducibly")
        if beta.is_finite and not (beta > top.beta.scale(alpha_new)):
            raise ValueError("declared value does not exceed the truncation value")
        if beta.is_finite:
            ratio_new = beta.scale(Fraction(1, Q.degree))
            ratio_old = top.beta.scale(Fraction(1, degQ))
            if not (ratio_new > ratio_old):
                raise ValueError("value per degree must strictly increase")
        # commit step data on the current top, then extend
        top.lam = lam
        top.d = d
        if d == 1:
            new_tf = tf
            top.z = tf.neg(lam[0])
        else:
            new_tf = rf.ExtensionField(tf, lam, name=f"z{i}")
            top.z = new_tf.generator()
        entry = ChainEntry(Q=Q, beta=beta, alpha=alpha_new)
        chain = KeyChain(
            self.field,
            self.entries + [entry],
            self._lattices + [self.lattice(i).extend(top.beta)],
            self._tfields + [new_tf],
            caches=self._caches,
            limit=self.limit,
        )
        chain._fill_entry_monomial(i + 1)
        return chain

    # -- accessors -----------------------------------------------------------

    def __len__(self):
        return len(self.entries)

    @property
    def top_level(self) -> int:
        return len(self.entries)

    def beta(self, i: int) -> Value:
        return self.entries[i - 1].beta

    def alpha(self, i: int) -> int:
        return self.entries[i - 1].alpha

    def abar(self, i: int) -> int:
        a = self.entries[i - 1].abar
        if a is None:
            raise ValueError(f"level {i} has no finite group index")
        return a

    def y_expvec(self, i: int):
        return self.entries[i - 1].y

    def z_elem(self, i: int):
        z = self.entries[i - 1].z
        if z is None:
            raise ValueError(f"level {i} has no tower step yet")
        return z

    def lattice(self, i: int) -> ValueLattice:
        return self._lattices[i - 1]

    def tower_field(self, i: int):
        return self._tfields[i - 1]

    # -- expansions and truncations -------------------------------------------

    def expansion(self, h: Poly, i: int):
        """Coefficients of the i-standard expansion of h by iterated division."""
        key = (h, i)
        cache = self._exp_cache
        if key in cache:
            return cache[key]
        Qi = self.entries[i - 1].Q
        out = []
        cur = h
        while not cur.is_zero():
            cur, r = euclid_div(cur, Qi)
            out.append(r)
        cache[key] = out
        return out

    def nu(self, h: Poly, i: int) -> Value:
        """Truncation value at level i; nu_i(0) is infinity by convention."""
        if h.is_zero():
            return INF
        key = (h, i)
        cache = self._nu_cache
        if key in cache:
            return cache[key]
        beta_i = self.beta(i)
        best = None
        for j, dj in enumerate(self.expansion(h, i)):
            if dj.is_zero():
                continue
            if i == 1:
                v = self.field.val(dj.coeff(0))
            else:
                v = self.nu(dj, i - 1)
            v = v + beta_i.scale(j)
            if best is None or v < best:
                best = v
        cache[key] = best
        return best

    # -- serialization -------------------------------------------------------

    def to_json(self, bounds=None):
        out = []
        for idx, entry in enumerate(self.entries, start=1):
            item = {
                "Q": poly_to_json(entry.Q),
                "beta": entry.beta.to_json(self.field.value_mode),
                "alpha": entry.alpha,
            }
            if bounds and idx in bounds:
                item["b"], item["e"] = bounds[idx]
            else:
                item["b"] = item["e"] = None
            out.append(item)
        return out

    @classmethod
    def from_json(cls, base_field, data, limit=None) -> "KeyChain":
        pairs = [
            (poly_from_json(base_field, item["Q"]), Value.from_json(item["beta"]))
            for item in data
        ]
        return cls.build(base_field, pairs, limit=limit)


def truncation_value(h: Poly, chain: KeyChain, i: int) -> Value:
    """The i-truncation of the target valuation at h."""
    return chain.nu(h, i)


def standard_expansion(h: Poly, chain: KeyChain, i: int):
    """The i-standard expansion coefficients of a nonzero polynomial."""
    if h.is_zero():
        raise ZeroPolynomial("standard expansion of the zero polynomial")
    return list(chain.expansion(h, i))


@dataclass(frozen=True)
class NewtonSide:
    slope: Value
    j_from: int
    j_to: int


@dataclass(frozen=True)
class NewtonPolygon:
    points: tuple  # (j, Value)
    hull: tuple  # vertex sublist, increasing j
    sides: tuple  # NewtonSide list with strictly increasing slopes

    def to_json(self, mode="rational"):
        return {
            "points": [[j, v.to_json(mode)] for j, v in self.points],
            "hull": [[j, v.to_json(mode)] for j, v in self.hull],
            "sides": [
                {"slope": s.slope.to_json(mode), "from": s.j_from, "to": s.j_to}
                for s in self.sides
            ],
        }


def newton_polygon(h: Poly, chain: KeyChain, i: int) -> NewtonPolygon:
    """Lower convex hull of (index, coefficient value) at level i."""
    if h.is_zero():
        raise ZeroPolynomial("Newton polygon of the zero polynomial")
    pts = []
    for j, dj in enumerate(chain.expansion(h, i)):
        if dj.is_zero():
            continue
        pts.append((j, graded.coefficient_value(chain, dj, i)))
    hull: list = []
    for j, v in pts:
        while len(hull) >= 2:
            (j1, v1), (j2, v2) = hull[-2], hull[-1]
            # keep the lower hull: drop the middle point when (j2, v2) lies
            # on or above the segment from (j1, v1) to (j, v)
            lhs = (v2 - v1).scale(j - j1)
            rhs = (v - v1).scale(j2 - j1)
            if lhs >= rhs:
                hull.pop()
            else:
                break
        hull.append((j, v))
    sides = []
    for (j1, v1), (j2, v2) in zip(hull, hull[1:]):
        slope = (v2 - v1).scale(Fraction(1, j2 - j1))
        sides.append(NewtonSide(slope=slope, j_from=j1, j_to=j2))
    return NewtonPolygon(points=tuple(pts), hull=tuple(hull), sides=tuple(sides))


def determines_side(h: Poly, chain: KeyChain, i: int, beta: Value) -> bool:
    """True when at least two indices attain the minimum of j*beta + nu'(d_ji)."""
    return len(graded.support_set(h, chain, i, beta)) >= 2


def newton_svg(npoly: NewtonPolygon, width=420, height=320) -> str:
    """Static SVG rendering; coordinates are 12-digit decimal, display only."""
    pts = [(j, v.approx()) for j, v in npoly.points if v.is_finite]
    if not pts:
        return "<svg xmlns='http://www.w3.org/2000/svg'/>"
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    spanx = (x1 - x0) or 1
    spany = (y1 - y0) or 1
    pad = 30

    def sx(x):
        return round(pad + (x - x0) * (width - 2 * pad) / spanx, 12)

    def sy(y):
        return round(height - pad - (y - y0) * (height - 2 * pad) / spany, 12)

    parts = [
        f"<svg xmlns='http://www.w3.org/2000/svg' width='{width}' height='{height}'>",
        f"<line x1='{pad}' y1='{height - pad}' x2='{width - pad}' y2='{height - pad}' stroke='black'/>",
        f"<line x1='{pad}' y1='{pad}' x2='{pad}' y2='{height - pad}' stroke='black'/>",
    ]
    hull_pts = [(j, v.approx()) for j, v in npoly.hull if v.is_finite]
    if len(hull_pts) >= 2:
        path = " ".join(f"{sx(j)},{sy(v)}" for j, v in hull_pts)
        parts.append(f"<polyline points='{path}' fill='none' stroke='blue'/>")
    for j, v in pts:
        parts.append(f"<circle cx='{sx(j)}' cy='{sy(v)}' r='3' fill='red'/>")
    parts.append("</svg>")
    return "\n".join(parts)
