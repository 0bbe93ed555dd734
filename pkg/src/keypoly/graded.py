"""Initial forms, residual polynomials and homogeneous lifts.

Homogeneous elements of the graded algebra generated by the earlier
key-polynomial initial forms are represented as (value, unit) pairs: every
graded piece is one-dimensional over the residue tower, spanned by a
canonical monomial.  Monomials are exponent vectors over the base-field
generators plus the chain polynomials; reducing an exponent vector against
the relations in(Q_j)^abar_j = y_j * z_j yields the tower unit that
separates two monomials of equal value.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotIrreducible, ZeroPolynomial
from .poly import Poly
from .scalars import factor as fact
from .scalars import residue as rf
from .scalars.residue import field_pow
from .scalars.values import Value

# Exponent vectors: (base, chain) with base the exponents of the base-field
# generators (length 1 or 2) and chain the exponents of Q_1 .. Q_(level-1).


def _base_width(chain) -> int:
    return 2 if chain.field.value_mode == "quadratic" else 1


def ev_zero(chain, level):
    return ((0,) * _base_width(chain), (0,) * (level - 1))


def ev_make(chain, level, base=None, chain_part=None):
    b = tuple(base) if base is not None else (0,) * _base_width(chain)
    c = tuple(chain_part) if chain_part is not None else (0,) * (level - 1)
    assert len(c) == level - 1
    return (b, c)


def ev_pad(ev, level):
    base, chain_part = ev
    assert len(chain_part) <= level - 1
    return (base, chain_part + (0,) * (level - 1 - len(chain_part)))


def ev_add(e1, e2):
    assert len(e1[1]) == len(e2[1])
    return (
        tuple(a + b for a, b in zip(e1[0], e2[0])),
        tuple(a + b for a, b in zip(e1[1], e2[1])),
    )


def ev_sub(e1, e2):
    assert len(e1[1]) == len(e2[1])
    return (
        tuple(a - b for a, b in zip(e1[0], e2[0])),
        tuple(a - b for a, b in zip(e1[1], e2[1])),
    )


def ev_scale(ev, k: int):
    return (tuple(k * a for a in ev[0]), tuple(k * a for a in ev[1]))


def ev_value(chain, ev) -> Value:
    base, chain_part = ev
    if chain.field.value_mode == "quadratic":
        v = Value.quadratic(base[0], base[1])
    else:
        v = Value.rational(base[0])
    for j, a in enumerate(chain_part, start=1):
        if a:
            v = v + chain.beta(j).scale(a)
    return v


def canonical_monomial(chain, level: int, gamma: Value):
    """Canonical exponent vector of value gamma at the given level.

    Chain exponents are reduced into [0, abar_j); the decomposition is
    unique because abar_j is the index of beta_j over the group below it.
    """
    cache = chain._mono_cache
    key = (level, gamma)
    if key in cache:
        return cache[key]
    rest = gamma
    chain_part = [0] * (level - 1)
    for j in range(level - 1, 0, -1):
        abar_j = chain.abar(j)
        lat = chain.lattice(j)
        found = None
        for a in range(abar_j):
            cand = rest - chain.beta(j).scale(a)
            if lat.contains(cand):
                found = a
                rest = cand
                break
        if found is None:
            raise ValueError(f"{gamma!r} is not in the level-{level} value group")
        chain_part[j - 1] = found
    base = chain.field.gamma_coords(rest)
    ev = (tuple(base), tuple(chain_part))
    cache[key] = ev
    return ev


def tower_embed(chain, elem, from_level: int, to_level: int):
    """Embed an element of k_from into k_to along the tower."""
    for k in range(from_level, to_level):
        lo, hi = chain.tower_field(k), chain.tower_field(k + 1)
        if hi is not lo:
            elem = hi.embed(elem)
    return elem


def unit_quotient(chain, level: int, ev1, ev2):
    """Tower unit u with monomial(ev1) = u * monomial(ev2) (equal values).

    Reduces the difference vector top-down through in(Q_j)^abar_j = y_j z_j.
    """
    tf = chain.tower_field(level)
    unit = tf.one
    base = list(ev_sub(ev1, ev2)[0])
    chain_part = list(ev_sub(ev1, ev2)[1])
    for j in range(level - 1, 0, -1):
        n = chain_part[j - 1]
        if n == 0:
            continue
        abar_j = chain.abar(j)
        q, r = divmod(n, abar_j)
        if r != 0:
            raise AssertionError("non-canonical residual exponent in unit quotient")
        if q == 0:
            continue
        zj = tower_embed(chain, chain.z_elem(j), j + 1, level)
        unit = tf.mul(unit, field_pow(tf, zj, q))
        chain_part[j - 1] = 0
        yb, yc = chain.y_expvec(j)
        for t in range(len(yc)):
            chain_part[t] += q * yc[t]
        base = [b + q * y for b, y in zip(base, yb)]
    if any(chain_part) or any(base):
        raise AssertionError("unit quotient of monomials with different values")
    return unit


def coefficient_value(chain, d: Poly, i: int) -> Value:
    """nu'(d) for deg d < deg Q_i, computed by lower-level truncation."""
    if i == 1:
        return chain.field.val(d.coeff(0))
    return chain.nu(d, i - 1)


def residual_of(chain, i: int, d: Poly):
    """(value, tower unit) with in(d) = unit * canonical monomial, deg d < deg Q_i."""
    if d.is_zero():
        raise ZeroPolynomial("residual of the zero polynomial")
    key = (d, i)
    cache = chain._resid_cache
    if key in cache:
        return cache[key]
    F = chain.field
    if i == 1:
        c = d.coeff(0)
        gamma = F.val(c)
        m = F.monomial(gamma)
        res = F.residue(F.div(c, m))
        out = (gamma, res)
        cache[key] = out
        return out
    j = i - 1
    tf = chain.tower_field(i)
    coeffs = chain.expansion(d, j)
    beta_j = chain.beta(j)
    values = {}
    for jj, cj in enumerate(coeffs):
        if cj.is_zero():
            continue
        values[jj] = coefficient_value(chain, cj, j) + beta_j.scale(jj)
    mu = min(values.values())
    support = sorted(jj for jj, v in values.items() if v == mu)
    abar_j = chain.abar(j)
    m_target = canonical_monomial(chain, i, mu)
    total = tf.zero
    for jj in support:
        gamma_j, c_j = residual_of(chain, j, coeffs[jj])
        c_j = tower_embed(chain, c_j, j, i)
        q, r = divmod(jj, abar_j)
        ev = ev_pad(canonical_monomial(chain, j, gamma_j), i)
        if q:
            ev = ev_add(ev, ev_scale(ev_pad(chain.y_expvec(j), i), q))
        if r:
            ev = (ev[0], ev[1][: j - 1] + (ev[1][j - 1] + r,) + ev[1][j:])
        u = unit_quotient(chain, i, ev, m_target)
        term = tf.mul(c_j, u)
        if q:
            zj = tower_embed(chain, chain.z_elem(j), j + 1, i)
            term = tf.mul(term, field_pow(tf, zj, q))
        total = tf.add(total, term)
    if tf.is_zero(total):
        raise AssertionError("vanishing residual: truncation structure violated")
    out = (mu, total)
    cache[key] = out
    return out


@dataclass(frozen=True)
class GradedElement:
    """Initial form of a polynomial at a chain level.

    ``residual`` is the dense residual polynomial in the level variable over
    the tower field; indices outside ``support`` hold the tower zero.
    """

    value: Value
    level: int
    residual: tuple
    support: tuple

    def degree(self) -> int:
        return max(self.support)

    def to_json(self, tf, mode="rational"):
        return {
            "value": self.value.to_json(mode),
            "residual": {
                "tower_level": self.level,
                "coeffs": [tf.to_json(c) for c in self.residual],
            },
        }


def support_set(h: Poly, chain, i: int, beta: Value) -> set:
    """Indices minimizing j*beta + nu'(d_ji) over the i-standard expansion."""
    if h.is_zero():
        raise ZeroPolynomial("support of the zero polynomial")
    coeffs = chain.expansion(h, i)
    values = {}
    for j, cj in enumerate(coeffs):
        if cj.is_zero():
            continue
        values[j] = coefficient_value(chain, cj, i) + beta.scale(j)
    mu = min(values.values())
    return {j for j, v in values.items() if v == mu}


def initial_form(h: Poly, chain, i: int) -> GradedElement:
    """Quasi-homogeneous initial form of h at level i.

    The residual entry at index j is the tower unit of in(d_ji) relative to
    the canonical monomial of its graded piece.
    """
    if h.is_zero():
        raise ZeroPolynomial("initial form of the zero polynomial")
    beta_i = chain.beta(i)
    coeffs = chain.expansion(h, i)
    values = {}
    for j, cj in enumerate(coeffs):
        if cj.is_zero():
            continue
        values[j] = coefficient_value(chain, cj, i) + beta_i.scale(j)
    mu = min(values.values())
    if not mu.is_finite:
        raise ValueError("initial form with infinite value")
    support = sorted(j for j, v in values.items() if v == mu)
    tf = chain.tower_field(i)
    residual = [tf.zero] * (max(support) + 1)
    for j in support:
        _gamma, c = residual_of(chain, i, coeffs[j])
        residual[j] = c
    return GradedElement(
        value=mu, level=i, residual=tuple(residual), support=tuple(support)
    )


@dataclass(frozen=True)
class CompressedForm:
    """Lemma-4.5 shape of a quasi-homogeneous form: monomial * Q^j0 * R(Z)."""

    level: int
    j0: int
    abar: int
    y: tuple  # exponent vector of the witness monomial, level shape
    zpoly: tuple  # dense coefficients of R(Z) over the tower field


def compress_initial(chain, i: int, ge: GradedElement) -> CompressedForm:
    """Rewrite a level-i initial form as a polynomial in Z = Qbar^abar / y."""
    abar = chain.abar(i)
    tf = chain.tower_field(i)
    support = list(ge.support)
    j0 = min(support)
    if any((j - j0) % abar for j in support):
        raise AssertionError("support not contained in a single class mod abar")
    y = canonical_monomial(chain, i, chain.beta(i).scale(abar))
    gamma0 = ge.value - chain.beta(i).scale(j0)
    top_r = (max(support) - j0) // abar
    zcoeffs = [tf.zero] * (top_r + 1)
    for j in support:
        r = (j - j0) // abar
        gamma_j = gamma0 - chain.beta(i).scale(r * abar)
        ev = canonical_monomial(chain, i, gamma_j)
        if r:
            ev = ev_add(ev, ev_scale(y, r))
        u = unit_quotient(chain, i, ev, canonical_monomial(chain, i, gamma0))
        zcoeffs[r] = tf.mul(ge.residual[j], u)
    return CompressedForm(level=i, j0=j0, abar=abar, y=y, zpoly=tuple(zcoeffs))


def _bottom_lift(field, c, signed: bool):
    if not signed:
        return field.lift_residue(c)
    neg = field.residue_field.neg(c)
    return field.neg(field.lift_residue(neg))


def lift_homogeneous(chain, i: int, gamma: Value, c, signed: bool = False) -> Poly:
    """Canonical K[x]-lift of the homogeneous element (gamma, c) at level i.

    Returns a polynomial of degree < deg Q_i with nu'(lift) = gamma and
    level-i residual equal to c.  The ``signed`` flag switches the bottom
    representative rule to -lift(-c); the relation lift uses it so that
    exact algebraic relations are recovered with their natural sign.
    """
    F = chain.field
    if i == 1:
        m = F.monomial(gamma)
        return Poly.constant(F, F.mul(m, _bottom_lift(F, c, signed)))
    j = i - 1
    tfi = chain.tower_field(i)
    tfj = chain.tower_field(j)
    if tfi is tfj:
        parts = [c]
    else:
        parts = list(c)  # coefficients over k_j in the generator z_j
    m_gamma = canonical_monomial(chain, i, gamma)
    a = m_gamma[1][j - 1]
    sub_level_ev = (m_gamma[0], m_gamma[1][: j - 1])
    abar_j = chain.abar(j)
    beta_j = chain.beta(j)
    y_j = chain.y_expvec(j)
    Qj = chain.entries[j - 1].Q
    acc = Poly.zero(F)
    for e, c_e in enumerate(parts):
        if tfj.is_zero(c_e):
            continue
        n = a + e * abar_j
        gamma_e = gamma - beta_j.scale(n)
        ev = sub_level_ev
        if e:
            ev = ev_sub(ev, ev_scale(y_j, e))
        u = unit_quotient(chain, j, ev, canonical_monomial(chain, j, gamma_e))
        w = lift_homogeneous(chain, j, gamma_e, tfj.mul(c_e, u), signed)
        acc = acc + w * (Qj**n)
    return acc


def integral_relation_lift(chain, i: int, lam: tuple, abar: int, y) -> Poly:
    """Monic lift of the integral relation attached to a minimal polynomial.

    lam is monic over the level-i tower field with lam(0) != 0; the result
    is monic of degree deg(lam) * abar * deg Q_i in x.
    """
    tf = chain.tower_field(i)
    lam = rf.ptrim(tf, lam)
    d = rf.pdeg(lam)
    if d < 1 or not rf.base_eq(tf, lam[-1], tf.one):
        raise NotIrreducible("relation polynomial must be monic of degree >= 1")
    if tf.is_zero(lam[0]):
        raise NotIrreducible("relation polynomial must not vanish at 0")
    if not fact.is_irreducible(tf, lam):
        raise NotIrreducible("relation polynomial failed its irreducibility certificate")
    Qi = chain.entries[i - 1].Q
    beta_i = chain.beta(i)
    acc = Qi ** (d * abar)
    for r in range(d):
        if tf.is_zero(lam[r]):
            continue
        gamma = beta_i.scale((d - r) * abar)
        ev = ev_scale(y, d - r)
        u = unit_quotient(chain, i, ev, canonical_monomial(chain, i, gamma))
        w = lift_homogeneous(chain, i, gamma, tf.mul(lam[r], u), signed=True)
        acc = acc + w * (Qi ** (r * abar))
    return acc
