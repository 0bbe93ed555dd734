"""Differential-operator numerics and Newton-polygon characters.

Everything here is computed from the chain alone: derivative values come
from lower-level truncations, which are exact because the degrees drop
below the next key polynomial.  No oracle is consulted, so the module also
works on synthetic chains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .chain import KeyChain
from .errors import ZeroPolynomial
from .graded import coefficient_value, initial_form
from .poly import Poly, hasse_derivative
from .scalars.values import INF, Value


def _vp(n: int, p: int):
    """p-adic exponent with the paper's p = 1 convention folded in."""
    if n == 0:
        return math.inf
    if p == 1:
        return 1
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


@dataclass(frozen=True)
class EffectiveBound:
    level: int
    b: int
    e: int | None  # exponent when b is a pure p-power, else None
    I_max: tuple
    ratio: Value  # (beta_i - nu'(d_b Q_i)) / b
    deriv_value: Value  # nu'(d_b Q_i)


def _derivative_value(chain: KeyChain, i: int, g: Poly) -> Value:
    """nu'(g) for deg g < deg Q_i via the highest exact truncation."""
    if g.is_zero():
        return INF
    if i == 1:
        return chain.field.val(g.coeff(0))
    return chain.nu(g, i - 1)


def effective_bound(chain: KeyChain, i: int) -> EffectiveBound:
    """Smallest b maximizing (beta_i - nu'(d_b Q_i)) / b, with its class."""
    cache = chain._caches.setdefault("bounds", {})
    if i in cache:
        return cache[i]
    entry = chain.entries[i - 1]
    if not entry.beta.is_finite:
        raise ValueError("effective bound needs a finite value at this level")
    Qi = entry.Q
    best_ratio = None
    table = []
    for b in range(1, Qi.degree + 1):
        db = hasse_derivative(Qi, b)
        if db.is_zero():
            continue
        v = _derivative_value(chain, i, db)
        ratio = (entry.beta - v).scale(Fraction(1, b))
        table.append((b, v, ratio))
        if best_ratio is None or ratio > best_ratio:
            best_ratio = ratio
    members = [(b, v) for b, v, r in table if r == best_ratio]
    b_i, v_i = members[0]
    p = chain.field.p_convention
    e = None
    if p == 1:
        e = 0 if b_i == 1 else None
    else:
        k = _vp(b_i, p)
        if p**k == b_i:
            e = k
    out = EffectiveBound(
        level=i,
        b=b_i,
        e=e,
        I_max=tuple(b for b, _v in members),
        ratio=best_ratio,
        deriv_value=v_i,
    )
    cache[i] = out
    return out


def ratio_strictly_increasing(chain: KeyChain) -> bool:
    """The effective ratio must strictly increase along finite-value levels."""
    prev = None
    for i in range(1, chain.top_level + 1):
        if not chain.beta(i).is_finite:
            break
        eb = effective_bound(chain, i)
        if prev is not None and not (eb.ratio > prev):
            return False
        prev = eb.ratio
    return True


def _expansion_term_values(chain: KeyChain, h: Poly, i: int):
    coeffs = chain.expansion(h, i)
    beta = chain.beta(i)
    vals = {}
    for j, dj in enumerate(coeffs):
        if dj.is_zero():
            continue
        vals[j] = coefficient_value(chain, dj, i) + beta.scale(j)
    return coeffs, vals


def derivative_value_report(h: Poly, chain: KeyChain, i: int, probe_bs=None) -> dict:
    """Bounds, equality cases and the reconstruction identity for derivatives.

    The report carries one row per probed order b with the exact defect
    nu_i(h) - nu_i(d_b h), the admissible bound (b/b_i) * D, and equality
    flags; the predicted equality order from the minimizing expansion term;
    the reconstruction of nu_i(h) from the d_(j b_i) h; and per-monomial
    checks of the binomial criterion with the initial-form product formula
    asserted at value level.
    """
    if h.is_zero():
        raise ZeroPolynomial("derivative report of the zero polynomial")
    eb = effective_bound(chain, i)
    p = chain.field.p_convention
    beta = chain.beta(i)
    D = beta - eb.deriv_value  # beta_i - nu'(d_{b_i} Q_i)
    nu_h = chain.nu(h, i)
    if probe_bs is None:
        probe_bs = set(range(0, min(8, max(h.degree, 1)) + 1))
        k = 0
        while eb.b * p**k <= max(h.degree, 1):
            probe_bs.add(eb.b * p**k)
            k += 1
            if p == 1:
                break
    rows = []
    for b in sorted(probe_bs):
        db = hasse_derivative(h, b)
        nu_db = chain.nu(db, i)
        bound = D.scale(Fraction(b, eb.b))
        if nu_db.is_finite:
            defect = nu_h - nu_db
            ok = defect <= bound
            equality = defect == bound
        else:
            defect = None
            ok = True
            equality = False
        rows.append(
            {"b": b, "nu_i": nu_db, "bound": bound, "holds": ok, "equality": equality}
        )
    coeffs, term_values = _expansion_term_values(chain, h, i)
    # minimizing triple (term value, vp(j), j), lexicographically
    triple = min((term_values[j], _vp(j, p), j) for j in term_values)
    j_star = triple[2]
    if j_star == 0:
        predicted_b = 0
        predicted_holds = True
    else:
        e_star = _vp(j_star, p)
        predicted_b = eb.b * (p**e_star if p > 1 else 1)
        db = hasse_derivative(h, predicted_b)
        nu_db = chain.nu(db, i)
        predicted_holds = nu_db.is_finite and (nu_h - nu_db) == D.scale(
            Fraction(predicted_b, eb.b)
        )
    # reconstruction of nu_i(h) from the scaled derivative ladder
    s = len(coeffs) - 1
    recon_terms = []
    recon_min = None
    for j in range(0, s + 1):
        db = hasse_derivative(h, j * eb.b)
        v = chain.nu(db, i)
        if not v.is_finite:
            continue
        t = v + D.scale(j)
        recon_terms.append((j, t))
        if recon_min is None or t < recon_min:
            recon_min = t
    support = sorted(j for j, v in term_values.items() if v == nu_h)
    e_all = None
    for j in support:
        ej = _vp(j, p)
        e_all = ej if e_all is None else min(e_all, ej)
    if e_all is None or e_all is math.inf:
        e_all = 0
    attained_required = []
    for j in support:
        if j == 0:
            continue
        ej = _vp(j, p)
        if all(_vp(j2, p) >= ej + 1 for j2 in support if j2 < j):
            t = dict(recon_terms).get(j)
            attained_required.append({"j": j, "attained": t == recon_min})
    recon_ok = recon_min == nu_h
    monomial_checks = _monomial_checks(chain, h, i, eb, D, support, coeffs, e_all)
    return {
        "level": i,
        "b": eb.b,
        "e": eb.e,
        "I_max": list(eb.I_max),
        "ratio": eb.ratio,
        "nu_h": nu_h,
        "rows": rows,
        "predicted_b": predicted_b,
        "predicted_equality_holds": predicted_holds,
        "reconstruction_ok": recon_ok,
        "reconstruction_min": recon_min,
        "reconstruction_attained": attained_required,
        "monomial_checks": monomial_checks,
    }


def _monomial_checks(chain, h, i, eb, D, support, coeffs, e_all):
    """Per-monomial equality criteria and value-level initial-form formulas."""
    F = chain.field
    p = F.p_convention
    Qi = chain.entries[i - 1].Q
    dQ = hasse_derivative(Qi, eb.b)
    checks = []
    # each support monomial against the binomial criterion
    for j in support:
        if j == 0:
            continue
        e_j = _vp(j, p)
        if e_j is math.inf or p == 1:
            e_j = 0
        u = j // (p**e_j) if p > 1 else j
        term = coeffs[j] * (Qi**j)
        nu_term = chain.nu(term, i)
        for b in {p**e_j * eb.b, p ** (e_j + (1 if p > 1 else 0)) * eb.b}:
            if b == 0 or b > term.degree:
                continue
            dterm = hasse_derivative(term, b)
            nu_d = chain.nu(dterm, i)
            equality = nu_d.is_finite and (nu_term - nu_d) == D.scale(
                Fraction(b, eb.b)
            )
            divisible = b % (p**e_j * eb.b) == 0 if p > 1 else b % eb.b == 0
            entry = {"j": j, "b": b, "equality": equality, "divisibility_ok": True}
            if equality and not divisible:
                entry["divisibility_ok"] = False
            if divisible and (b == p**e_j * eb.b or len(eb.I_max) == 1):
                c = math.comb(u, b // (p**e_j * eb.b)) if p > 1 else math.comb(u, b // eb.b)
                binom_unit = F.val(F.from_int(c)).is_zero()
                entry["binomial_criterion_ok"] = equality == binom_unit
                if equality:
                    # value-level form of the initial-form product formula
                    k = b // eb.b
                    if j >= k:
                        rhs = coeffs[j].scale(F.from_int(c)) * (dQ**k) * (Qi ** (j - k))
                        diff = dterm - rhs
                        entry["product_formula_ok"] = (
                            chain.nu(rhs, i) == nu_d
                            and chain.nu(diff, i) > nu_d
                        )
            checks.append(entry)
    # the collective step: b = p^(e + e_i) gives equality and the sum formula
    collective = {}
    if p > 1:
        b = p**e_all * eb.b
        if 0 < b <= max(h.degree, 1):
            dh = hasse_derivative(h, b)
            nu_h = chain.nu(h, i)
            nu_dh = chain.nu(dh, i)
            collective["b"] = b
            collective["equality"] = nu_dh.is_finite and (nu_h - nu_dh) == D.scale(
                Fraction(b, eb.b)
            )
            s_b = [j for j in support if j % (p ** (e_all + 1)) != 0]
            rhs = Poly.zero(F)
            for j in s_b:
                c = F.from_int(math.comb(j, p**e_all))
                rhs = rhs + coeffs[j].scale(c) * (dQ ** (p**e_all)) * (
                    Qi ** (j - p**e_all)
                )
            if not rhs.is_zero():
                diff = dh - rhs
                collective["sum_formula_ok"] = chain.nu(rhs, i) == nu_dh and (
                    chain.nu(diff, i) > nu_dh
                )
        # the h-not-in-K[x^(p^(e+e_i+1))] flag
        stride = p ** (e_all + (eb.e or 0) + 1)
        collective["proper_exponent_flag"] = any(
            m % stride != 0
            for m, c in enumerate(h.coeffs)
            if not F.is_zero(c)
        )
    return {"per_monomial": checks, "collective": collective}


@dataclass(frozen=True)
class CharacterPair:
    """delta/epsilon characters of a polynomial at one level."""

    level: int
    delta: int
    nu_plus: Value
    epsilon: int | None  # None encodes infinity
    pivotal: tuple  # (delta, value of the pivotal coefficient)
    characteristic: tuple | None = None  # (theta, value) at the next level

    def epsilon_key(self):
        return math.inf if self.epsilon is None else self.epsilon


def delta_epsilon(h: Poly, chain: KeyChain, i: int) -> CharacterPair:
    """Degree of the initial form and the next-value index pair."""
    if h.is_zero():
        raise ZeroPolynomial("characters of the zero polynomial")
    coeffs, term_values = _expansion_term_values(chain, h, i)
    mu = min(term_values.values())
    support = [j for j, v in term_values.items() if v == mu]
    delta = max(support)
    above = {j: v for j, v in term_values.items() if j > delta}
    if not above:
        nu_plus: Value = INF
        epsilon = None
    else:
        nu_plus = min(above.values())
        epsilon = max(j for j, v in above.items() if v == nu_plus)
    pivotal = (delta, coefficient_value(chain, coeffs[delta], i))
    return CharacterPair(
        level=i, delta=delta, nu_plus=nu_plus, epsilon=epsilon, pivotal=pivotal
    )


def characteristic_vertex(h: Poly, chain: KeyChain, i: int):
    """Vertex (theta, coefficient value) read from the next-level expansion."""
    if i + 1 > chain.top_level:
        return None
    coeffs = chain.expansion(h, i + 1)
    beta_i = chain.beta(i)
    alpha_next = chain.alpha(i + 1)
    vals = {}
    for j, dj in enumerate(coeffs):
        if dj.is_zero():
            continue
        vals[j] = coefficient_value(chain, dj, i + 1) + beta_i.scale(j * alpha_next)
    mu = min(vals.values())
    theta = min(j for j, v in vals.items() if v == mu)
    return (theta, coefficient_value(chain, coeffs[theta], i + 1))


def character_trace(h: Poly, chain: KeyChain) -> dict:
    """Per-level character pairs with the monotonicity verdicts."""
    if chain.top_level < 2:
        raise ValueError("character traces need at least two levels")
    pairs = []
    for i in range(1, chain.top_level + 1):
        if not chain.beta(i).is_finite:
            break
        pair = delta_epsilon(h, chain, i)
        if i < chain.top_level and chain.beta(i + 1).is_finite:
            pair = CharacterPair(
                level=pair.level,
                delta=pair.delta,
                nu_plus=pair.nu_plus,
                epsilon=pair.epsilon,
                pivotal=pair.pivotal,
                characteristic=characteristic_vertex(h, chain, i),
            )
        pairs.append(pair)
        if pair.delta == 0:
            break
    checks = {
        "lex_monotone": True,
        "alpha_weighted": True,
        "stable_delta_coefficient": True,
        "stable_pair_epsilon_value": True,
        "vertex_order": True,
    }
    for a, b in zip(pairs, pairs[1:]):
        i = a.level
        alpha_next = chain.alpha(i + 1)
        if (b.delta, b.epsilon_key()) > (a.delta, a.epsilon_key()):
            checks["lex_monotone"] = False
        if alpha_next * b.delta > a.delta:
            checks["alpha_weighted"] = False
        if a.delta == b.delta and a.delta > 0:
            da = chain.expansion(h, i)[a.delta]
            db_ = chain.expansion(h, i + 1)[b.delta]
            va = coefficient_value(chain, da, i)
            diff = da - db_
            lvl = min(i + 1, chain.top_level)
            if not diff.is_zero() and not (chain.nu(diff, lvl) > va):
                checks["stable_delta_coefficient"] = False
            if a.epsilon is not None and a.epsilon == b.epsilon:
                ea = coefficient_value(chain, chain.expansion(h, i)[a.epsilon], i)
                eb_ = coefficient_value(
                    chain, chain.expansion(h, i + 1)[b.epsilon], i + 1
                )
                if ea != eb_:
                    checks["stable_pair_epsilon_value"] = False
        if a.characteristic is not None:
            theta, _v = a.characteristic  # theta at level i+1, from the i-level pair
            if theta < b.delta:
                checks["vertex_order"] = False
            # the characteristic vertex must not undercut the pivotal one
            beta_next = chain.beta(i + 1)
            dtheta = chain.expansion(h, i + 1)[theta]
            vtheta = coefficient_value(chain, dtheta, i + 1) + beta_next.scale(theta)
            ddelta = chain.expansion(h, i + 1)[b.delta]
            vdelta = coefficient_value(chain, ddelta, i + 1) + beta_next.scale(b.delta)
            if vtheta < vdelta:
                checks["vertex_order"] = False
    return {"pairs": pairs, "checks": checks}
