"""Analysis of stalled degree-one tails and limit-key-polynomial candidates.

All "for all t" statements here are certified over the observed finite
window of a stall trace; reports carry the window size.  The inputs are
either traces recorded by a run or traces assembled from a scripted
limit-family oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .analysis import delta_epsilon
from .chain import KeyChain
from .errors import (
    BudgetExhausted,
    GapConditionUnmet,
    NoDefectiveProbe,
    NotStabilized,
)
from .graded import coefficient_value
from .poly import Poly, poly_xgcd
from .scalars.values import INF, Value


@dataclass
class StallStep:
    level: int
    Q: Poly
    beta: Value
    z: Poly | None  # increment from the previous tail polynomial


@dataclass
class StallTrace:
    """A recorded degree-one tail: chain suffix with constant degree."""

    chain: KeyChain
    base_level: int
    steps: list
    probe: Poly
    oracle: object
    beta_bar: Value | None = None

    def levels(self):
        return range(self.base_level, self.chain.top_level + 1)

    @property
    def window(self) -> int:
        return len(self.steps)


def stall_trace_from_run(chain: KeyChain, oracle, probe: Poly) -> StallTrace:
    """Package the maximal trailing alpha = 1 suffix of a run's chain."""
    k = chain.top_level
    while k >= 2 and chain.alpha(k) == 1:
        k -= 1
    base = k
    steps = []
    for i in range(base, chain.top_level + 1):
        z = None
        if i > base:
            z = chain.entries[i - 1].Q - chain.entries[i - 2].Q
        steps.append(
            StallStep(level=i, Q=chain.entries[i - 1].Q, beta=chain.beta(i), z=z)
        )
    return StallTrace(
        chain=chain,
        base_level=base,
        steps=steps,
        probe=probe,
        oracle=oracle,
        beta_bar=getattr(oracle, "declared_beta_bar", None),
    )


def stall_trace_from_script(oracle, depth: int, probe: Poly) -> StallTrace:
    """Materialize the declared tail of a scripted limit oracle as a chain."""
    pairs = [(oracle.tail_polynomial(t), oracle.beta(t)) for t in range(1, depth + 1)]
    chain = KeyChain.build(oracle.field, pairs)
    return stall_trace_from_run(chain, oracle, probe)


@dataclass
class StableDelta:
    delta: int
    e: int | None  # exponent when delta = p^e, else None
    window: int
    violation: str | None = None


def stable_delta(trace: StallTrace, h: Poly | None = None, window: int = 4) -> StableDelta:
    """Stable initial-form degree over the tail, with its p-power certificate."""
    if h is None:
        h = trace.probe
    levels = list(trace.levels())
    if len(levels) < window:
        raise NotStabilized(f"tail window {len(levels)} shorter than {window}")
    deltas = [delta_epsilon(h, trace.chain, i).delta for i in levels]
    tail = deltas[-window:]
    if len(set(tail)) != 1:
        raise NotStabilized(f"delta values still moving: {deltas}")
    delta = tail[0]
    p = trace.chain.field.p_convention
    violation = None
    if p == 1:
        e = 0 if delta == 1 else None
    else:
        e = 0
        m = delta
        while m % p == 0:
            m //= p
            e += 1
        if p**e != delta:
            e = None
    if e is None:
        violation = (
            f"stable delta {delta} is not a power of p = {p}; "
            "the probe cannot be of minimal degree"
        )
    return StableDelta(delta=delta, e=e, window=window, violation=violation)


def coefficient_congruence_check(trace: StallTrace, h: Poly, v: int) -> dict:
    """Compare a deep-tail expansion coefficient with its predicted form.

    The predicted coefficient is the signed binomial combination of the
    early-tail coefficients against powers of the accumulated increments;
    both sides are computed exactly and the difference valuated by
    truncation against the stated threshold.
    """
    sd = stable_delta(trace, h)
    delta = sd.delta
    p = trace.chain.field.p_convention
    pe = p ** (sd.e or 0) if sd.e is not None else 1
    if not (delta - pe <= v <= delta):
        raise ValueError(f"index v={v} outside [{delta - pe}, {delta}]")
    chain = trace.chain
    l1 = trace.base_level + 1
    i = chain.top_level
    if l1 >= i:
        raise NotStabilized("need at least two tail levels beyond the base")
    z_sum = chain.entries[i - 1].Q - chain.entries[l1 - 1].Q
    exp_l1 = chain.expansion(h, l1)
    exp_i = chain.expansion(h, i)
    F = chain.field
    lhs = exp_i[v] if v < len(exp_i) else Poly.zero(F)
    rhs = Poly.zero(F)
    zpow = Poly.one(F)
    for j in range(0, delta - v + 1):
        if v + j < len(exp_l1):
            c = F.from_int((-1) ** j * math.comb(v + j, j))
            rhs = rhs + exp_l1[v + j].scale(c) * zpow
        zpow = zpow * z_sum
    pair_l1 = delta_epsilon(h, chain, l1)
    nu_l1 = chain.nu(h, l1)
    gap1 = pair_l1.nu_plus - nu_l1 if pair_l1.nu_plus.is_finite else INF
    gap2 = chain.beta(i) - chain.beta(trace.base_level)
    threshold = (nu_l1 - chain.beta(l1).scale(v)) + (gap1 if gap1 < gap2 else gap2)
    diff = lhs - rhs
    diff_value = INF if diff.is_zero() else chain.nu(diff, chain.top_level)
    return {
        "v": v,
        "threshold": threshold,
        "difference_value": diff_value,
        "holds": diff_value >= threshold,
        "holds_strictly": diff_value > threshold,
    }


@dataclass
class MonomialVerdict:
    j: int
    value: Value  # nu'(a_ji)
    below_cutoff: bool
    line_position: int  # -1 below, 0 on, +1 above the critical line
    is_p_power: bool
    bad: bool


@dataclass
class BadMonomialReport:
    level: int
    e0: int
    cutoff: Value  # 2 p^e0 bar_beta - p^e0 beta_i
    verdicts: list
    j_top: int | None  # greatest bad index
    j_bullet: int | None  # lexicographic minimizer among bad indices


def _gap_condition(chain: KeyChain, base: int, i: int, e0: int, beta_bar: Value) -> bool:
    lhs = chain.beta(i)
    if base >= 2:
        lhs = lhs - chain.beta(base - 1).scale(chain.alpha(base))
    rhs = (beta_bar - chain.beta(i)).scale(2 * chain.field.p_convention**e0)
    return lhs > rhs


def classify_bad_monomials(
    f: Poly, trace: StallTrace, i: int, beta_bar: Value, e0: int | None = None
) -> BadMonomialReport:
    """Critical-line classification of the level-i expansion monomials."""
    chain = trace.chain
    p = chain.field.p_convention
    if p == 1:
        raise ValueError("bad-monomial classification needs positive residue characteristic")
    if e0 is None:
        sd = stable_delta(trace, f)
        if sd.e is None:
            raise NotStabilized(sd.violation or "stable delta is not a p-power")
        e0 = sd.e
    if not _gap_condition(chain, trace.base_level, i, e0, beta_bar):
        raise GapConditionUnmet(f"level {i} does not satisfy the value-gap condition")
    pe0 = p**e0
    cutoff = beta_bar.scale(2 * pe0) - chain.beta(i).scale(pe0)
    coeffs = chain.expansion(f, i)
    verdicts = []
    for j in range(1, min(pe0, len(coeffs))):
        aj = coeffs[j]
        if aj.is_zero():
            continue
        v = coefficient_value(chain, aj, i)
        line = beta_bar.scale(pe0 - j)
        pos = -1 if v < line else (0 if v == line else 1)
        is_pp = p**_int_log(j, p) == j if j > 0 else False
        below = v + beta_bar.scale(j) < cutoff
        bad = below and (pos != 0 or not is_pp)
        verdicts.append(
            MonomialVerdict(
                j=j, value=v, below_cutoff=below, line_position=pos,
                is_p_power=is_pp, bad=bad,
            )
        )
    bad_js = [m.j for m in verdicts if m.bad]
    j_top = max(bad_js) if bad_js else None
    j_bullet = None
    if bad_js:
        j_bullet = min(
            bad_js,
            key=lambda j: (
                coefficient_value(chain, coeffs[j], i) + chain.beta(i).scale(j),
                -j,
            ),
        )
    return BadMonomialReport(
        level=i, e0=e0, cutoff=cutoff, verdicts=verdicts, j_top=j_top, j_bullet=j_bullet
    )


def _int_log(j: int, p: int) -> int:
    e = 0
    while j % p == 0:
        j //= p
        e += 1
    return e


@dataclass
class LimitCandidate:
    """Weakly affine monic candidate for the limit key polynomial."""

    base_level: int
    e0: int
    coeffs: dict  # exponent -> Poly, only 0 and p-powers present
    beta_bar: Value
    polynomial: Poly

    def to_json(self, chain: KeyChain, checks=None):
        from .poly import poly_to_json

        mode = chain.field.value_mode
        return {
            "base_level": self.base_level,
            "e0": self.e0,
            "coeffs": {str(j): poly_to_json(c) for j, c in sorted(self.coeffs.items())},
            "beta_bar": self.beta_bar.to_json(mode),
            "checks": checks or {},
        }


def build_limit_candidate(trace: StallTrace, probes, degree_cap: int = 64):
    """Assemble a weakly affine candidate from the smallest defective probe.

    Follows the cleanup procedure: normalize the pivotal coefficient,
    truncate to the stable degree, remove bad monomials from the deepest
    admissible level, and strip the monomials that sit above the cutoff.
    Defectiveness is certified only over the observed trace window.
    """
    chain = trace.chain
    F = chain.field
    p = F.p_convention
    report: dict = {"window": trace.window, "steps": []}
    if p == 1:
        report["violation"] = (
            "residue characteristic zero: bounded stalls are impossible, "
            "values are unbounded and no limit candidate exists"
        )
        return None, report
    if trace.beta_bar is None:
        report["violation"] = "no bound evidence on the trace"
        return None, report
    beta_bar = trace.beta_bar
    # smallest-degree persistently defective probe over the window
    witness = None
    for h in sorted(probes, key=lambda q: q.degree):
        if h.is_zero():
            continue
        try:
            target = trace.oracle.evaluate(h)
        except Exception:
            continue
        if all(chain.nu(h, i) < target for i in trace.levels()):
            witness = h
            break
    if witness is None:
        raise NoDefectiveProbe("no probe is defective across the whole window")
    if not witness.is_monic():
        witness = witness.scale(F.inv(witness.coeffs[-1]))
    sd = stable_delta(trace, witness)
    if sd.e is None:
        report["violation"] = sd.violation
        return None, report
    e0 = sd.e
    pe0 = p**e0
    report["e0"] = e0
    # working level: first tail level satisfying the value-gap condition
    i = None
    for lvl in trace.levels():
        if _gap_condition(chain, trace.base_level, lvl, e0, beta_bar):
            i = lvl
            break
    if i is None:
        raise GapConditionUnmet("no level in the window satisfies the value gap")
    report["gap_level"] = i
    # pivotal-coefficient normalization: multiply by the inverse mod Q_i
    exp = chain.expansion(witness, i)
    a_delta = exp[pe0]
    Qi = chain.entries[i - 1].Q
    if not (a_delta - Poly.one(F)).is_zero():
        g, s, _t = poly_xgcd(a_delta, Qi)
        if g.degree != 0:
            raise BudgetExhausted("pivotal coefficient not invertible modulo Q_i")
        a_star = s.scale(F.inv(g.coeff(0)))
        witness = witness * a_star
        report["steps"].append({"action": "normalize", "level": i})
        exp = chain.expansion(witness, i)
    # truncate to the stable degree with a monic top
    f = Qi**pe0
    for j in range(pe0):
        if j < len(exp) and not exp[j].is_zero():
            f = f + exp[j] * (Qi**j)
    report["steps"].append({"action": "truncate", "degree": f.degree})
    if f.degree > degree_cap:
        raise BudgetExhausted(f"candidate degree {f.degree} exceeds cap {degree_cap}")
    # eliminate bad monomials; the greatest bad index strictly decreases
    for _round in range(pe0 + 2):
        cls = classify_bad_monomials(f, trace, i, beta_bar, e0=e0)
        if cls.j_top is None:
            break
        j = cls.j_top
        verdict = next(m for m in cls.verdicts if m.j == j)
        # the greatest bad index must sit strictly above the critical line,
        # and the lexicographic minimizer must not sit below it
        assert verdict.line_position == 1, "greatest bad index not above the line"
        if cls.j_bullet is not None:
            bullet = next(m for m in cls.verdicts if m.j == cls.j_bullet)
            assert bullet.line_position >= 0, "minimizing bad index below the line"
        # deepest window level where the value clears the cutoff
        i1 = None
        vj = verdict.value
        for lvl in range(i, chain.top_level + 1):
            lhs = vj + chain.beta(lvl).scale(j)
            rhs = beta_bar.scale(2 * pe0) - chain.beta(lvl).scale(pe0)
            if lhs > rhs:
                i1 = lvl
                break
        if i1 is None:
            raise BudgetExhausted("no window level clears the cutoff for removal")
        a_j = chain.expansion(f, i1)[j]
        f = f - a_j * (chain.entries[i1 - 1].Q**j)
        report["steps"].append({"action": "remove_bad", "j": j, "level": i1})
    else:
        raise BudgetExhausted("bad-monomial elimination did not terminate")
    # strip everything above the cutoff
    coeffs_i = chain.expansion(f, i)
    stripped = []
    for j in range(1, min(pe0, len(coeffs_i))):
        aj = coeffs_i[j]
        if aj.is_zero():
            continue
        v = coefficient_value(chain, aj, i) + beta_bar.scale(j)
        if v > beta_bar.scale(2 * pe0) - chain.beta(i).scale(pe0):
            f = f - aj * (chain.entries[i - 1].Q**j)
            stripped.append(j)
    if stripped:
        report["steps"].append({"action": "strip_above_cutoff", "js": stripped})
    final = chain.expansion(f, i)
    coeffs = {j: c for j, c in enumerate(final) if not c.is_zero()}
    weakly_affine = all(j == 0 or p**_int_log(j, p) == j for j in coeffs)
    on_line = True
    for j, c in coeffs.items():
        if j == 0 or j == pe0:
            continue
        if coefficient_value(chain, c, i) != beta_bar.scale(pe0 - j):
            on_line = False
    checks = {
        "weakly_affine": weakly_affine,
        "monic_top": pe0 in coeffs and (coeffs[pe0] - Poly.one(F)).is_zero(),
        "critical_line": on_line,
        "window": trace.window,
    }
    report["checks"] = checks
    candidate = LimitCandidate(
        base_level=i, e0=e0, coeffs=coeffs, beta_bar=beta_bar, polynomial=f
    )
    return candidate, report


def exponent_divisibility_check(f: Poly, trace: StallTrace) -> dict:
    """All tail-expansion exponents divisible by p^(e) for the stable degree."""
    sd = stable_delta(trace, f)
    if sd.e is None:
        raise NotStabilized(sd.violation or "stable delta is not a p-power")
    p = trace.chain.field.p_convention
    e_omega = sd.e
    stride = p**e_omega
    preconditions = {
        "base_is_first_level": trace.base_level == 1,
        "all_alpha_one": all(
            trace.chain.alpha(i) == 1 for i in range(2, trace.chain.top_level + 1)
        ),
        "equal_characteristic": trace.chain.field.char == p,
    }
    offenders = []
    if e_omega > 0:
        for i in trace.levels():
            for j, c in enumerate(trace.chain.expansion(f, i)):
                if not c.is_zero() and j % stride != 0:
                    offenders.append({"level": i, "j": j})
    return {
        "e_omega": e_omega,
        "ok": not offenders,
        "vacuous": e_omega == 0,
        "offenders": offenders,
        "preconditions": preconditions,
    }


def value_gap_monotone(trace: StallTrace, h: Poly) -> bool:
    """nu_i^+(h) - nu_i(h) must be non-decreasing along the tail."""
    prev = None
    for i in trace.levels():
        pair = delta_epsilon(h, trace.chain, i)
        if not pair.nu_plus.is_finite:
            gap = INF
        else:
            gap = pair.nu_plus - trace.chain.nu(h, i)
        if prev is not None and prev.is_finite and gap < prev:
            return False
        prev = gap
    return True


def bounded_prefix_sanity(betas, bound: Value) -> bool:
    """Strictly increasing values admit only finitely many below any bound.

    On a finite recorded trace this sanity check demands strict increase
    and that the below-bound part is a prefix.
    """
    below_done = False
    prev = None
    for b in betas:
        if prev is not None and not (b > prev):
            return False
        prev = b
        if b >= bound:
            below_done = True
        elif below_done:
            return False
    return True
