"""Defect detection, augmentation steps and the construction driver.

One augmentation: take a witness h whose top truncation undershoots the
oracle, compress its initial form, factor the residual polynomial over the
tower field, and keep the unique irreducible factor whose canonical lift
gains value against the oracle.  Runs iterate this until the probes are
exhausted, an infinite value is reached, or the step pattern stalls.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .chain import KeyChain
from .errors import BudgetExhausted, NonPositiveValueOfX, NoVanishingFactor
from .graded import compress_initial, initial_form, integral_relation_lift
from .oracle import value_exceeds
from .poly import Poly, poly_to_json
from .scalars import factor as fact
from .scalars import residue as rf
from .scalars.values import INF, Value


@dataclass
class RunBudgets:
    max_steps: int = 48
    value_threshold: Value = dc_field(default_factory=lambda: Value.rational(32))
    stall_window: int = 12
    seed: int = 0


@dataclass
class AugmentReport:
    """Everything one augmentation step decided."""

    witness: Poly
    level: int
    support: tuple
    lam: tuple
    abar: int
    d: int
    alpha_next: int
    Q_next: Poly
    beta_next: Value

    def to_json(self, chain: KeyChain):
        tf = chain.tower_field(self.level)
        mode = chain.field.value_mode
        return {
            "level": self.level,
            "support": list(self.support),
            "lam": [tf.to_json(c) for c in self.lam],
            "abar": self.abar,
            "d": self.d,
            "alpha": self.alpha_next,
            "Q": poly_to_json(self.Q_next),
            "beta": self.beta_next.to_json(mode),
        }


def detect_defect(h: Poly, chain: KeyChain, oracle):
    """Smallest level where the truncation undershoots the oracle, if any."""
    target = oracle.evaluate(h)
    for i in range(1, chain.top_level + 1):
        vi = chain.nu(h, i)
        if vi < target:
            return i, vi, target
    return None


def augment_step(chain: KeyChain, oracle, h: Poly, seed: int = 0):
    """Append the next key polynomial using h as the defect witness."""
    i = chain.top_level
    nu_i = chain.nu(h, i)
    if not value_exceeds(oracle, h, nu_i):
        raise ValueError("witness is not defective at the top level")
    ge = initial_form(h, chain, i)
    comp = compress_initial(chain, i, ge)
    tf = chain.tower_field(i)
    _unit, factors = fact.factor_poly(tf, comp.zpoly, seed=seed)
    chosen = None
    for g, _mult in factors:
        if rf.pdeg(g) < 1 or tf.is_zero(g[0]):
            continue
        cand = integral_relation_lift(chain, i, g, comp.abar, comp.y)
        if value_exceeds(oracle, cand, chain.nu(cand, i)):
            if chosen is not None:
                raise NoVanishingFactor(
                    "more than one residual factor passes the lift test; "
                    "the oracle is not consistent with a valuation"
                )
            beta_cand = oracle.evaluate(cand)
            chosen = (g, cand, beta_cand)
    if chosen is None:
        raise NoVanishingFactor(
            "no residual factor passes the lift test; "
            "the oracle is not consistent with a valuation"
        )
    g, Q_next, beta_next = chosen
    d = rf.pdeg(g)
    report = AugmentReport(
        witness=h,
        level=i,
        support=tuple(ge.support),
        lam=tuple(g),
        abar=comp.abar,
        d=d,
        alpha_next=d * comp.abar,
        Q_next=Q_next,
        beta_next=beta_next,
    )
    return chain.append(Q_next, beta_next), report


def _first_defective(chain: KeyChain, oracle, probes):
    """Probes are scanned in increasing degree; first top-level defect wins."""
    top = chain.top_level
    for h in sorted(probes, key=lambda f: f.degree):
        if h.is_zero():
            continue
        if value_exceeds(oracle, h, chain.nu(h, top)):
            return h
    return None


def refine_alpha_one(chain: KeyChain, oracle, probes, budgets: RunBudgets):
    """Drive consecutive value-raising steps while the degree stays put.

    Returns (chain, reports, tag) with tag one of ``case1`` (the set of
    one-step extensions found its end: the defect vanished, the next step
    jumps degree, or an infinite value was reached), ``case2a-evidence``
    (values passed the configured threshold) or ``case2b-evidence``
    (the step budget elapsed with values still bounded).
    """
    if chain.entries[-1].alpha != 1:
        raise ValueError("refinement requires a trailing degree-one step")
    reports = []
    while True:
        witness = _first_defective(chain, oracle, probes)
        if witness is None:
            return chain, reports, "case1"
        if len(reports) >= budgets.stall_window:
            return chain, reports, "case2b-evidence"
        chain, report = augment_step(chain, oracle, witness, seed=budgets.seed)
        reports.append(report)
        if not report.beta_next.is_finite:
            return chain, reports, "case1"
        if report.alpha_next > 1:
            return chain, reports, "case1"
        if report.beta_next >= budgets.value_threshold:
            return chain, reports, "case2a-evidence"


@dataclass
class RunStatus:
    """Outcome of a construction run."""

    status: str  # complete | outside_gamma1 | stall_detected | budget_exhausted
    chain: KeyChain
    trace: list
    stall: object | None = None
    case2a_evidence: bool = False

    def to_json(self):
        out = {
            "status": self.status,
            "case2a_evidence": self.case2a_evidence,
            "levels": len(self.chain),
            "chain": self.chain.to_json(),
            "trace": [],
        }
        # reports reference tower fields of the chain prefix they extended
        for r in self.trace:
            out["trace"].append(r.to_json(self.chain))
        return out


def run(oracle, probes, budgets: RunBudgets | None = None) -> RunStatus:
    """Construct the chain for an oracle until the probes stop witnessing defects."""
    if budgets is None:
        budgets = RunBudgets()
    if not probes:
        raise ValueError("probe list must be nonempty")
    field = oracle.field
    beta1 = oracle.evaluate(Poly.x(field))
    if beta1.is_finite and beta1.sign() <= 0:
        raise NonPositiveValueOfX(f"oracle gives x the value {beta1!r}")
    chain = KeyChain.start(field, beta1)
    if not beta1.is_finite:
        return RunStatus(status="outside_gamma1", chain=chain, trace=[])
    trace: list = []
    case2a = False
    while True:
        witness = _first_defective(chain, oracle, probes)
        if witness is None:
            return RunStatus(
                status="complete", chain=chain, trace=trace, case2a_evidence=case2a
            )
        if len(trace) >= budgets.max_steps:
            return RunStatus(
                status="budget_exhausted",
                chain=chain,
                trace=trace,
                case2a_evidence=case2a,
            )
        chain, report = augment_step(chain, oracle, witness, seed=budgets.seed)
        trace.append(report)
        if not report.beta_next.is_finite:
            return RunStatus(
                status="outside_gamma1", chain=chain, trace=trace,
                case2a_evidence=case2a,
            )
        if report.alpha_next == 1:
            remaining = budgets.max_steps - len(trace)
            window = RunBudgets(
                max_steps=budgets.max_steps,
                value_threshold=budgets.value_threshold,
                stall_window=min(budgets.stall_window, max(remaining, 0)),
                seed=budgets.seed,
            )
            chain, more, tag = refine_alpha_one(chain, oracle, probes, window)
            trace.extend(more)
            if more and not more[-1].beta_next.is_finite:
                return RunStatus(
                    status="outside_gamma1", chain=chain, trace=trace,
                    case2a_evidence=case2a,
                )
            if tag == "case2a-evidence":
                case2a = True
            elif tag == "case2b-evidence" and len(more) >= budgets.stall_window:
                from .limits import stall_trace_from_run

                last_witness = more[-1].witness if more else witness
                stall = stall_trace_from_run(chain, oracle, last_witness)
                return RunStatus(
                    status="stall_detected",
                    chain=chain,
                    trace=trace,
                    stall=stall,
                    case2a_evidence=case2a,
                )
