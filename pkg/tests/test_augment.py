"""Augmentation: defect detection, step construction, runs and round-trips."""

import random
from fractions import Fraction

import pytest

from keypoly import (
    ChainOracle,
    EisensteinRootOracle,
    KeyChain,
    Poly,
    QWithPAdic,
    Value,
    augment_step,
    detect_defect,
    refine_alpha_one,
    run,
)
from keypoly.augment import RunBudgets
from keypoly.errors import NonPositiveValueOfX, NoVanishingFactor
from keypoly.oracle import random_poly

import fixtures as fx

F = QWithPAdic(2)
X = Poly.x(F)


def c(n):
    return Poly.constant(F, Fraction(n))


def test_detect_defect_examples():
    ch = KeyChain.start(F, Value.rational(Fraction(1, 2)))
    orc = fx.sqrt2_oracle()
    # [DERIVED] nu'(x^2 - 2) = infinity at the root
    got = detect_defect(X**2 - c(2), ch, orc)
    assert got == (1, Value.rational(1), Value.infinity())
    # [TRIVIAL] nu_1(x) = beta_1 = nu'(x)
    assert detect_defect(X, ch, orc) is None
    # [TRIVIAL] constants agree
    assert detect_defect(c(2), ch, orc) is None


def test_augment_step_sqrt2():
    ch = KeyChain.start(F, Value.rational(Fraction(1, 2)))
    orc = fx.sqrt2_oracle()
    new, report = augment_step(ch, orc, X**2 - c(2))
    assert report.Q_next == X**2 - c(2)
    assert report.alpha_next == 2 and report.abar == 2 and report.d == 1
    assert not report.beta_next.is_finite
    assert report.lam == (1, 1)  # Z + 1 over F_2
    assert new.top_level == 2


def test_augment_step_puiseux():
    Ft = fx.puiseux_field()
    ch = KeyChain.start(Ft, Value.rational(Fraction(2, 3)))
    orc = fx.puiseux_oracle()
    x = Poly.x(Ft)
    t2 = Poly.constant(Ft, Ft.mul(Ft.t, Ft.t))
    new, report = augment_step(ch, orc, x**3 - t2)
    assert report.Q_next == x**3 - t2
    assert report.alpha_next == 3 and report.abar == 3 and report.d == 1
    assert not report.beta_next.is_finite


def test_augment_step_alpha_one_branch():
    # [DERIVED] S = {0, 1}, residual Z + 1 of degree 1: the alpha = 1 branch
    ch = KeyChain.start(F, Value.rational(1))
    orc = fx.hensel_oracle()
    h = fx.hensel_witness()
    new, report = augment_step(ch, orc, h)
    assert report.d == 1 and report.abar == 1 and report.alpha_next == 1
    assert report.support == (0, 1)
    assert new.entries[-1].Q.degree == 1


def test_augment_requires_defect():
    ch = fx.sqrt2_chain()
    orc = ChainOracle(ch)
    with pytest.raises(ValueError):
        augment_step(ch, orc, X + c(1))


def test_refine_alpha_one_exact_root_stops():
    # [TRIVIAL] an exact rational root reaches value infinity in one step
    orc = EisensteinRootOracle(F, X - c(2), 1)
    status = run(orc, [X - c(2), X + c(1)])
    assert status.status == "outside_gamma1"
    assert status.chain.entries[-1].Q == X - c(2)
    assert not status.chain.entries[-1].beta.is_finite


def test_refine_alpha_one_case2a_evidence():
    orc = fx.hensel_oracle()
    h = fx.hensel_witness()
    ch = KeyChain.start(F, Value.rational(1))
    ch, first = augment_step(ch, orc, h)
    budgets = RunBudgets(value_threshold=Value.rational(12), stall_window=40)
    ch, reports, tag = refine_alpha_one(ch, orc, [h], budgets)
    assert tag == "case2a-evidence"
    betas = [first.beta_next] + [r.beta_next for r in reports]
    assert all(b2 > b1 for b1, b2 in zip(betas, betas[1:]))
    assert all(r.alpha_next == 1 for r in reports)
    assert betas[-1] >= Value.rational(12)


def test_refine_alpha_one_case2b_budget():
    orc = fx.hensel_oracle()
    h = fx.hensel_witness()
    ch = KeyChain.start(F, Value.rational(1))
    ch, _ = augment_step(ch, orc, h)
    budgets = RunBudgets(value_threshold=Value.rational(10**6), stall_window=5)
    ch, reports, tag = refine_alpha_one(ch, orc, [h], budgets)
    assert tag == "case2b-evidence"
    assert len(reports) == 5


def test_run_sqrt2_complete_story():
    # [DERIVED] two steps: x @ 1/2 then (x^2 - 2) @ infinity
    orc = fx.sqrt2_oracle()
    probes = [X**2 - c(2), X**3 + X, X + c(1)]
    status = run(orc, probes)
    assert status.status == "outside_gamma1"
    assert len(status.chain) == 2
    assert status.chain.entries[0].beta == Value.rational(Fraction(1, 2))
    assert status.chain.entries[1].Q == X**2 - c(2)
    assert not status.chain.entries[1].beta.is_finite
    # after the terminal entry every probe evaluates equal
    top = status.chain.top_level
    for h in probes:
        assert status.chain.nu(h, top) == orc.evaluate(h)


def test_run_round_trip_chain_oracle():
    # [DERIVED] reconstruction reproduces values and degrees exactly
    for seed in range(6):
        stored = fx.random_chain(seed)
        orc = ChainOracle(stored)
        probes = [e.Q for e in stored.entries]
        status = run(orc, probes, RunBudgets(max_steps=40))
        assert status.status == "complete"
        assert len(status.chain) == len(stored)
        for a, b in zip(status.chain.entries, stored.entries):
            assert a.beta == b.beta and a.alpha == b.alpha


def test_run_rejects_nonpositive_x():
    # [TRIVIAL] value of x must be positive
    bad_chain = KeyChain.start(F, Value.rational(Fraction(1, 3)))

    class ShiftOracle:
        field = F

        def evaluate(self, f):
            # a valuation with nu(x) = 0: evaluate at x -> 1 with 2-adic val
            from keypoly.poly import evaluate as ev

            return F.val(ev(f, Fraction(1)))

    with pytest.raises(NonPositiveValueOfX):
        run(ShiftOracle(), [X + c(1)])
    del bad_chain


def test_no_vanishing_factor_on_bad_oracle():
    # claims a defect on the witness but refuses a value gain on every
    # candidate lift: inconsistent with being a valuation
    ch = KeyChain.start(F, Value.rational(Fraction(1, 2)))
    witness = X**2 - c(2)

    class LyingOracle:
        field = F

        def evaluate(self, f):
            if f == witness:
                return Value.rational(10)
            return ch.nu(f, 1)  # the bare truncation gains nothing

    with pytest.raises(NoVanishingFactor):
        augment_step(ch, LyingOracle(), witness)


def test_alpha_one_extension_realization():
    """Members of the one-step family extend to any later member's value.

    On a degree-one trace, the difference of two family members is itself a
    sum of homogeneous increments with strictly increasing values, so the
    shorter member extends by exactly those increments.
    """
    status, _probes = fx.hensel_run(max_steps=10, threshold=64)
    ch = status.chain
    entries = ch.entries
    assert len(entries) >= 4
    for a in range(1, len(entries) - 1):
        for b in range(a + 1, len(entries)):
            Qa, Qb = entries[a].Q, entries[b].Q
            w = Qb - Qa
            # increments z_s = Q_(s+1) - Q_s recover the difference
            zs = [entries[s + 1].Q - entries[s].Q for s in range(a, b)]
            total = Poly.zero(F)
            for z in zs:
                total = total + z
            assert total == w
            vals = [F.val(z.coeff(0)) for z in zs]
            assert all(v2 > v1 for v1, v2 in zip(vals, vals[1:]))


def test_one_completeness_at_window_scale():
    """Probes valued below the attained bound resolve at some finite level."""
    status, probes = fx.hensel_run(max_steps=24, threshold=20)
    ch = status.chain
    orc = fx.hensel_oracle()
    top = ch.top_level
    attained = max(
        (e.beta for e in ch.entries if e.beta.is_finite), default=Value.rational(0)
    )
    rng = random.Random(51)
    extra = [random_poly(F, rng, max_deg=3) for _ in range(20)]
    for h in probes + extra:
        if h.is_zero():
            continue
        try:
            v = orc.evaluate(h)
        except Exception:
            continue
        if v < attained:
            assert any(ch.nu(h, i) == v for i in range(1, top + 1))
