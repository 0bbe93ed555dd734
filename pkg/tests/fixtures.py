"""Shared fixtures: worked oracles, chains and the scripted stall family."""

from __future__ import annotations

import random
from fractions import Fraction

from keypoly import (
    ChainOracle,
    EisensteinRootOracle,
    KeyChain,
    Poly,
    QWithPAdic,
    RationalFunctionField,
    ScriptedLimitOracle,
    SeriesOracle,
    TwoVariableField,
    Value,
)
from keypoly.augment import RunBudgets, run
from keypoly.limits import stall_trace_from_script


# -- sqrt(2) over Q, p = 2 ----------------------------------------------------


def sqrt2_field():
    return QWithPAdic(2)


def sqrt2_oracle():
    F = sqrt2_field()
    x = Poly.x(F)
    return EisensteinRootOracle(F, x * x - Poly.constant(F, Fraction(2)), 2)


def sqrt2_chain():
    F = sqrt2_field()
    x = Poly.x(F)
    m = x * x - Poly.constant(F, Fraction(2))
    return KeyChain.build(F, [(x, Value.rational(Fraction(1, 2))), (m, Value.infinity())])


# -- Hensel root of y^2 + y + 2 in Q_2, value-1 branch ------------------------


def hensel_digits(prec: int):
    a = 0
    for k in range(1, prec + 1):
        mod = 2 ** (k + 1)
        for digit in (0, 1):
            cand = a + digit * 2**k
            if (cand * cand + cand + 2) % mod == 0:
                a = cand
                break
        else:  # pragma: no cover - the polynomial is Hensel-liftable
            raise AssertionError("no digit found")
    return [(k, (a >> k) & 1) for k in range(prec + 1)]


def hensel_oracle(prec: int = 40):
    F = QWithPAdic(2)

    def extend(frontier):
        new = frontier + 16
        return hensel_digits(new - 1), new

    return SeriesOracle(F, hensel_digits(prec), frontier=prec + 1, extend=extend)


def hensel_witness():
    F = QWithPAdic(2)
    x = Poly.x(F)
    return x * x + x + Poly.constant(F, Fraction(2))


def hensel_run(max_steps: int = 24, threshold: int = 20):
    F = QWithPAdic(2)
    x = Poly.x(F)
    probes = [
        hensel_witness(),
        x + Poly.one(F),
        x**2 - Poly.constant(F, Fraction(4)),
        x**3 - Poly.constant(F, Fraction(8)),
    ]
    budgets = RunBudgets(
        max_steps=max_steps,
        value_threshold=Value.rational(threshold),
        stall_window=max_steps + 8,
    )
    return run(hensel_oracle(), probes, budgets), probes


# -- F_3(t) with theta = t^(2/3) ----------------------------------------------


def puiseux_field():
    return RationalFunctionField(3)


def puiseux_oracle():
    return SeriesOracle(puiseux_field(), [(Fraction(2, 3), 1)], frontier=None)


def puiseux_chain_finite():
    """[x @ 2/3, (x^3 - t^2) @ 7/3]: the finite-value variant for analysis."""
    F = puiseux_field()
    x = Poly.x(F)
    t2 = Poly.constant(F, F.mul(F.t, F.t))
    return KeyChain.build(
        F,
        [(x, Value.rational(Fraction(2, 3))), (x**3 - t2, Value.rational(Fraction(7, 3)))],
    )


# -- all-alpha>1 ladder over Q, p = 2 -----------------------------------------


def ladder_chain():
    """[x@1/2, (x^2-2)@7/4, ((x^2-2)^2-8x)@29/8, (...)@59/8], alpha = 2 thrice."""
    F = sqrt2_field()
    x = Poly.x(F)
    c = lambda n: Poly.constant(F, Fraction(n))
    Q2 = x**2 - c(2)
    Q3 = Q2**2 - c(8) * x
    Q4 = Q3**2 - c(32) * x * Q2
    return KeyChain.build(
        F,
        [
            (x, Value.rational(Fraction(1, 2))),
            (Q2, Value.rational(Fraction(7, 4))),
            (Q3, Value.rational(Fraction(29, 8))),
            (Q4, Value.rational(Fraction(59, 8))),
        ],
    )


# -- scripted quadratic-mode stall (bounded increasing values) -----------------


def quad_coords(t: int):
    """(x_t, y_t) with (sqrt2 - 1)^t = x_t + y_t sqrt2."""
    xt, yt = 1, 0
    for _ in range(t):
        xt, yt = 2 * yt - xt, xt - yt
    return xt, yt


def quad_beta(t: int) -> Value:
    xt, yt = quad_coords(t)
    return Value.quadratic(-xt, 1 - yt)


def stall_fixture(depth: int = 10, horizon: int = 24, with_linear_term: bool = False):
    """Scripted char-2 stall with bar_beta = sqrt2 and a degree-2 candidate.

    The candidate constant tracks the tail up to the declared horizon, so
    the defect is certified over any window shorter than the horizon.  With
    ``with_linear_term`` the candidate carries the on-line coefficient v.
    """
    F = TwoVariableField(2)

    def mono(t):
        xt, yt = quad_coords(t)
        return F.monomial_from_coords((-xt, 1 - yt))

    bar = Value.quadratic(0, 1)
    theta_S = F.zero
    for s in range(1, horizon):
        theta_S = F.add(theta_S, mono(s))
    x = Poly.x(F)
    if with_linear_term:
        c0 = F.add(F.mul(theta_S, theta_S), F.mul(F.v, theta_S))
        Qw = x * x + Poly.constant(F, F.v) * x + Poly.constant(F, c0)
    else:
        c0 = F.mul(theta_S, theta_S)
        Qw = x * x + Poly.constant(F, c0)
    oracle = ScriptedLimitOracle(
        F, mono, quad_beta, bar, Qw, Value.quadratic(0, 2), depth=depth
    )
    trace = stall_trace_from_script(oracle, depth, Qw)
    trace.beta_bar = bar
    return F, oracle, trace, Qw


# -- random complete chains ----------------------------------------------------


def random_chain(seed: int):
    """Random validated chain over a rotating set of base fields."""
    rng = random.Random(seed)
    F = [QWithPAdic(2), QWithPAdic(3), QWithPAdic(5), RationalFunctionField(2)][seed % 4]
    x = Poly.x(F)
    chain = None
    for _attempt in range(40):
        try:
            beta1 = Value.rational(Fraction(rng.randint(1, 3), rng.choice([1, 2, 3])))
            chain = KeyChain.start(F, beta1)
            levels = rng.randint(1, 3)
            for _ in range(levels):
                chain = _random_extension(chain, rng)
            return chain
        except Exception:
            continue
    raise AssertionError(f"could not build a random chain for seed {seed}")


def _random_extension(chain, rng):
    from keypoly.graded import integral_relation_lift
    from keypoly.scalars import residue as rf

    i = chain.top_level
    tf = chain.tower_field(i)
    abar = chain.abar(i)
    y = chain.y_expvec(i)
    # random monic irreducible with nonzero constant term over the tower
    for _ in range(60):
        d = rng.choice([1, 1, 1, 2])
        coeffs = [tf.from_int(rng.randrange(1, 6))]
        coeffs += [tf.from_int(rng.randrange(0, 6)) for _ in range(d - 1)]
        coeffs.append(tf.one)
        lam = rf.ptrim(tf, tuple(coeffs))
        if rf.pdeg(lam) != d or tf.is_zero(lam[0]):
            continue
        from keypoly.scalars import factor as fact

        if not fact.is_irreducible(tf, lam):
            continue
        Q = integral_relation_lift(chain, i, lam, abar, y)
        alpha = d * abar
        lo = chain.beta(i).scale(alpha)
        # random value above the floor, keeping denominators tame
        bump = Fraction(rng.randint(1, 6), rng.choice([1, 2, 4]))
        beta = Value.rational(lo.a + bump)
        return chain.append(Q, beta)
    raise AssertionError("no extension found")
