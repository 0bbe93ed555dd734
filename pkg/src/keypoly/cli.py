"""Command-line front end: expression parsing, runs, JSON/SVG reports.

Subcommands: value, expand, newton, trace, analyze, limit.  All reports are
JSON with exact rationals as num/den pairs (never floats) and a stable key
order, so identical configurations produce byte-identical output.  The SVG
rendering of Newton polygons is display-only.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import analysis, augment, limits
from .chain import KeyChain, newton_polygon, newton_svg
from .errors import (
    BudgetExhausted,
    KeypolyError,
    ParseError,
    PrecisionExhausted,
    UnknownSymbol,
)
from .oracle import oracle_from_json
from .poly import Poly, poly_from_json, poly_to_json
from .scalars.fields import field_from_json
from .scalars.values import Value

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_BUDGET = 3


# -- polynomial expression parser -------------------------------------------


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(self.text):
            return None, self.pos
        ch = self.text[self.pos]
        if ch.isdigit():
            j = self.pos
            while j < len(self.text) and self.text[j].isdigit():
                j += 1
            return ("int", self.text[self.pos : j]), self.pos
        if ch.isalpha():
            j = self.pos
            while j < len(self.text) and self.text[j].isalnum():
                j += 1
            return ("sym", self.text[self.pos : j]), self.pos
        if ch in "+-*/^()":
            return ("op", ch), self.pos
        raise ParseError(f"unexpected character {ch!r}", position=self.pos)

    def next(self):
        tok, pos = self.peek()
        if tok is not None:
            self.pos = pos + len(tok[1])
        return tok, pos


class _Parser:
    """Recursive-descent parser over +, -, *, /, ^ and parentheses.

    Values are polynomials over the configured base field; division is
    restricted to divisors free of x.
    """

    def __init__(self, text: str, field):
        self.toks = _Tokenizer(text)
        self.field = field
        self.symbols = {"x": Poly.x(field)}
        for name, elem in field.symbol_elements().items():
            self.symbols[name] = Poly.constant(field, elem)

    def parse(self) -> Poly:
        value = self.expr()
        tok, pos = self.toks.peek()
        if tok is not None:
            raise ParseError(f"trailing input at {tok[1]!r}", position=pos)
        return value

    def expr(self) -> Poly:
        tok, _ = self.toks.peek()
        negate = False
        if tok == ("op", "-"):
            self.toks.next()
            negate = True
        elif tok == ("op", "+"):
            self.toks.next()
        value = self.term()
        if negate:
            value = -value
        while True:
            tok, _ = self.toks.peek()
            if tok == ("op", "+"):
                self.toks.next()
                value = value + self.term()
            elif tok == ("op", "-"):
                self.toks.next()
                value = value - self.term()
            else:
                return value

    def term(self) -> Poly:
        value = self.power()
        while True:
            tok, pos = self.toks.peek()
            if tok == ("op", "*"):
                self.toks.next()
                value = value * self.power()
            elif tok == ("op", "/"):
                self.toks.next()
                divisor = self.power()
                if divisor.degree > 0:
                    raise ParseError("division by an x-dependent expression", position=pos)
                if divisor.is_zero():
                    raise ParseError("division by zero", position=pos)
                value = value.scale(self.field.inv(divisor.coeff(0)))
            else:
                return value

    def power(self) -> Poly:
        base = self.atom()
        tok, pos = self.toks.peek()
        if tok == ("op", "^"):
            self.toks.next()
            etok, epos = self.toks.next()
            if etok is None or etok[0] != "int":
                raise ParseError("exponent must be a non-negative integer", position=epos)
            return base ** int(etok[1])
        return base

    def atom(self) -> Poly:
        tok, pos = self.toks.next()
        if tok is None:
            raise ParseError("unexpected end of input", position=pos)
        kind, text = tok
        if kind == "int":
            return Poly.constant(self.field, self.field.from_int(int(text)))
        if kind == "sym":
            if text not in self.symbols:
                raise UnknownSymbol(
                    f"symbol {text!r} is not available over this base field",
                    position=pos,
                )
            return self.symbols[text]
        if tok == ("op", "("):
            value = self.expr()
            closing, cpos = self.toks.next()
            if closing != ("op", ")"):
                raise ParseError("missing closing parenthesis", position=cpos)
            return value
        if tok == ("op", "-"):
            return -self.atom()
        raise ParseError(f"unexpected token {text!r}", position=pos)


def parse_polynomial(text: str, field) -> Poly:
    """Exact normalized polynomial from an expression string."""
    return _Parser(text, field).parse()


# -- configuration plumbing ---------------------------------------------------


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _poly_from_spec(field, spec) -> Poly:
    if isinstance(spec, str):
        return parse_polynomial(spec, field)
    return poly_from_json(field, spec)


def _budgets_from(obj, args) -> augment.RunBudgets:
    budgets = augment.RunBudgets()
    if obj:
        if "max_steps" in obj:
            budgets.max_steps = obj["max_steps"]
        if "value_threshold" in obj:
            budgets.value_threshold = Value.from_json(obj["value_threshold"])
        if "window" in obj:
            budgets.stall_window = obj["window"]
        if "seed" in obj:
            budgets.seed = obj["seed"]
    if getattr(args, "max_steps", None) is not None:
        budgets.max_steps = args.max_steps
    if getattr(args, "value_threshold", None) is not None:
        budgets.value_threshold = Value.rational(Fraction(args.value_threshold))
    if getattr(args, "seed", None) is not None:
        budgets.seed = args.seed
    return budgets


def _emit(args, name: str, payload: str, suffix=".json"):
    text = payload if payload.endswith("\n") else payload + "\n"
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / f"{name}{suffix}").write_text(text, encoding="utf-8")
    if suffix == ".json":
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _require_field(config, args):
    if args.field:
        return field_from_json(json.loads(args.field))
    if config and "field" in config:
        return field_from_json(config["field"])
    raise KeypolyError("no base field configured (use --field or a config file)")


def _chain_from_args(field, config, args) -> KeyChain:
    if args.chain:
        data = _load_json(args.chain)
    elif config and "chain" in config:
        data = config["chain"]
    else:
        raise KeypolyError("no chain provided")
    if isinstance(data, dict) and "chain" in data:
        data = data["chain"]
    return KeyChain.from_json(field, data)


def _probes_from(field, config, args):
    specs = []
    if getattr(args, "probes", None):
        payload = _load_json(args.probes)
        specs = payload["probes"] if isinstance(payload, dict) else payload
    elif config and "probes" in config:
        specs = config["probes"]
    return [_poly_from_spec(field, s) for s in specs]


# -- subcommands ---------------------------------------------------------------


def cmd_value(args, config) -> int:
    field = _require_field(config, args)
    chain = _chain_from_args(field, config, args)
    h = _poly_from_spec(field, args.poly)
    level = args.level or chain.top_level
    v = chain.nu(h, level)
    _emit(args, "value", _dump({"value": v.to_json(field.value_mode)}))
    return EXIT_OK


def cmd_expand(args, config) -> int:
    field = _require_field(config, args)
    chain = _chain_from_args(field, config, args)
    h = _poly_from_spec(field, args.poly)
    level = args.level or chain.top_level
    coeffs = chain.expansion(h, level)
    _emit(
        args,
        "expand",
        _dump({"level": level, "coeffs": [poly_to_json(c) for c in coeffs]}),
    )
    return EXIT_OK


def cmd_newton(args, config) -> int:
    field = _require_field(config, args)
    chain = _chain_from_args(field, config, args)
    h = _poly_from_spec(field, args.poly)
    level = args.level or chain.top_level
    np_ = newton_polygon(h, chain, level)
    _emit(args, "newton", _dump(np_.to_json(field.value_mode)))
    _emit(args, "newton", newton_svg(np_), suffix=".svg")
    return EXIT_OK


def cmd_trace(args, config) -> int:
    field = _require_field(config, args)
    if args.oracle:
        oracle = oracle_from_json(field, _load_json(args.oracle))
    elif config and "oracle" in config:
        oracle = oracle_from_json(field, config["oracle"])
    else:
        raise KeypolyError("no oracle provided")
    probes = _probes_from(field, config, args)
    budgets = _budgets_from(config.get("budgets") if config else None, args)
    status = augment.run(oracle, probes, budgets)
    _emit(args, "trace", _dump(status.to_json()))
    return EXIT_OK


def cmd_analyze(args, config) -> int:
    field = _require_field(config, args)
    chain = _chain_from_args(field, config, args)
    h = _poly_from_spec(field, args.poly)
    mode = field.value_mode
    levels = []
    for i in range(1, chain.top_level + 1):
        if not chain.beta(i).is_finite:
            break
        eb = analysis.effective_bound(chain, i)
        report = analysis.derivative_value_report(h, chain, i)
        pair = analysis.delta_epsilon(h, chain, i)
        levels.append(
            {
                "level": i,
                "b": eb.b,
                "e": eb.e,
                "I_max": list(eb.I_max),
                "delta": pair.delta,
                "epsilon": pair.epsilon if pair.epsilon is not None else "inf",
                "pivotal": [pair.pivotal[0], pair.pivotal[1].to_json(mode)],
                "checks": {
                    "ineq_10_1": all(r["holds"] for r in report["rows"]),
                    "eq_at_predicted": report["predicted_equality_holds"],
                    "reconstruction": report["reconstruction_ok"],
                },
            }
        )
    trace_checks = {}
    if chain.top_level >= 2:
        ct = analysis.character_trace(h, chain)
        trace_checks = {k: bool(v) for k, v in ct["checks"].items()}
    ratio_ok = analysis.ratio_strictly_increasing(chain)
    _emit(
        args,
        "analyze",
        _dump({"levels": levels, "ratio_monotone": ratio_ok, "trace_checks": trace_checks}),
    )
    return EXIT_OK


def cmd_limit(args, config) -> int:
    field = _require_field(config, args)
    payload = _load_json(args.trace) if args.trace else config["limit_trace"]
    chain = KeyChain.from_json(field, payload["chain"])
    oracle = oracle_from_json(field, payload["oracle"]) if "oracle" in payload else None
    if oracle is None:
        raise KeypolyError("limit analysis needs an oracle in the trace file")
    probe = _poly_from_spec(field, payload["probe"])
    beta_bar = Value.from_json(payload["beta_bar"]) if "beta_bar" in payload else None
    trace = limits.stall_trace_from_run(chain, oracle, probe)
    if beta_bar is not None:
        trace.beta_bar = beta_bar
    probes = _probes_from(field, config, args) or [probe]
    candidate, report = limits.build_limit_candidate(
        trace, probes, degree_cap=args.degree_cap or 64
    )
    out = {"report": {k: v for k, v in report.items() if k != "steps"}}
    out["report"]["steps"] = report.get("steps", [])
    if candidate is not None:
        checks = dict(report.get("checks", {}))
        div = limits.exponent_divisibility_check(candidate.polynomial, trace)
        checks["exponent_divisibility"] = div["ok"] or div["vacuous"]
        sd = limits.stable_delta(trace, candidate.polynomial)
        checks["stable_delta_p_power"] = sd.e is not None
        out["candidate"] = candidate.to_json(chain, checks)
    _emit(args, "limit", _dump(out))
    return EXIT_OK


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="keypoly", description=__doc__)
    ap.add_argument("--config", help="JSON run configuration file")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--field", help="inline field descriptor JSON")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, poly=True):
        p.add_argument("--chain", help="chain JSON file")
        if poly:
            p.add_argument("--poly", required=True, help="polynomial expression")
        p.add_argument("--level", type=int, default=None)

    common(sub.add_parser("value", help="truncation value of a polynomial"))
    common(sub.add_parser("expand", help="standard expansion coefficients"))
    common(sub.add_parser("newton", help="Newton polygon with SVG"))
    tr = sub.add_parser("trace", help="run the construction against an oracle")
    tr.add_argument("--oracle", help="oracle JSON file")
    tr.add_argument("--probes", help="probes JSON file")
    tr.add_argument("--max-steps", dest="max_steps", type=int, default=None)
    tr.add_argument("--value-threshold", dest="value_threshold", default=None)
    an = sub.add_parser("analyze", help="differential and character report")
    common(an)
    lm = sub.add_parser("limit", help="limit-candidate analysis of a stalled trace")
    lm.add_argument("--trace", help="stall trace JSON file")
    lm.add_argument("--probes", help="probes JSON file")
    lm.add_argument("--window", type=int, default=None)
    lm.add_argument("--degree-cap", dest="degree_cap", type=int, default=None)
    return ap


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    config = _load_json(args.config) if args.config else None
    handlers = {
        "value": cmd_value,
        "expand": cmd_expand,
        "newton": cmd_newton,
        "trace": cmd_trace,
        "analyze": cmd_analyze,
        "limit": cmd_limit,
    }
    try:
        return handlers[args.command](args, config)
    except (PrecisionExhausted, BudgetExhausted) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BUDGET
    except KeypolyError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
