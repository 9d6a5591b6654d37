"""Command-line front end.

Exit codes: 0 success, 1 check or measure failed, 2 bad input,
3 no admissible rewrite, 4 demo regression.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import fixtures
from .cospan import Cospan, is_ma, is_monogamous
from .dot import to_dot
from .dpo import (
    MODES,
    STRATEGIES,
    RewriteError,
    RewriteRule,
    RewriteStep,
    Trace,
    admissible_steps,
    apply_step,
    normalize,
)
from .hypergraph import GraphError, Signature, is_acyclic, validate
from .serialize import (
    FormatError,
    cospan_from_json,
    cospan_to_json,
    dumps,
    load_json,
    rule_from_json,
    signature_from_json,
    trace_states,
    trace_to_json,
    write_atomic,
)
from .terms import TermError, extract_term, interpret, parse
from .theories import BA_SIGNATURE, MEASURES, RULESETS, check_decrease, non_confluence_demo

OUTPUT_ENV = "SDREWRITE_OUTPUT_DIR"

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NO_MATCH, EXIT_REGRESSION = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


def _out_dir(args) -> Path:
    return Path(args.out or os.environ.get(OUTPUT_ENV) or ".")


def _signature(args) -> Signature:
    if getattr(args, "sig", None):
        return signature_from_json(load_json(args.sig))
    rs = getattr(args, "ruleset", None)
    if rs in RULESETS:
        return RULESETS[rs][1]
    return BA_SIGNATURE


def _read_source(source: str) -> str:
    p = Path(source)
    if p.is_file():
        return p.read_text(encoding="utf-8")
    return source


def _load_cospan(source: str, sig: Signature) -> Cospan:
    """A cospan from a JSON file, a term file, or a literal term."""
    text = _read_source(source)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            return cospan_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON ({exc})") from None
    return interpret(parse(text, sig), sig)


def _load_rules(args, sig: Signature) -> list[RewriteRule]:
    if args.ruleset in RULESETS:
        return RULESETS[args.ruleset][0]()
    doc = load_json(args.ruleset)
    if isinstance(doc, dict) and "rules" in doc:
        if "signature" in doc:
            sig = signature_from_json(doc["signature"])
        doc = doc["rules"]
    if isinstance(doc, dict):
        doc = [doc]
    if not isinstance(doc, list):
        raise FormatError("a rule file holds a rule, a list of rules, or {\"rules\": [...]}")
    return [rule_from_json(r, sig) for r in doc]


# -- commands ----------------------------------------------------------


def cmd_check(args) -> int:
    sig = _signature(args)
    c = _load_cospan(args.source, sig)
    problems = validate(c.carrier, sig)
    mono = is_monogamous(c)
    acyclic = is_acyclic(c.carrier)
    print(f"nodes: {len(c.carrier.nodes)}  hyperedges: {len(c.carrier.edges)}  "
          f"type: {len(c.inputs)} -> {len(c.outputs)}")
    print(f"signature: {'ok' if not problems else 'violations'}")
    for p in problems:
        print(f"  {p}")
    if mono.ok:
        print("monogamous: yes")
    else:
        print("monogamous: no")
        if not mono.legs_mono:
            print("  leg not mono")
        for v, side, want, got in mono.offenders:
            print(f"  node {v}: {side}-degree {got}, expected {want}")
    print(f"acyclic: {'yes' if acyclic else 'no'}")
    if mono.ok and acyclic:
        print("MA: yes")
        return EXIT_OK
    reason = "leg not mono" if not mono.legs_mono else ("degree" if not mono.ok else "cycle")
    print(f"MA: no ({reason})")
    return EXIT_FAIL


def _write_trace(trace: Trace, args) -> None:
    out = _out_dir(args)
    path = Path(args.output) if args.output else out / "trace.json"
    write_atomic(path, dumps(trace_to_json(trace)))
    print(f"trace: {path}")
    if args.dot:
        for i, state in enumerate(trace.states()):
            write_atomic(path.parent / f"{path.stem}.step{i:03d}.dot", to_dot(state, f"step {i}"))


def cmd_rewrite(args) -> int:
    sig = _signature(args)
    host = _load_cospan(args.source, sig)
    rules = _load_rules(args, sig)
    if args.mode == "convex" and not is_ma(host):
        raise InputError("convex mode needs a monogamous acyclic host (try --mode frobenius)")
    if args.normalize:
        trace = normalize(host, rules, strategy=args.strategy, max_steps=args.max_steps,
                          mode=args.mode, seed=args.seed)
        for i, s in enumerate(trace.steps):
            print(f"{i + 1}: {s.rule.name}")
        status = "normal form" if trace.normal_form else "step budget exhausted"
        print(f"{len(trace.steps)} step(s), {status}")
        _write_trace(trace, args)
        return EXIT_OK
    steps = admissible_steps(host, rules, args.mode)
    if args.step is None:
        for i, (m, comp) in enumerate(steps):
            edges = ",".join(str(m.hom.edge_map[e]) for e in sorted(m.hom.edge_map))
            print(f"[{i}] {m.rule.name} edges=({edges})")
        if not steps:
            print("no admissible rewrite")
            return EXIT_NO_MATCH
        return EXIT_OK
    if not 0 <= args.step < len(steps):
        print(f"no admissible rewrite with index {args.step} ({len(steps)} available)")
        return EXIT_NO_MATCH
    m, comp = steps[args.step]
    result = apply_step(m, comp, args.mode)
    trace = Trace(host, [RewriteStep(m.rule, m, comp, result)], mode=args.mode,
                  strategy="manual", seed=None)
    trace.normal_form = not admissible_steps(result, rules, args.mode)
    print(f"applied {m.rule.name}")
    _write_trace(trace, args)
    return EXIT_OK


def cmd_measure(args) -> int:
    doc = load_json(args.trace)
    try:
        states, rules = trace_states(doc)
    except (TypeError, KeyError, AttributeError) as exc:
        raise FormatError(f"malformed trace ({exc})") from None
    report = check_decrease(states, rules, MEASURES[args.measure])
    if args.format == "json":
        print(dumps({"measure": report.measure, "components": list(report.components),
                     "passed": report.passed,
                     "steps": [{"rule": s.rule, "before": list(s.before), "after": list(s.after),
                                "decreased": s.decreased, "equal": list(s.equal)}
                               for s in report.steps]}), end="")
    else:
        print(report.table())
    return EXIT_OK if report.passed else EXIT_FAIL


def _demo_fs(out: Path) -> bool:
    d = non_confluence_demo()
    for name, c in (("G", d.G), ("H1", d.H1), ("H2", d.H2)):
        write_atomic(out / f"{name}.json", dumps(cospan_to_json(c)))
        write_atomic(out / f"{name}.dot", to_dot(c, name))
    cert = {"first_steps": d.first_steps, "H1_isomorphic_to_H2": not d.distinct,
            "H1_normal_form": d.h1_normal, "H2_normal_form": d.h2_normal,
            "FS4_in_H1": {"mono": d.fs4_mono_in_h1, "convex": d.fs4_convex_in_h1},
            "FS3_in_H2": {"mono": d.fs3_mono_in_h2, "convex": d.fs3_convex_in_h2},
            "H1_term": str(extract_term(d.H1)), "H2_term": str(extract_term(d.H2))}
    write_atomic(out / "certificate.json", dumps(cert))
    print(f"first steps: {', '.join(d.first_steps)}")
    print(f"H1 normal: {d.h1_normal}  H2 normal: {d.h2_normal}  H1 ~ H2: {not d.distinct}")
    print(f"H1 = {cert['H1_term']}")
    print(f"H2 = {cert['H2_term']}")
    return d.ok


def _demo_boundary(out: Path) -> bool:
    b = fixtures.boundary_uniqueness()
    write_atomic(out / "host.json", dumps(cospan_to_json(b.host)))
    for k, (m, cs) in enumerate(zip(b.matches, b.complements)):
        flags = [c.boundary for c in cs]
        print(f"match {k}: node {m.hom.node_map}, {len(cs)} complements, {sum(flags)} boundary")
    for k, r in enumerate(b.results):
        write_atomic(out / f"result{k}.json", dumps(cospan_to_json(r)))
    print(f"non-boundary results monogamous: {any(is_ma(r) for r in b.bad_results)}")
    return b.ok


def _demo_convexity(out: Path) -> bool:
    c = fixtures.convexity_blocking()
    write_atomic(out / "host.json", dumps(cospan_to_json(c.host)))
    write_atomic(out / "frobenius_result.json", dumps(cospan_to_json(c.frobenius_result)))
    print(f"mono matches: {len(c.mono_matches)}  convex matches: {len(c.convex_matches)}")
    print(f"frobenius step applied; convex step rejected: {c.convex_rejected}")
    return c.ok


DEMOS = {"fs-nonconfluence": _demo_fs, "boundary-uniqueness": _demo_boundary,
         "convexity-blocking": _demo_convexity}


def cmd_demo(args) -> int:
    out = _out_dir(args) / args.name
    ok = DEMOS[args.name](out)
    print(f"{args.name}: {'ok' if ok else 'REGRESSION'}  (files in {out})")
    return EXIT_OK if ok else EXIT_REGRESSION


def cmd_extract(args) -> int:
    sig = _signature(args)
    text = _read_source(args.source)
    if text.lstrip().startswith("{"):
        c = _load_cospan(args.source, sig)
        print(extract_term(c))
    else:
        print(dumps(cospan_to_json(interpret(parse(text, sig), sig))), end="")
    return EXIT_OK


# -- argument parsing --------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sdrewrite", description="String-diagram rewriting on hypergraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, ruleset: bool = False):
        sp.add_argument("--sig", help="signature JSON file (default: bialgebra signature)")
        sp.add_argument("--out", help=f"output directory (default: ${OUTPUT_ENV} or .)")
        if ruleset:
            sp.add_argument("--ruleset", default="ba", help="fs, ba, or a rule JSON file")

    sp = sub.add_parser("check", help="report monogamy, acyclicity and signature conformance")
    sp.add_argument("source", help="cospan JSON, term file, or literal term")
    common(sp, ruleset=True)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("rewrite", help="list, apply or normalize rewrites")
    sp.add_argument("source")
    common(sp, ruleset=True)
    sp.add_argument("--mode", choices=MODES, default="convex")
    sp.add_argument("--strategy", choices=STRATEGIES, default="rule-order")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-steps", type=int, default=10_000)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--step", type=int, nargs="?", const=None, default=None, metavar="INDEX",
                   help="without INDEX list admissible steps, with INDEX apply that one")
    g.add_argument("--normalize", action="store_true")
    sp.add_argument("--output", help="trace file (default: OUT/trace.json)")
    sp.add_argument("--dot", action="store_true", help="also write one DOT file per state")
    sp.set_defaults(func=cmd_rewrite)

    sp = sub.add_parser("measure", help="check a trace against a termination measure")
    sp.add_argument("trace")
    sp.add_argument("--measure", choices=sorted(MEASURES), default="ba")
    sp.add_argument("--format", choices=("table", "json"), default="table")
    sp.set_defaults(func=cmd_measure)

    sp = sub.add_parser("demo", help="run a scripted scenario and check its outcome")
    sp.add_argument("name", choices=sorted(DEMOS))
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_demo)

    sp = sub.add_parser("extract", help="convert between terms and cospan JSON")
    sp.add_argument("source")
    common(sp, ruleset=True)
    sp.set_defaults(func=cmd_extract)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, TermError, GraphError, InputError, RewriteError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
