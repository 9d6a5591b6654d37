"""JSON formats for signatures, hypergraphs, cospans, rules and traces.

Hypergraph::

    {"colours": [str], "nodes": [{"id": int, "colour": str}],
     "edges": [{"id": int, "label": str, "sources": [int], "targets": [int]}]}

A cospan adds ``"inputs": [int]`` and ``"outputs": [int]``.  A signature is
``{"colours": [str], "operations": [{"label", "arity", "coarity"}]}``.  A
rule is ``{"name", "lhs", "rhs", "interface": {"inputs": [[l, r]],
"outputs": [[l, r]]}}`` where ``lhs``/``rhs`` are graphs, or term strings
in which case the interface is derived and may be omitted.
"""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Optional

from .cospan import Cospan
from .dpo import RewriteRule, Trace
from .hypergraph import Edge, GraphError, Hypergraph, Signature
from .terms import parse


class FormatError(ValueError):
    """A document does not follow the expected JSON layout."""


def _need(doc: Any, key: str, kind=None):
    if not isinstance(doc, dict) or key not in doc:
        raise FormatError(f"missing field {key!r}")
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        raise FormatError(f"field {key!r} has the wrong type")
    return val


def signature_to_json(sig: Signature) -> dict:
    return {"colours": list(sig.colours),
            "operations": [{"label": k, "arity": list(a), "coarity": list(c)}
                           for k, (a, c) in sorted(sig.operations.items())]}


def signature_from_json(doc: dict) -> Signature:
    try:
        ops = {_need(o, "label", str): (_need(o, "arity", list), _need(o, "coarity", list))
               for o in _need(doc, "operations", list)}
        return Signature(tuple(_need(doc, "colours", list)), ops)
    except GraphError as exc:
        raise FormatError(str(exc)) from None


def graph_to_json(g: Hypergraph) -> dict:
    return {"colours": sorted(set(g.nodes.values())),
            "nodes": [{"id": v, "colour": c} for v, c in g.nodes.items()],
            "edges": [{"id": e, "label": ed.label, "sources": list(ed.sources), "targets": list(ed.targets)}
                      for e, ed in g.edges.items()]}


def graph_from_json(doc: dict) -> Hypergraph:
    try:
        nodes = {int(_need(n, "id")): str(_need(n, "colour")) for n in _need(doc, "nodes", list)}
        edges = {int(_need(e, "id")): Edge(str(_need(e, "label")),
                                           tuple(int(v) for v in _need(e, "sources", list)),
                                           tuple(int(v) for v in _need(e, "targets", list)))
                 for e in doc.get("edges", [])}
        return Hypergraph(nodes, edges)
    except (GraphError, TypeError) as exc:
        raise FormatError(str(exc)) from None


def cospan_to_json(c: Cospan) -> dict:
    doc = graph_to_json(c.carrier)
    doc["inputs"] = list(c.inputs)
    doc["outputs"] = list(c.outputs)
    return doc


def cospan_from_json(doc: dict) -> Cospan:
    g = graph_from_json(doc)
    try:
        return Cospan(g, tuple(int(v) for v in doc.get("inputs", [])),
                      tuple(int(v) for v in doc.get("outputs", [])))
    except GraphError as exc:
        raise FormatError(str(exc)) from None


def rule_to_json(rule: RewriteRule) -> dict:
    return {"name": rule.name, "lhs": graph_to_json(rule.lhs), "rhs": graph_to_json(rule.rhs),
            "interface": {"inputs": [list(p) for p in rule.inputs],
                          "outputs": [list(p) for p in rule.outputs]}}


def rule_from_json(doc: dict, sig: Optional[Signature] = None) -> RewriteRule:
    name = str(_need(doc, "name"))
    lhs, rhs = _need(doc, "lhs"), _need(doc, "rhs")
    try:
        if isinstance(lhs, str) and isinstance(rhs, str):
            if sig is None:
                raise FormatError(f"rule {name}: term sides need a signature")
            return RewriteRule.from_terms(name, parse(lhs, sig), parse(rhs, sig), sig)
        iface = _need(doc, "interface", dict)
        return RewriteRule(name, graph_from_json(lhs), graph_from_json(rhs),
                           tuple(tuple(p) for p in iface.get("inputs", [])),
                           tuple(tuple(p) for p in iface.get("outputs", [])))
    except (GraphError, ValueError, TypeError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(str(exc)) from None


def trace_to_json(trace: Trace) -> dict:
    steps = []
    for s in trace.steps:
        h = s.match.hom
        steps.append({
            "rule": s.rule.name,
            "match": {"nodes": [[k, v] for k, v in sorted(h.node_map.items())],
                      "edges": [[k, v] for k, v in sorted(h.edge_map.items())]},
            "result": cospan_to_json(s.result),
        })
    return {"mode": trace.mode, "strategy": trace.strategy, "seed": trace.seed,
            "initial": cospan_to_json(trace.initial), "steps": steps,
            "final": cospan_to_json(trace.final),
            "normal_form": trace.normal_form, "exhausted": trace.exhausted}


def trace_states(doc: dict) -> tuple[list[Cospan], list[str]]:
    """The states and rule names recorded in a trace document."""
    states = [cospan_from_json(_need(doc, "initial", dict))]
    rules = []
    for s in _need(doc, "steps", list):
        rules.append(str(_need(s, "rule")))
        states.append(cospan_from_json(_need(s, "result", dict)))
    return states, rules


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_json(path: str | os.PathLike) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
