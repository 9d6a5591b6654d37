"""Graphviz export.

Nodes are drawn as small dots and hyperedges as record boxes whose left
ports are the sources and right ports the targets, numbered in order.
"""
from __future__ import annotations

from .cospan import Cospan


def _esc(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"').replace("{", "\\{").replace("}", "\\}") \
        .replace("|", "\\|").replace("<", "\\<").replace(">", "\\>")


def to_dot(c: Cospan, name: str = "G") -> str:
    g = c.carrier
    lines = [f'digraph "{_esc(name)}" {{', "  rankdir=LR;",
             '  node [shape=point, width=0.08];']
    for v, colour in g.nodes.items():
        lines.append(f'  n{v} [xlabel="{v}:{_esc(colour)}"];')
    for e, ed in g.edges.items():
        ins = "|".join(f"<s{i}> {i}" for i in range(len(ed.sources)))
        outs = "|".join(f"<t{i}> {i}" for i in range(len(ed.targets)))
        label = f"{{{{{ins}}}|{_esc(ed.label)}|{{{outs}}}}}"
        lines.append(f'  e{e} [shape=record, width=0, height=0, label="{label}"];')
        for i, v in enumerate(ed.sources):
            lines.append(f"  n{v} -> e{e}:s{i}:w [arrowhead=none];")
        for i, v in enumerate(ed.targets):
            lines.append(f"  e{e}:t{i}:e -> n{v} [arrowhead=none];")
    for k, v in enumerate(c.inputs):
        lines.append(f'  in{k} [shape=plaintext, label="in {k}"];')
        lines.append(f"  in{k} -> n{v} [style=dotted, arrowhead=none];")
    for k, v in enumerate(c.outputs):
        lines.append(f'  out{k} [shape=plaintext, label="out {k}"];')
        lines.append(f"  n{v} -> out{k} [style=dotted, arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"
