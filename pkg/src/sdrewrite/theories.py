"""Frobenius semi-algebras and bialgebras as convex rewriting systems.

Both theories are one-sorted with generators ``mu : 2 -> 1`` and
``delta : 1 -> 2``; bialgebras add ``eta : 0 -> 1`` and ``epsilon : 1 -> 0``.
The module also provides the graph functionals used to show termination
and a lexicographic measure checker for traces.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

from .cospan import Cospan, cospans_isomorphic
from .dpo import (
    RewriteRule,
    Trace,
    admissible_steps,
    apply_step,
    find_matches,
)
from .hypergraph import Hypergraph, Signature, reachable_edges, topological_edges
from .terms import interpret, parse, random_term

FS_SIGNATURE = Signature.one_sorted({"mu": (2, 1), "delta": (1, 2)})
BA_SIGNATURE = Signature.one_sorted({"mu": (2, 1), "eta": (0, 1), "delta": (1, 2), "epsilon": (1, 0)})

_FS = [
    ("FS1", "(mu + id(1)) ; mu", "(id(1) + mu) ; mu"),
    ("FS2", "delta ; (delta + id(1))", "delta ; (id(1) + delta)"),
    ("FS3", "(delta + id(1)) ; (id(1) + mu)", "mu ; delta"),
    ("FS4", "(id(1) + delta) ; (mu + id(1))", "mu ; delta"),
]

_BA = [
    ("BA1", "(mu + id(1)) ; mu", "(id(1) + mu) ; mu"),
    ("BA2", "delta ; (delta + id(1))", "delta ; (id(1) + delta)"),
    ("BA3", "(eta + id(1)) ; mu", "id(1)"),
    ("BA4", "(id(1) + eta) ; mu", "id(1)"),
    ("BA5", "delta ; (epsilon + id(1))", "id(1)"),
    ("BA6", "delta ; (id(1) + epsilon)", "id(1)"),
    ("BA7", "eta ; delta", "eta + eta"),
    ("BA8", "mu ; epsilon", "epsilon + epsilon"),
    ("BA9", "mu ; delta", "(delta + delta) ; (id(1) + sym(1, 1) + id(1)) ; (mu + mu)"),
    ("BA10", "eta ; epsilon", "id(0)"),
]


def _ruleset(table, sig: Signature) -> list[RewriteRule]:
    return [RewriteRule.from_terms(name, parse(l, sig), parse(r, sig), sig) for name, l, r in table]


@lru_cache(maxsize=None)
def _fs() -> tuple[RewriteRule, ...]:
    return tuple(_ruleset(_FS, FS_SIGNATURE))


@lru_cache(maxsize=None)
def _ba() -> tuple[RewriteRule, ...]:
    return tuple(_ruleset(_BA, BA_SIGNATURE))


def fs_rules() -> list[RewriteRule]:
    """FS1..FS4, with FS3 and FS4 oriented towards ``mu ; delta``."""
    return list(_fs())


def ba_rules() -> list[RewriteRule]:
    return list(_ba())


RULESETS = {"fs": (fs_rules, FS_SIGNATURE), "ba": (ba_rules, BA_SIGNATURE)}


def rule_source(name: str) -> Optional[tuple[str, str]]:
    """The term text of a built-in rule, by name."""
    for rname, l, r in _FS + _BA:
        if rname == name:
            return l, r
    return None


# -- graph functionals -------------------------------------------------


def _edges(g: Hypergraph, label: str) -> list[int]:
    return [e for e, ed in g.edges.items() if ed.label == label]


def _carrier(x) -> Hypergraph:
    return x.carrier if isinstance(x, Cospan) else x


def count_label(label: str) -> Callable[[Cospan], int]:
    def count(c) -> int:
        return len(_edges(_carrier(c), label))
    count.__name__ = f"#{label}"
    return count


def l_weight(c) -> int:
    """Sum of tree sizes: mu-trees above each mu's first input, delta-trees below each delta's first output.

    A mu-tree is the maximal set of mu hyperedges feeding a node through
    mu hyperedges only; its size is the number of hyperedges in it.
    """
    g = _carrier(c)
    memo: dict[tuple[str, int], int] = {}

    def producer(v: int) -> Optional[int]:
        inc = g.in_edges(v)
        return inc[0][0] if len(inc) == 1 else None

    def consumer(v: int) -> Optional[int]:
        inc = g.out_edges(v)
        return inc[0][0] if len(inc) == 1 else None

    def tree(kind: str, e: Optional[int], guard: frozenset) -> int:
        if e is None or e in guard or g.edges[e].label != kind:
            return 0
        if (kind, e) not in memo:
            ed = g.edges[e]
            ports = ed.sources if kind == "mu" else ed.targets
            step = producer if kind == "mu" else consumer
            memo[(kind, e)] = 1 + sum(tree(kind, step(v), guard | {e}) for v in ports)
        return memo[(kind, e)]

    total = 0
    for e in _edges(g, "mu"):
        p = producer(g.edges[e].sources[0])
        total += tree("mu", p, frozenset({e}))
    for e in _edges(g, "delta"):
        q = consumer(g.edges[e].targets[0])
        total += tree("delta", q, frozenset({e}))
    return total


def d_metric(c) -> int:
    """Number of (mu, delta) pairs with no path from the mu to the delta."""
    g = _carrier(c)
    deltas = set(_edges(g, "delta"))
    total = 0
    for m in _edges(g, "mu"):
        reach = reachable_edges(g, [m])
        total += len(deltas - reach)
    return total


def _paths_to(g: Hypergraph, weight: Callable[[int], int]) -> dict[int, int]:
    """For each hyperedge e, the sum of weight(last) over paths starting with e.

    Paths alternate hyperedges and the nodes joining them, so two wires
    between the same pair of hyperedges give two paths.
    """
    out: dict[int, int] = {}
    for e in reversed(topological_edges(g)):
        succ = [h for v in g.edges[e].targets for h, _ in g.out_edges(v)]
        out[e] = weight(e) + sum(out[h] for h in succ)
    return out


# a node that is both an input and an output is one U-path on its own
BARE_WIRE_U_PATHS = 1


def u_paths(c: Cospan) -> int:
    """Paths from an input or an eta to an output or an epsilon, counted per endpoint pair."""
    g = c.carrier
    ins, outs = set(c.inputs), set(c.outputs)

    def ends(e: int) -> int:
        ed = g.edges[e]
        return (ed.label == "epsilon") + sum(v in outs for v in ed.targets)

    def starts(e: int) -> int:
        ed = g.edges[e]
        return (ed.label == "eta") + sum(v in ins for v in ed.sources)

    f = _paths_to(g, ends)
    return sum(starts(e) * f[e] for e in g.edges) + BARE_WIRE_U_PATHS * len(ins & outs)


def m_paths(c) -> int:
    """Paths from a mu hyperedge to a delta hyperedge."""
    g = _carrier(c)
    f = _paths_to(g, lambda e: g.edges[e].label == "delta")
    return sum(f[e] for e in _edges(g, "mu"))


# -- lexicographic measures --------------------------------------------


@dataclass(frozen=True)
class Measure:
    name: str
    components: tuple[tuple[str, Callable[[Cospan], int]], ...]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.components)

    def value(self, c: Cospan) -> tuple[int, ...]:
        return tuple(f(c) for _, f in self.components)


def lex_measure(name: str, *components: tuple[str, Callable[[Cospan], int]]) -> Measure:
    return Measure(name, tuple(components))


FS_MEASURE = lex_measure("fs", ("D", d_metric), ("L", l_weight))
BA_MEASURE = lex_measure("ba", ("U", u_paths), ("M", m_paths), ("#mu", count_label("mu")),
                         ("#delta", count_label("delta")), ("L", l_weight))
MEASURES = {"fs": FS_MEASURE, "ba": BA_MEASURE}


@dataclass(frozen=True)
class StepRecord:
    rule: str
    before: tuple[int, ...]
    after: tuple[int, ...]
    decreased: Optional[str]
    equal: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.decreased is not None


@dataclass
class OrderingReport:
    measure: str
    components: tuple[str, ...]
    steps: list[StepRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.ok for s in self.steps)

    def table(self) -> str:
        head = ["step", "rule"] + [f"{n} before" for n in self.components] + \
               [f"{n} after" for n in self.components] + ["decreased"]
        rows = [head]
        for i, s in enumerate(self.steps):
            rows.append([str(i + 1), s.rule] + [str(x) for x in s.before + s.after]
                        + [s.decreased or "FAIL"])
        widths = [max(len(r[k]) for r in rows) for k in range(len(head))]
        lines = ["  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip() for r in rows]
        lines.append(f"{self.measure}: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def compare(measure: Measure, before: tuple[int, ...], after: tuple[int, ...]) -> StepRecord:
    equal = []
    for name, b, a in zip(measure.names, before, after):
        if a < b:
            return StepRecord("", before, after, name, tuple(equal))
        if a > b:
            break
        equal.append(name)
    return StepRecord("", before, after, None, tuple(equal))


def check_decrease(states: Sequence[Cospan], rules: Sequence[str], measure: Measure) -> OrderingReport:
    """Check strict lexicographic decrease between consecutive states."""
    report = OrderingReport(measure.name, measure.names)
    values = [measure.value(s) for s in states]
    for rule, b, a in zip(rules, values, values[1:]):
        rec = compare(measure, b, a)
        report.steps.append(StepRecord(rule, b, a, rec.decreased, rec.equal))
    return report


def check_trace(trace: Trace, measure: Measure) -> OrderingReport:
    return check_decrease(trace.states(), [s.rule.name for s in trace.steps], measure)


# the component each rule is expected to decrease
FS_EXPECTED = {"FS1": "L", "FS2": "L", "FS3": "D", "FS4": "D"}
BA_EXPECTED = {"BA1": "L", "BA2": "L", "BA3": "U", "BA4": "U", "BA5": "U", "BA6": "U",
               "BA7": "#delta", "BA8": "#mu", "BA9": "M", "BA10": "U"}


# -- random hosts ------------------------------------------------------


def random_host(sig: Signature, rng: random.Random, max_gens: int = 12, max_width: int = 5) -> Cospan:
    """A random monogamous acyclic host, as the denotation of a random term."""
    return interpret(random_term(sig, rng, max_gens=max_gens, max_width=max_width), sig)


# -- non-confluence of FS -----------------------------------------------


COUNTEREXAMPLE = "(delta + delta) ; (id(1) + sym(1, 1) + id(1)) ; (mu + mu)"


def fs_counterexample() -> Cospan:
    return interpret(parse(COUNTEREXAMPLE, FS_SIGNATURE), FS_SIGNATURE)


@dataclass
class NonConfluence:
    G: Cospan
    H1: Cospan
    H2: Cospan
    first_steps: list[str]
    distinct: bool
    h1_normal: bool
    h2_normal: bool
    fs4_mono_in_h1: int
    fs4_convex_in_h1: int
    fs3_mono_in_h2: int
    fs3_convex_in_h2: int

    @property
    def ok(self) -> bool:
        return (self.first_steps == ["FS3", "FS4"] and self.distinct and self.h1_normal
                and self.h2_normal and self.fs4_mono_in_h1 > 0 and self.fs4_convex_in_h1 == 0
                and self.fs3_mono_in_h2 > 0 and self.fs3_convex_in_h2 == 0)


def non_confluence_demo() -> NonConfluence:
    """Apply FS3 and FS4 to the same graph and show the results never meet."""
    rules = fs_rules()
    by_name = {r.name: r for r in rules}
    G = fs_counterexample()
    steps = admissible_steps(G, rules)
    results = {}
    for m, c in steps:
        results.setdefault(m.rule.name, apply_step(m, c))
    H1, H2 = results.get("FS3"), results.get("FS4")
    if H1 is None or H2 is None:
        raise RuntimeError("counterexample graph lost one of its redexes")
    return NonConfluence(
        G, H1, H2,
        first_steps=[m.rule.name for m, _ in steps],
        distinct=not cospans_isomorphic(H1, H2),
        h1_normal=not admissible_steps(H1, rules),
        h2_normal=not admissible_steps(H2, rules),
        fs4_mono_in_h1=len(find_matches(by_name["FS4"], H1, "any-mono")),
        fs4_convex_in_h1=len(find_matches(by_name["FS4"], H1, "convex")),
        fs3_mono_in_h2=len(find_matches(by_name["FS3"], H2, "any-mono")),
        fs3_convex_in_h2=len(find_matches(by_name["FS3"], H2, "convex")),
    )
