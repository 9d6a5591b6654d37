"""Convex double-pushout rewriting with interfaces.

Hosts are cospans ``n -> G <- m``; for rewriting only the concatenated
interface ``n + m`` matters, so the host is handled in rewired form and
split back into inputs and outputs afterwards.

Two modes are supported:

``"convex"``
    matches must be mono with a convex image, and the pushout complement
    must be the boundary complement.  Hosts must be monogamous acyclic and
    results are again monogamous acyclic.
``"frobenius"``
    plain DPOI: any mono match and any pushout complement.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Sequence

from .cospan import Cospan, is_ma, is_monogamous, quotient
from .hypergraph import (
    Edge,
    GraphError,
    Homomorphism,
    Hypergraph,
    Selection,
    Signature,
    disjoint_union,
    embeddings,
    has_path,
    is_convex,
    topological_edges,
)
from .terms import Term, interpret, typeof

MODES = ("convex", "frobenius")
STRATEGIES = ("rule-order", "leftmost", "random")


class RewriteError(ValueError):
    """A rewrite was requested whose preconditions do not hold."""


@dataclass(frozen=True)
class RewriteRule:
    """A span ``L <- i + j -> R``.

    ``inputs`` and ``outputs`` pair up the images of the i and j interface
    points in ``lhs`` and ``rhs``.
    """

    name: str
    lhs: Hypergraph
    rhs: Hypergraph
    inputs: tuple[tuple[int, int], ...]
    outputs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "inputs", tuple((int(a), int(b)) for a, b in self.inputs))
        object.__setattr__(self, "outputs", tuple((int(a), int(b)) for a, b in self.outputs))
        for a, b in self.inputs + self.outputs:
            if a not in self.lhs.nodes or b not in self.rhs.nodes:
                raise GraphError(f"rule {self.name}: interface pair ({a}, {b}) refers to unknown node")
            if self.lhs.nodes[a] != self.rhs.nodes[b]:
                raise GraphError(f"rule {self.name}: interface pair ({a}, {b}) changes colour")

    @classmethod
    def from_cospans(cls, name: str, lhs: Cospan, rhs: Cospan) -> RewriteRule:
        if lhs.dom != rhs.dom or lhs.cod != rhs.cod:
            raise GraphError(f"rule {name}: sides have different types")
        return cls(name, lhs.carrier, rhs.carrier,
                   tuple(zip(lhs.inputs, rhs.inputs)), tuple(zip(lhs.outputs, rhs.outputs)))

    @classmethod
    def from_terms(cls, name: str, lhs: Term, rhs: Term, sig: Signature) -> RewriteRule:
        if typeof(lhs, sig) != typeof(rhs, sig):
            raise GraphError(f"rule {name}: sides have different types")
        return cls.from_cospans(name, interpret(lhs, sig), interpret(rhs, sig))

    @property
    def lhs_interface(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.inputs + self.outputs)

    @property
    def rhs_interface(self) -> tuple[int, ...]:
        return tuple(b for _, b in self.inputs + self.outputs)

    def lhs_cospan(self) -> Cospan:
        return Cospan(self.lhs, tuple(a for a, _ in self.inputs), tuple(a for a, _ in self.outputs))

    def rhs_cospan(self) -> Cospan:
        return Cospan(self.rhs, tuple(b for _, b in self.inputs), tuple(b for _, b in self.outputs))

    def is_left_linear(self) -> bool:
        return len(set(self.lhs_interface)) == len(self.lhs_interface)


@dataclass(frozen=True)
class Match:
    rule: RewriteRule
    host: Cospan
    hom: Homomorphism
    convex: bool
    mono: bool = True

    def key(self) -> tuple:
        return (tuple(self.hom.edge_map[e] for e in sorted(self.hom.edge_map)),
                tuple(self.hom.node_map[v] for v in sorted(self.hom.node_map)))

    def image(self) -> Selection:
        return self.hom.image()


@dataclass(frozen=True)
class Complement:
    """A pushout complement ``i + j -> C <- n + m`` with its map ``C -> G``.

    Context hyperedges keep their host ids; ``to_host`` maps context nodes
    to host nodes.
    """

    context: Hypergraph
    rule_interface: tuple[int, ...]
    host_interface: tuple[int, ...]
    to_host: Mapping[int, int]
    boundary: bool


@dataclass(frozen=True)
class RewriteStep:
    rule: RewriteRule
    match: Match
    complement: Complement
    result: Cospan


@dataclass
class Trace:
    initial: Cospan
    steps: list[RewriteStep] = field(default_factory=list)
    normal_form: bool = False
    exhausted: bool = False
    mode: str = "convex"
    strategy: str = "rule-order"
    seed: Optional[int] = None

    @property
    def final(self) -> Cospan:
        return self.steps[-1].result if self.steps else self.initial

    def states(self) -> list[Cospan]:
        return [self.initial] + [s.result for s in self.steps]


# -- matching -----------------------------------------------------------


def find_matches(rule: RewriteRule, host: Cospan, mode: str = "convex") -> list[Match]:
    """All mono matches of ``rule.lhs`` in the host, in lexicographic edge-map order.

    ``mode`` is ``"convex"`` (only convex images) or ``"any-mono"``.
    """
    if mode not in ("convex", "any-mono"):
        raise ValueError(f"unknown match mode {mode!r}")
    if mode == "convex" and not is_ma(host):
        raise RewriteError("convex matching needs a monogamous acyclic host")
    G = host.carrier
    out = []
    for h in embeddings(rule.lhs, G, injective=True):
        convex = is_convex(G, h.image())
        if mode == "convex" and not convex:
            continue
        out.append(Match(rule, host, h, convex))
    out.sort(key=Match.key)
    return out


# -- pushout complements ------------------------------------------------


def _set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]


def _boundary_ok(rule: RewriteRule, host: Cospan, ctx: Hypergraph,
                 rule_iface: Sequence[int], host_iface: Sequence[int]) -> bool:
    if len(set(rule_iface)) != len(rule_iface):
        return False
    ni, nn = len(rule.inputs), len(host.inputs)
    c1, c2 = rule_iface[:ni], rule_iface[ni:]
    d1, d2 = host_iface[:nn], host_iface[nn:]
    return is_monogamous(Cospan(ctx, tuple(c2) + tuple(d1), tuple(d2) + tuple(c1))).ok


def _context(match: Match, blocks: Sequence[Sequence[int]]):
    """Context skeleton for a grouping of interface points into new nodes."""
    G = match.host.carrier
    f = match.hom
    a = match.rule.lhs_interface
    matched_nodes = set(f.node_map.values())
    matched_edges = set(f.edge_map.values())
    base = G.fresh_node()
    nodes = {v: c for v, c in G.nodes.items() if v not in matched_nodes}
    to_host = {v: v for v in nodes}
    point_node: dict[int, int] = {}
    over: dict[int, list[int]] = {}
    for b, block in enumerate(blocks):
        v = f.node_map[a[block[0]]]
        nodes[base + b] = G.nodes[v]
        to_host[base + b] = v
        over.setdefault(v, []).append(base + b)
        for p in block:
            point_node[p] = base + b
    edges = [e for e in G.edges if e not in matched_edges]
    return nodes, edges, to_host, point_node, over, matched_nodes


def enumerate_pushout_complements(match: Match) -> list[Complement]:
    """Every pushout complement of the match, each flagged boundary or not.

    Brute force: interface points sharing an LHS node may be split into any
    partition, and every context port or host interface point sitting on a
    matched node may attach to any of the split copies.
    """
    rule, host = match.rule, match.host
    G = host.carrier
    a = rule.lhs_interface
    kernel: dict[int, list[int]] = {}
    for p, x in enumerate(a):
        kernel.setdefault(x, []).append(p)
    host_iface = host.inputs + host.outputs
    out = []
    for choice in itertools.product(*(list(_set_partitions(ps)) for ps in kernel.values())):
        blocks = [blk for part in choice for blk in part]
        nodes, edges, to_host, point_node, over, matched = _context(match, blocks)
        # every (edge, side, position) port on a matched node, and host interface points
        slots = []
        for e in edges:
            ed = G.edges[e]
            for side, ports in (("s", ed.sources), ("t", ed.targets)):
                for i, v in enumerate(ports):
                    if v in matched:
                        slots.append((e, side, i, v))
        hslots = [(q, v) for q, v in enumerate(host_iface) if v in matched]
        options = [over.get(v, []) for *_, v in slots] + [over.get(v, []) for _, v in hslots]
        if any(not o for o in options):
            continue
        for pick in itertools.product(*options):
            ports = {(e, side, i): w for (e, side, i, _), w in zip(slots, pick)}
            ctx_edges = {}
            for e in edges:
                ed = G.edges[e]
                ctx_edges[e] = Edge(
                    ed.label,
                    tuple(ports.get((e, "s", i), v) for i, v in enumerate(ed.sources)),
                    tuple(ports.get((e, "t", i), v) for i, v in enumerate(ed.targets)))
            hpick = dict(zip((q for q, _ in hslots), pick[len(slots):]))
            himg = tuple(hpick.get(q, v) for q, v in enumerate(host_iface))
            ctx = Hypergraph(nodes, ctx_edges)
            rimg = tuple(point_node[p] for p in range(len(a)))
            out.append(Complement(ctx, rimg, himg, dict(to_host),
                                  _boundary_ok(rule, host, ctx, rimg, himg)))
    return out


def boundary_complement(match: Match) -> Optional[Complement]:
    """The boundary complement of a mono match, or ``None`` if there is none.

    Built directly: matched hyperedges and matched non-interface nodes are
    removed; a matched node carrying both an LHS input and an LHS output is
    split so that context sources attach to the output copy and context
    targets to the input copy.
    """
    rule, host = match.rule, match.host
    G = host.carrier
    ni = len(rule.inputs)
    a = rule.lhs_interface
    if len(set(a[:ni])) != ni or len(set(a[ni:])) != len(a) - ni:
        # interface legs themselves not mono: fall back to enumeration
        found = [c for c in enumerate_pushout_complements(match) if c.boundary]
        return found[0] if found else None
    blocks = [[p] for p in range(len(a))]
    nodes, edges, to_host, point_node, over, matched = _context(match, blocks)
    in_copy: dict[int, int] = {}
    out_copy: dict[int, int] = {}
    for p in range(len(a)):
        v = to_host[point_node[p]]
        (in_copy if p < ni else out_copy)[v] = point_node[p]

    def attach(v: int, prefer: dict[int, int], other: dict[int, int]) -> Optional[int]:
        if v not in matched:
            return v
        return prefer.get(v, other.get(v))

    ctx_edges = {}
    for e in edges:
        ed = G.edges[e]
        srcs = tuple(attach(v, out_copy, in_copy) for v in ed.sources)
        tgts = tuple(attach(v, in_copy, out_copy) for v in ed.targets)
        if None in srcs or None in tgts:
            return None
        ctx_edges[e] = Edge(ed.label, srcs, tgts)
    nn = len(host.inputs)
    himg = tuple(attach(v, in_copy, out_copy) if q < nn else attach(v, out_copy, in_copy)
                 for q, v in enumerate(host.inputs + host.outputs))
    if None in himg:
        return None
    ctx = Hypergraph(nodes, ctx_edges)
    rimg = tuple(point_node[p] for p in range(len(a)))
    if not _boundary_ok(rule, host, ctx, rimg, himg):
        return None
    return Complement(ctx, rimg, himg, to_host, True)


def deletion_complement(match: Match) -> Optional[Complement]:
    """The unique complement of a left-linear rule: delete the matched part."""
    if not match.rule.is_left_linear():
        raise RewriteError(f"rule {match.rule.name} is not left-linear")
    rule, host = match.rule, match.host
    G = host.carrier
    f = match.hom
    keep = {f.node_map[x] for x in rule.lhs_interface}
    gone_nodes = set(f.node_map.values()) - keep
    gone_edges = set(f.edge_map.values())
    nodes = {v: c for v, c in G.nodes.items() if v not in gone_nodes}
    edges = {e: ed for e, ed in G.edges.items() if e not in gone_edges}
    for ed in edges.values():
        if any(v in gone_nodes for v in ed.sources + ed.targets):
            return None
    himg = host.inputs + host.outputs
    if any(v in gone_nodes for v in himg):
        return None
    ctx = Hypergraph(nodes, edges)
    rimg = tuple(f.node_map[x] for x in rule.lhs_interface)
    return Complement(ctx, rimg, himg, {v: v for v in nodes},
                      _boundary_ok(rule, host, ctx, rimg, himg))


# -- the rewrite step ---------------------------------------------------


def apply_step(match: Match, complement: Complement, mode: str = "convex") -> Cospan:
    """Push out ``C <- i + j -> R`` and carry the host interface along."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "convex":
        if not match.convex:
            raise RewriteError("convex rewriting needs a convex match")
        if not complement.boundary:
            raise RewriteError("convex rewriting needs a boundary complement")
    rule, host = match.rule, match.host
    g, cm, rm = disjoint_union(complement.context, rule.rhs)
    pairs = [(cm[c], rm[r]) for c, r in zip(complement.rule_interface, rule.rhs_interface)]
    q, nmap = quotient(g, pairs)
    iface = [nmap[cm[v]] for v in complement.host_interface]
    n = len(host.inputs)
    return Cospan(q, tuple(iface[:n]), tuple(iface[n:])).compact()


def admissible_steps(host: Cospan, rules: Sequence[RewriteRule], mode: str = "convex",
                     rule: Optional[RewriteRule] = None) -> list[tuple[Match, Complement]]:
    """Every (match, complement) pair usable for a step, in rule then match order."""
    out = []
    for r in ([rule] if rule is not None else rules):
        if mode == "convex":
            for m in find_matches(r, host, "convex"):
                c = boundary_complement(m)
                if c is not None:
                    out.append((m, c))
        else:
            for m in find_matches(r, host, "any-mono"):
                if r.is_left_linear():
                    c = deletion_complement(m)
                    if c is not None:
                        out.append((m, c))
                else:
                    out.extend((m, c) for c in enumerate_pushout_complements(m))
    return out


def _choose(host: Cospan, rules: Sequence[RewriteRule], mode: str, strategy: str,
            rng: random.Random) -> Optional[tuple[Match, Complement]]:
    if strategy == "rule-order":
        for r in rules:
            steps = admissible_steps(host, rules, mode, rule=r)
            if steps:
                return steps[0]
        return None
    steps = admissible_steps(host, rules, mode)
    if not steps:
        return None
    if strategy == "random":
        return steps[rng.randrange(len(steps))]
    # leftmost: earliest matched hyperedge in topological order
    try:
        pos = {e: i for i, e in enumerate(topological_edges(host.carrier))}
    except GraphError:
        pos = {e: e for e in host.carrier.edges}
    rank = {r.name: i for i, r in enumerate(rules)}

    def key(step):
        m = step[0]
        first = min((pos[e] for e in m.hom.edge_map.values()), default=-1)
        return (first, rank[m.rule.name])
    return min(steps, key=key)


def normalize(host: Cospan, rules: Sequence[RewriteRule], strategy: str = "rule-order",
              max_steps: int = 10_000, mode: str = "convex", seed: Optional[int] = 0) -> Trace:
    """Rewrite until no admissible step remains or the step budget runs out."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "convex" and not is_ma(host):
        raise RewriteError("convex rewriting needs a monogamous acyclic host")
    rng = random.Random(seed)
    trace = Trace(host, mode=mode, strategy=strategy, seed=seed)
    cur = host
    while True:
        step = _choose(cur, rules, mode, strategy, rng)
        if step is None:
            trace.normal_form = True
            return trace
        if len(trace.steps) >= max_steps:
            trace.exhausted = True
            return trace
        m, c = step
        cur = apply_step(m, c, mode)
        trace.steps.append(RewriteStep(m.rule, m, c, cur))


def rewrite_all(host: Cospan, rules: Sequence[RewriteRule], mode: str = "convex") -> list[RewriteStep]:
    """Results of every admissible single step."""
    return [RewriteStep(m.rule, m, c, apply_step(m, c, mode))
            for m, c in admissible_steps(host, rules, mode)]


# -- left-connectedness -------------------------------------------------


@dataclass(frozen=True)
class RuleReport:
    left_linear: bool
    lhs_ma: bool
    rhs_ma: bool
    strongly_connected: bool

    @property
    def ok(self) -> bool:
        return self.left_linear and self.lhs_ma and self.rhs_ma and self.strongly_connected


def is_strongly_connected(c: Cospan) -> bool:
    return all(has_path(c.carrier, ("node", x), ("node", y)) for x in c.inputs for y in c.outputs)


def check_rule(rule: RewriteRule) -> RuleReport:
    lhs, rhs = rule.lhs_cospan(), rule.rhs_cospan()
    lhs_ma = is_ma(lhs)
    return RuleReport(rule.is_left_linear(), lhs_ma, is_ma(rhs),
                      lhs_ma and is_strongly_connected(lhs))


def is_left_connected(rules: Sequence[RewriteRule]) -> tuple[bool, dict[str, RuleReport]]:
    reports = {r.name: check_rule(r) for r in rules}
    return all(rep.ok for rep in reports.values()), reports
