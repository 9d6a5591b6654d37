"""Hypergraphs with discrete interfaces and their PROP structure."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .hypergraph import (
    DEFAULT_COLOUR,
    Edge,
    GraphError,
    Homomorphism,
    Hypergraph,
    Signature,
    disjoint_union,
    in_degree,
    is_acyclic,
    isomorphic,
    out_degree,
)

Word = tuple[str, ...]


class InterfaceError(GraphError):
    """Raised when interface words do not line up."""


@dataclass(frozen=True)
class Cospan:
    """A discrete cospan ``n -> carrier <- m`` given by its leg images.

    ``inputs[k]`` is the node that the k-th point of the left interface is
    sent to, likewise ``outputs``.  Repeated entries encode non-mono legs.
    """

    carrier: Hypergraph
    inputs: tuple[int, ...] = ()
    outputs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        for v in self.inputs + self.outputs:
            if v not in self.carrier.nodes:
                raise GraphError(f"interface refers to unknown node {v}")

    @property
    def dom(self) -> Word:
        return tuple(self.carrier.nodes[v] for v in self.inputs)

    @property
    def cod(self) -> Word:
        return tuple(self.carrier.nodes[v] for v in self.outputs)

    def compact(self) -> Cospan:
        """Same cospan with nodes and edges renumbered from zero."""
        g = self.carrier
        nm = {v: i for i, v in enumerate(g.nodes)}
        em = {e: i for i, e in enumerate(g.edges)}
        return Cospan(g.relabel(nm, em), tuple(nm[v] for v in self.inputs),
                      tuple(nm[v] for v in self.outputs))

    def __repr__(self) -> str:
        return f"Cospan({list(self.inputs)} -> {self.carrier!r} <- {list(self.outputs)})"


class _UnionFind:
    def __init__(self, items: Iterable[int]) -> None:
        self.parent = {x: x for x in items}

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller id wins so quotients are deterministic
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def quotient(graph: Hypergraph, pairs: Iterable[tuple[int, int]]) -> tuple[Hypergraph, dict[int, int]]:
    """Glue nodes along ``pairs``; hyperedges are never merged.

    Returns the quotient graph, renumbered from zero, and the node map.
    """
    uf = _UnionFind(graph.nodes)
    for a, b in pairs:
        if graph.nodes[a] != graph.nodes[b]:
            raise InterfaceError(
                f"cannot glue node {a} ({graph.nodes[a]}) to node {b} ({graph.nodes[b]})")
        uf.union(a, b)
    roots = sorted({uf.find(v) for v in graph.nodes})
    new = {r: i for i, r in enumerate(roots)}
    nmap = {v: new[uf.find(v)] for v in graph.nodes}
    nodes = {new[r]: graph.nodes[r] for r in roots}
    edges = {e: Edge(ed.label, tuple(nmap[v] for v in ed.sources), tuple(nmap[v] for v in ed.targets))
             for e, ed in graph.edges.items()}
    return Hypergraph(nodes, edges), nmap


# -- PROP structure ----------------------------------------------------


def identity(word: Sequence[str] = (DEFAULT_COLOUR,)) -> Cospan:
    word = tuple(word)
    nodes = dict(enumerate(word))
    ids = tuple(range(len(word)))
    return Cospan(Hypergraph(nodes), ids, ids)


def symmetry(w1: Sequence[str] = (DEFAULT_COLOUR,), w2: Sequence[str] = (DEFAULT_COLOUR,)) -> Cospan:
    w1, w2 = tuple(w1), tuple(w2)
    nodes = dict(enumerate(w1 + w2))
    a = tuple(range(len(w1)))
    b = tuple(range(len(w1), len(w1) + len(w2)))
    return Cospan(Hypergraph(nodes), a + b, b + a)


def generator_cospan(sig: Signature, label: str) -> Cospan:
    """The cospan of a single hyperedge whose ports are exactly the interface."""
    ar, coar = sig.arity(label), sig.coarity(label)
    nodes = dict(enumerate(ar + coar))
    src = tuple(range(len(ar)))
    tgt = tuple(range(len(ar), len(ar) + len(coar)))
    return Cospan(Hypergraph(nodes, {0: Edge(label, src, tgt)}), src, tgt)


FROBENIUS_LABELS = {"mu": "mu", "μ": "mu", "delta": "delta", "δ": "delta",
                    "eta": "eta", "η": "eta", "epsilon": "epsilon", "ε": "epsilon"}


def frobenius_generator(label: str, colour: str = DEFAULT_COLOUR) -> Cospan:
    """One-node discrete cospans interpreting the Frobenius generators."""
    try:
        name = FROBENIUS_LABELS[label]
    except KeyError:
        raise GraphError(f"not a Frobenius generator: {label!r}") from None
    g = Hypergraph({0: colour})
    legs = {"mu": ((0, 0), (0,)), "delta": ((0,), (0, 0)),
            "eta": ((), (0,)), "epsilon": ((0,), ())}[name]
    return Cospan(g, *legs)


def compose(a: Cospan, b: Cospan) -> Cospan:
    """Sequential composite ``a ; b`` by pushout over the shared interface."""
    if a.cod != b.dom:
        raise InterfaceError(f"cannot compose: codomain {list(a.cod)} != domain {list(b.dom)}")
    g, na, nb = disjoint_union(a.carrier, b.carrier)
    q, nmap = quotient(g, [(na[x], nb[y]) for x, y in zip(a.outputs, b.inputs)])
    return Cospan(q, tuple(nmap[na[v]] for v in a.inputs), tuple(nmap[nb[v]] for v in b.outputs))


def tensor(a: Cospan, b: Cospan) -> Cospan:
    g, na, nb = disjoint_union(a.carrier, b.carrier)
    return Cospan(g, tuple(na[v] for v in a.inputs) + tuple(nb[v] for v in b.inputs),
                  tuple(na[v] for v in a.outputs) + tuple(nb[v] for v in b.outputs))


def compose_all(parts: Iterable[Cospan]) -> Cospan:
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = compose(out, p)
    return out


def tensor_all(parts: Iterable[Cospan]) -> Cospan:
    out = Cospan(Hypergraph())
    for p in parts:
        out = tensor(out, p)
    return out


def rewire(c: Cospan) -> Cospan:
    """Move every input to the output side: ``0 -> G <- n + m``."""
    return Cospan(c.carrier, (), c.inputs + c.outputs)


def cospan_isomorphism(a: Cospan, b: Cospan) -> Optional[Homomorphism]:
    """Carrier isomorphism commuting with both legs, if any."""
    if len(a.inputs) != len(b.inputs) or len(a.outputs) != len(b.outputs):
        return None
    pins: dict[int, int] = {}
    for x, y in zip(a.inputs + a.outputs, b.inputs + b.outputs):
        if pins.setdefault(x, y) != y:
            return None
    return isomorphic(a.carrier, b.carrier, fixed=pins)


def cospans_isomorphic(a: Cospan, b: Cospan) -> bool:
    return cospan_isomorphism(a, b) is not None


# -- monogamy and acyclicity ------------------------------------------


@dataclass(frozen=True)
class MonogamyReport:
    legs_mono: bool
    # (node, "in" | "out", expected degree, actual degree)
    offenders: tuple[tuple[int, str, int, int], ...] = field(default=())

    @property
    def ok(self) -> bool:
        return self.legs_mono and not self.offenders

    def __bool__(self) -> bool:
        return self.ok


def is_monogamous(c: Cospan) -> MonogamyReport:
    legs_mono = len(set(c.inputs)) == len(c.inputs) and len(set(c.outputs)) == len(c.outputs)
    ins, outs = set(c.inputs), set(c.outputs)
    offenders = []
    for v in c.carrier.nodes:
        want = 0 if v in ins else 1
        got = in_degree(c.carrier, v)
        if got != want:
            offenders.append((v, "in", want, got))
        want = 0 if v in outs else 1
        got = out_degree(c.carrier, v)
        if got != want:
            offenders.append((v, "out", want, got))
    return MonogamyReport(legs_mono, tuple(offenders))


def is_ma(c: Cospan) -> bool:
    """Monogamous and acyclic: exactly the cospans that denote terms."""
    return is_monogamous(c).ok and is_acyclic(c.carrier)
