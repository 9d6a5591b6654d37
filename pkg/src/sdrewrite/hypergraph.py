"""Directed, Σ-labelled hypergraphs with ordered source/target lists.

Graphs are immutable values.  Nodes and hyperedges carry opaque integer ids
that are only meaningful within one graph; every relation between graphs is
an explicit :class:`Homomorphism`.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Union

DEFAULT_COLOUR = "•"


class GraphError(ValueError):
    """Raised for malformed graphs or references to unknown ids."""


@dataclass(frozen=True)
class Signature:
    """Colours plus operations ``label -> (arity word, coarity word)``."""

    colours: tuple[str, ...]
    operations: Mapping[str, tuple[tuple[str, ...], tuple[str, ...]]]

    def __post_init__(self) -> None:
        cols = tuple(self.colours)
        if len(set(cols)) != len(cols):
            raise GraphError("duplicate colour in signature")
        ops = {}
        for label, (ar, coar) in self.operations.items():
            ar, coar = tuple(ar), tuple(coar)
            for c in ar + coar:
                if c not in cols:
                    raise GraphError(f"operation {label!r} uses unknown colour {c!r}")
            ops[label] = (ar, coar)
        object.__setattr__(self, "colours", cols)
        object.__setattr__(self, "operations", ops)

    @classmethod
    def one_sorted(cls, arities: Mapping[str, tuple[int, int]]) -> Signature:
        """Signature over the single default colour from ``label -> (n, m)``."""
        c = DEFAULT_COLOUR
        return cls((c,), {k: ((c,) * n, (c,) * m) for k, (n, m) in arities.items()})

    def arity(self, label: str) -> tuple[str, ...]:
        return self._op(label)[0]

    def coarity(self, label: str) -> tuple[str, ...]:
        return self._op(label)[1]

    def _op(self, label: str):
        try:
            return self.operations[label]
        except KeyError:
            raise GraphError(f"unknown operation {label!r}") from None

    def __contains__(self, label: object) -> bool:
        return label in self.operations

    def merge(self, other: Signature) -> Signature:
        cols = self.colours + tuple(c for c in other.colours if c not in self.colours)
        ops = dict(self.operations)
        for k, v in other.operations.items():
            if k in ops and ops[k] != v:
                raise GraphError(f"conflicting types for operation {k!r}")
            ops[k] = v
        return Signature(cols, ops)


@dataclass(frozen=True)
class Edge:
    label: str
    sources: tuple[int, ...]
    targets: tuple[int, ...]


@dataclass(frozen=True)
class Hypergraph:
    """A finite hypergraph: ``nodes`` maps id to colour, ``edges`` maps id to :class:`Edge`."""

    nodes: Mapping[int, str] = field(default_factory=dict)
    edges: Mapping[int, Edge] = field(default_factory=dict)

    def __post_init__(self) -> None:
        nodes = {int(v): str(c) for v, c in sorted(self.nodes.items())}
        edges = {}
        for e, ed in sorted(self.edges.items()):
            ed = Edge(ed.label, tuple(ed.sources), tuple(ed.targets))
            for v in ed.sources + ed.targets:
                if v not in nodes:
                    raise GraphError(f"edge {e} refers to unknown node {v}")
            edges[int(e)] = ed
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)

    # -- incidence -------------------------------------------------------

    @cached_property
    def _in_inc(self) -> dict[int, list[tuple[int, int]]]:
        inc: dict[int, list[tuple[int, int]]] = {v: [] for v in self.nodes}
        for e, ed in self.edges.items():
            for i, v in enumerate(ed.targets):
                inc[v].append((e, i))
        return inc

    @cached_property
    def _out_inc(self) -> dict[int, list[tuple[int, int]]]:
        inc: dict[int, list[tuple[int, int]]] = {v: [] for v in self.nodes}
        for e, ed in self.edges.items():
            for i, v in enumerate(ed.sources):
                inc[v].append((e, i))
        return inc

    def in_edges(self, v: int) -> list[tuple[int, int]]:
        """``(edge, position)`` pairs with ``v`` as target."""
        self._check_node(v)
        return self._in_inc[v]

    def out_edges(self, v: int) -> list[tuple[int, int]]:
        """``(edge, position)`` pairs with ``v`` as source."""
        self._check_node(v)
        return self._out_inc[v]

    def _check_node(self, v: int) -> None:
        if v not in self.nodes:
            raise GraphError(f"unknown node {v}")

    def _check_edge(self, e: int) -> None:
        if e not in self.edges:
            raise GraphError(f"unknown hyperedge {e}")

    # -- construction helpers -------------------------------------------

    def fresh_node(self) -> int:
        return max(self.nodes, default=-1) + 1

    def fresh_edge(self) -> int:
        return max(self.edges, default=-1) + 1

    def restrict(self, nodes: Iterable[int], edges: Iterable[int]) -> Hypergraph:
        nodes = set(nodes)
        return Hypergraph({v: self.nodes[v] for v in nodes},
                          {e: self.edges[e] for e in edges})

    def relabel(self, node_map: Mapping[int, int], edge_map: Mapping[int, int]) -> Hypergraph:
        """Rename ids; both maps must be injective and total."""
        return Hypergraph(
            {node_map[v]: c for v, c in self.nodes.items()},
            {edge_map[e]: Edge(ed.label,
                               tuple(node_map[v] for v in ed.sources),
                               tuple(node_map[v] for v in ed.targets))
             for e, ed in self.edges.items()})

    def labels(self) -> list[str]:
        return sorted(ed.label for ed in self.edges.values())

    def __repr__(self) -> str:
        es = ", ".join(f"{e}:{ed.label}{list(ed.sources)}->{list(ed.targets)}"
                       for e, ed in self.edges.items())
        return f"Hypergraph(nodes={dict(self.nodes)}, edges=[{es}])"


def disjoint_union(a: Hypergraph, b: Hypergraph) -> tuple[Hypergraph, dict[int, int], dict[int, int]]:
    """Coproduct of ``a`` and ``b``; returns the graph and the node injections.

    Nodes and edges of ``a`` come first, renumbered from zero.
    """
    na = {v: i for i, v in enumerate(a.nodes)}
    nb = {v: i + len(na) for i, v in enumerate(b.nodes)}
    ea = {e: i for i, e in enumerate(a.edges)}
    eb = {e: i + len(ea) for i, e in enumerate(b.edges)}
    ga, gb = a.relabel(na, ea), b.relabel(nb, eb)
    return Hypergraph({**ga.nodes, **gb.nodes}, {**ga.edges, **gb.edges}), na, nb


# -- validation ---------------------------------------------------------


def validate(graph: Hypergraph, sig: Signature) -> list[str]:
    """Every colour/arity violation of ``graph`` against ``sig``; empty means ok."""
    problems = []
    for v, c in graph.nodes.items():
        if c not in sig.colours:
            problems.append(f"node {v}: unknown colour {c!r}")
    for e, ed in graph.edges.items():
        if ed.label not in sig:
            problems.append(f"edge {e}: unknown label {ed.label!r}")
            continue
        ar, coar = sig.operations[ed.label]
        if len(ed.sources) != len(ar) or len(ed.targets) != len(coar):
            problems.append(
                f"edge {e}: arity mismatch for {ed.label!r}: expected "
                f"{len(ar)}->{len(coar)}, got {len(ed.sources)}->{len(ed.targets)}")
            continue
        got = tuple(graph.nodes[v] for v in ed.sources)
        if got != ar:
            problems.append(f"edge {e}: source colours {list(got)} != arity {list(ar)}")
        got = tuple(graph.nodes[v] for v in ed.targets)
        if got != coar:
            problems.append(f"edge {e}: target colours {list(got)} != coarity {list(coar)}")
    return problems


# -- degrees and adjacency ----------------------------------------------


def in_degree(graph: Hypergraph, v: int) -> int:
    return len(graph.in_edges(v))


def out_degree(graph: Hypergraph, v: int) -> int:
    return len(graph.out_edges(v))


def successors(graph: Hypergraph, e: int) -> set[int]:
    graph._check_edge(e)
    return {h for v in graph.edges[e].targets for h, _ in graph._out_inc[v]}


def predecessors(graph: Hypergraph, e: int) -> set[int]:
    graph._check_edge(e)
    return {h for v in graph.edges[e].sources for h, _ in graph._in_inc[v]}


# -- paths --------------------------------------------------------------


@dataclass(frozen=True)
class Selection:
    """A sub-hypergraph given by node and edge ids of a host graph."""

    nodes: frozenset[int]
    edges: frozenset[int]

    def __init__(self, nodes: Iterable[int] = (), edges: Iterable[int] = ()) -> None:
        object.__setattr__(self, "nodes", frozenset(nodes))
        object.__setattr__(self, "edges", frozenset(edges))

    @classmethod
    def of_edges(cls, graph: Hypergraph, edges: Iterable[int], nodes: Iterable[int] = ()) -> Selection:
        """Smallest closed selection containing ``edges`` and ``nodes``."""
        edges = set(edges)
        ns = set(nodes)
        for e in edges:
            ns.update(graph.edges[e].sources)
            ns.update(graph.edges[e].targets)
        return cls(ns, edges)

    @classmethod
    def whole(cls, graph: Hypergraph) -> Selection:
        return cls(graph.nodes, graph.edges)

    def is_closed(self, graph: Hypergraph) -> bool:
        return all(set(graph.edges[e].sources + graph.edges[e].targets) <= self.nodes
                   for e in self.edges)


Endpoint = Union[int, Selection, tuple]


def _start_edges(graph: Hypergraph, start) -> set[int]:
    kind, x = _endpoint(graph, start)
    if kind == "edge":
        return {x}
    return {h for v in x for h, _ in graph._out_inc[v]}


def _ends_at(graph: Hypergraph, end):
    kind, x = _endpoint(graph, end)
    if kind == "edge":
        return lambda h: h == x
    return lambda h: any(v in x for v in graph.edges[h].targets)


def _endpoint(graph: Hypergraph, p):
    # ("node", v) / ("edge", e) / Selection
    if isinstance(p, Selection):
        for v in p.nodes:
            graph._check_node(v)
        return "nodes", p.nodes
    if isinstance(p, tuple) and len(p) == 2 and p[0] in ("node", "edge"):
        if p[0] == "node":
            graph._check_node(p[1])
            return "nodes", {p[1]}
        graph._check_edge(p[1])
        return "edge", p[1]
    raise GraphError(f"path endpoint must be ('node', id), ('edge', id) or a Selection, got {p!r}")


def reachable_edges(graph: Hypergraph, start: Iterable[int]) -> set[int]:
    """Hyperedges ending some path that starts with one of ``start``."""
    seen = set(start)
    todo = deque(seen)
    while todo:
        h = todo.popleft()
        for v in graph.edges[h].targets:
            for h2, _ in graph._out_inc[v]:
                if h2 not in seen:
                    seen.add(h2)
                    todo.append(h2)
    return seen


def coreachable_edges(graph: Hypergraph, end: Iterable[int]) -> set[int]:
    """Hyperedges starting some path that ends with one of ``end``."""
    seen = set(end)
    todo = deque(seen)
    while todo:
        h = todo.popleft()
        for v in graph.edges[h].sources:
            for h2, _ in graph._in_inc[v]:
                if h2 not in seen:
                    seen.add(h2)
                    todo.append(h2)
    return seen


def has_path(graph: Hypergraph, start: Endpoint, end: Endpoint) -> bool:
    """Whether a non-empty hyperedge path runs from ``start`` to ``end``.

    Endpoints are ``("node", v)``, ``("edge", e)`` or a :class:`Selection`.
    A path starts at a node set when its first hyperedge has one of those
    nodes as a source and ends there when its last hyperedge has one as a
    target; ``[h]`` is a path from ``h`` to ``h``.
    """
    done = _ends_at(graph, end)
    return any(done(h) for h in reachable_edges(graph, _start_edges(graph, start)))


def is_acyclic(graph: Hypergraph) -> bool:
    # Kahn's algorithm on the successor relation between hyperedges.  A
    # hyperedge that feeds itself is a cycle through one of its own nodes.
    indeg = {e: 0 for e in graph.edges}
    succ: dict[int, list[int]] = {}
    for e in graph.edges:
        succ[e] = []
        for v in graph.edges[e].targets:
            for h, _ in graph._out_inc[v]:
                succ[e].append(h)
                indeg[h] += 1
    todo = deque(e for e, d in indeg.items() if d == 0)
    seen = 0
    while todo:
        e = todo.popleft()
        seen += 1
        for h in succ[e]:
            indeg[h] -= 1
            if indeg[h] == 0:
                todo.append(h)
    return seen == len(graph.edges)


def topological_edges(graph: Hypergraph) -> list[int]:
    """Hyperedges in a topological order, smallest available id first."""
    indeg = {e: len(predecessors_multi(graph, e)) for e in graph.edges}
    heap = [e for e, d in indeg.items() if d == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        e = heapq.heappop(heap)
        order.append(e)
        for v in graph.edges[e].targets:
            for h, _ in graph._out_inc[v]:
                indeg[h] -= 1
                if indeg[h] == 0:
                    heapq.heappush(heap, h)
    if len(order) != len(graph.edges):
        raise GraphError("graph is cyclic")
    return order


def predecessors_multi(graph: Hypergraph, e: int) -> list[int]:
    return [h for v in graph.edges[e].sources for h, _ in graph._in_inc[v]]


def is_convex(graph: Hypergraph, sel: Selection) -> bool:
    """Whether every path between two selected nodes stays inside ``sel``."""
    if not sel.is_closed(graph):
        raise GraphError("selection is not closed under edge endpoints")
    # A hyperedge lies on a selected-to-selected path iff it is reachable
    # from a selected node and can reach one.
    start = {h for v in sel.nodes for h, _ in graph._out_inc[v]}
    end = {h for v in sel.nodes for h, _ in graph._in_inc[v]}
    on_path = reachable_edges(graph, start) & coreachable_edges(graph, end)
    return on_path <= sel.edges


# -- homomorphisms and matching ----------------------------------------


@dataclass(frozen=True)
class Homomorphism:
    node_map: Mapping[int, int]
    edge_map: Mapping[int, int]

    def is_injective(self) -> bool:
        return (len(set(self.node_map.values())) == len(self.node_map)
                and len(set(self.edge_map.values())) == len(self.edge_map))

    def inverse(self) -> Homomorphism:
        return Homomorphism({b: a for a, b in self.node_map.items()},
                            {b: a for a, b in self.edge_map.items()})

    def then(self, other: Homomorphism) -> Homomorphism:
        return Homomorphism({a: other.node_map[b] for a, b in self.node_map.items()},
                            {a: other.edge_map[b] for a, b in self.edge_map.items()})

    def image(self) -> Selection:
        return Selection(self.node_map.values(), self.edge_map.values())


def is_homomorphism(h: Homomorphism, src: Hypergraph, dst: Hypergraph) -> bool:
    if set(h.node_map) != set(src.nodes) or set(h.edge_map) != set(src.edges):
        return False
    for v, w in h.node_map.items():
        if w not in dst.nodes or dst.nodes[w] != src.nodes[v]:
            return False
    for e, f in h.edge_map.items():
        if f not in dst.edges:
            return False
        a, b = src.edges[e], dst.edges[f]
        if a.label != b.label:
            return False
        if tuple(h.node_map[v] for v in a.sources) != b.sources:
            return False
        if tuple(h.node_map[v] for v in a.targets) != b.targets:
            return False
    return True


def _edge_order(pattern: Hypergraph) -> list[int]:
    # Connected-first order so later edges are constrained by mapped nodes.
    order: list[int] = []
    placed: set[int] = set()
    known: set[int] = set()
    remaining = sorted(pattern.edges)
    while remaining:
        pick = next((e for e in remaining
                     if known & set(pattern.edges[e].sources + pattern.edges[e].targets)),
                    remaining[0])
        remaining.remove(pick)
        order.append(pick)
        placed.add(pick)
        known.update(pattern.edges[pick].sources + pattern.edges[pick].targets)
    return order


def embeddings(pattern: Hypergraph, host: Hypergraph, *, injective: bool = True,
               fixed: Optional[Mapping[int, int]] = None,
               node_ok=None) -> Iterator[Homomorphism]:
    """All homomorphisms ``pattern -> host`` by backtracking.

    ``fixed`` pins some pattern nodes; ``node_ok(p, h)`` prunes node pairs.
    Results come in a deterministic order driven by sorted host ids.
    """
    fixed = dict(fixed or {})
    order = _edge_order(pattern)
    by_label: dict[str, list[int]] = {}
    for f, fd in host.edges.items():
        by_label.setdefault(fd.label, []).append(f)
    iso_nodes = [v for v in pattern.nodes
                 if not pattern._in_inc[v] and not pattern._out_inc[v] and v not in fixed]

    nmap: dict[int, int] = {}
    used: dict[int, int] = {}
    emap: dict[int, int] = {}
    eused: set[int] = set()

    def bind(p: int, h: int, trail: list[int]) -> bool:
        if p in nmap:
            return nmap[p] == h
        if pattern.nodes[p] != host.nodes[h]:
            return False
        if injective and h in used:
            return False
        if node_ok is not None and not node_ok(p, h):
            return False
        nmap[p] = h
        used[h] = used.get(h, 0) + 1
        trail.append(p)
        return True

    def unbind(trail: list[int]) -> None:
        for p in reversed(trail):
            h = nmap.pop(p)
            used[h] -= 1
            if not used[h]:
                del used[h]

    def candidates(e: int) -> list[int]:
        ed = pattern.edges[e]
        for i, v in enumerate(ed.sources):
            if v in nmap:
                return sorted({f for f, j in host._out_inc[nmap[v]]
                               if j == i and host.edges[f].label == ed.label})
        for i, v in enumerate(ed.targets):
            if v in nmap:
                return sorted({f for f, j in host._in_inc[nmap[v]]
                               if j == i and host.edges[f].label == ed.label})
        return by_label.get(ed.label, [])

    def edges_step(k: int) -> Iterator[Homomorphism]:
        if k == len(order):
            yield from nodes_step(0)
            return
        e = order[k]
        ed = pattern.edges[e]
        for f in candidates(e):
            if injective and f in eused:
                continue
            fd = host.edges[f]
            if len(fd.sources) != len(ed.sources) or len(fd.targets) != len(ed.targets):
                continue
            trail: list[int] = []
            ok = all(bind(p, h, trail) for p, h in
                     zip(ed.sources + ed.targets, fd.sources + fd.targets))
            if ok:
                emap[e] = f
                eused.add(f)
                yield from edges_step(k + 1)
                del emap[e]
                eused.discard(f)
            unbind(trail)

    def nodes_step(k: int) -> Iterator[Homomorphism]:
        if k == len(iso_nodes):
            yield Homomorphism(dict(sorted(nmap.items())), dict(sorted(emap.items())))
            return
        p = iso_nodes[k]
        for h in host.nodes:
            trail: list[int] = []
            if bind(p, h, trail):
                yield from nodes_step(k + 1)
            unbind(trail)

    trail0: list[int] = []
    for p, h in fixed.items():
        if p not in pattern.nodes or h not in host.nodes or not bind(p, h, trail0):
            return
    yield from edges_step(0)


def _node_signature(g: Hypergraph, v: int):
    return (g.nodes[v],
            tuple(sorted((g.edges[e].label, i) for e, i in g._in_inc[v])),
            tuple(sorted((g.edges[e].label, i) for e, i in g._out_inc[v])))


def isomorphic(a: Hypergraph, b: Hypergraph,
               fixed: Optional[Mapping[int, int]] = None) -> Optional[Homomorphism]:
    """An isomorphism ``a -> b`` (extending ``fixed``) or ``None``."""
    if len(a.nodes) != len(b.nodes) or len(a.edges) != len(b.edges):
        return None
    if a.labels() != b.labels():
        return None
    sa = {v: _node_signature(a, v) for v in a.nodes}
    sb = {v: _node_signature(b, v) for v in b.nodes}
    if sorted(map(repr, sa.values())) != sorted(map(repr, sb.values())):
        return None
    return next(embeddings(a, b, injective=True, fixed=fixed,
                           node_ok=lambda p, h: sa[p] == sb[h]), None)
