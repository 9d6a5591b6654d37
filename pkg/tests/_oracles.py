"""Slow, definition-level reference implementations used to cross-check the library.

Nothing here reuses the library's path, convexity, gluing or
factorisation code; only the plain data classes and ``interpret``.
"""
from __future__ import annotations

import itertools
import random

from sdrewrite.cospan import Cospan
from sdrewrite.hypergraph import Edge, Hypergraph, Signature
from sdrewrite.terms import Gen, Id, Par, Seq, Sym, Term, interpret


# -- paths -------------------------------------------------------------


def _follows(g: Hypergraph, h: int, h2: int) -> bool:
    return any(v in g.edges[h2].sources for v in g.edges[h].targets)


def edge_paths(g: Hypergraph, first=None, max_len=None):
    """All edge sequences with consecutive successors and no repeated edge."""
    max_len = max_len or len(g.edges)
    starts = [first] if first is not None else list(g.edges)
    stack = [[h] for h in starts]
    while stack:
        p = stack.pop()
        yield p
        if len(p) < max_len:
            for h2 in g.edges:
                if h2 not in p and _follows(g, p[-1], h2):
                    stack.append(p + [h2])


def _starts_at(g, p, start):
    kind, x = start
    if kind == "edge":
        return p[0] == x
    return x in g.edges[p[0]].sources


def _ends_at(g, p, end):
    kind, x = end
    if kind == "edge":
        return p[-1] == x
    return x in g.edges[p[-1]].targets


def brute_has_path(g: Hypergraph, start, end) -> bool:
    return any(_starts_at(g, p, start) and _ends_at(g, p, end) for p in edge_paths(g))


def brute_is_acyclic(g: Hypergraph) -> bool:
    return not any(brute_has_path(g, ("node", v), ("node", v)) for v in g.nodes)


def brute_is_convex(g: Hypergraph, nodes, edges) -> bool:
    for p in edge_paths(g):
        src = [v for v in g.edges[p[0]].sources if v in nodes]
        tgt = [v for v in g.edges[p[-1]].targets if v in nodes]
        if src and tgt and not all(h in edges for h in p):
            return False
    return True


def node_paths(g: Hypergraph, h: int):
    """Paths alternating hyperedges and joining nodes, starting with ``h``."""
    out = [[h]]
    for pos, v in enumerate(g.edges[h].targets):
        for h2, e2 in g.edges.items():
            for q, w in enumerate(e2.sources):
                if w == v:
                    out.extend([h, (pos, q)] + rest for rest in node_paths(g, h2))
    return out


def brute_u_paths(c: Cospan) -> int:
    g = c.carrier
    total = len(set(c.inputs) & set(c.outputs))
    for h in g.edges:
        starts = (g.edges[h].label == "eta") + sum(v in c.inputs for v in g.edges[h].sources)
        for p in node_paths(g, h):
            last = g.edges[p[-1]]
            ends = (last.label == "epsilon") + sum(v in c.outputs for v in last.targets)
            total += starts * ends
    return total


def brute_m_paths(g: Hypergraph) -> int:
    return sum(1 for h in g.edges if g.edges[h].label == "mu"
               for p in node_paths(g, h) if g.edges[p[-1]].label == "delta")


def brute_d_metric(g: Hypergraph) -> int:
    return sum(1 for m in g.edges if g.edges[m].label == "mu"
               for d in g.edges if g.edges[d].label == "delta"
               if not brute_has_path(g, ("edge", m), ("edge", d)))


# -- isomorphism -------------------------------------------------------


def brute_isomorphic(a: Cospan, b: Cospan) -> bool:
    """Try every label-respecting bijection of hyperedges, derive the node map."""
    ga, gb = a.carrier, b.carrier
    if len(ga.nodes) != len(gb.nodes) or sorted(ga.labels()) != sorted(gb.labels()):
        return False
    if len(a.inputs) != len(b.inputs) or len(a.outputs) != len(b.outputs):
        return False
    labels = sorted(set(ga.labels()))
    ea = [e for lab in labels for e in ga.edges if ga.edges[e].label == lab]
    choices = [itertools.permutations([e for e in gb.edges if gb.edges[e].label == lab]) for lab in labels]
    for combo in itertools.product(*(list(c) for c in choices)):
        perm = [e for block in combo for e in block]
        nm: dict[int, int] = {}
        ok = True
        pairs = list(zip(a.inputs + a.outputs, b.inputs + b.outputs))
        for x, y in zip(ea, perm):
            pairs += list(zip(ga.edges[x].sources + ga.edges[x].targets,
                              gb.edges[y].sources + gb.edges[y].targets))
        for u, v in pairs:
            if nm.setdefault(u, v) != v:
                ok = False
                break
        if not ok:
            continue
        rest_a = [v for v in ga.nodes if v not in nm]
        rest_b = [v for v in gb.nodes if v not in set(nm.values())]
        if len(set(nm.values())) != len(nm) or sorted(ga.nodes[v] for v in rest_a) != sorted(gb.nodes[v] for v in rest_b):
            continue
        if all(ga.nodes[u] == gb.nodes[v] for u, v in nm.items()):
            return True
    return False


# -- gluing ------------------------------------------------------------


def glue(a: Hypergraph, b: Hypergraph, pairs) -> tuple[Hypergraph, dict, dict]:
    """Pushout of a <- pairs -> b by naive class merging."""
    cls = {("a", v): {("a", v)} for v in a.nodes}
    cls.update({("b", v): {("b", v)} for v in b.nodes})
    for x, y in pairs:
        s, t = cls[("a", x)], cls[("b", y)]
        if s is not t:
            s |= t
            for k in t:
                cls[k] = s
    reps = {}
    for k, s in cls.items():
        reps[k] = min(s)
    ids = {r: i for i, r in enumerate(sorted(set(reps.values())))}
    col = {}
    for (side, v), r in reps.items():
        col[ids[r]] = (a if side == "a" else b).nodes[v]
    am = {v: ids[reps[("a", v)]] for v in a.nodes}
    bm = {v: ids[reps[("b", v)]] for v in b.nodes}
    edges = {}
    for side, g, m in (("a", a, am), ("b", b, bm)):
        for e, ed in g.edges.items():
            edges[len(edges)] = Edge(ed.label, tuple(m[v] for v in ed.sources), tuple(m[v] for v in ed.targets))
    return Hypergraph(col, edges), am, bm


def complement_glues_back(match, comp) -> bool:
    """Gluing the complement with the left-hand side gives the host back."""
    rule, host = match.rule, match.host
    g, cm, lm = glue(comp.context, rule.lhs, list(zip(comp.rule_interface, rule.lhs_interface)))
    n = len(host.inputs)
    iface = [cm[v] for v in comp.host_interface]
    return brute_isomorphic(Cospan(g, tuple(iface[:n]), tuple(iface[n:])), host)


# -- random graphs -----------------------------------------------------

SMALL_SIG = Signature.one_sorted({"a": (1, 1), "b": (2, 1), "c": (1, 2), "d": (0, 1), "e": (1, 0)})


def random_graph(rng: random.Random, max_edges: int = 6, max_nodes: int = 6) -> Hypergraph:
    n = rng.randint(1, max_nodes)
    nodes = {v: "•" for v in range(n)}
    edges = {}
    for e in range(rng.randint(0, max_edges)):
        label = rng.choice(sorted(SMALL_SIG.operations))
        ar, co = len(SMALL_SIG.arity(label)), len(SMALL_SIG.coarity(label))
        edges[e] = Edge(label, tuple(rng.randrange(n) for _ in range(ar)),
                        tuple(rng.randrange(n) for _ in range(co)))
    return Hypergraph(nodes, edges)


# -- sequentialisation and syntactic redexes -----------------------------


def _shuffle(word, frontier, target) -> Term:
    """Permutation term moving ``frontier`` into the order ``target``.

    Selection order: repeatedly swap the wanted wire leftwards one slot at
    a time using ``sym`` on single wires.
    """
    cur = list(frontier)
    colours = dict(zip(frontier, word))
    layers = []
    for q, want in enumerate(target):
        at = cur.index(want)
        while at > q:
            left = tuple(colours[v] for v in cur[:at - 1])
            right = tuple(colours[v] for v in cur[at + 1:])
            parts = ([Id(left)] if left else []) + [Sym((colours[cur[at - 1]],), (colours[cur[at]],))] \
                + ([Id(right)] if right else [])
            t = parts[0]
            for p in parts[1:]:
                t = Par(t, p)
            layers.append(t)
            cur[at - 1], cur[at] = cur[at], cur[at - 1]
            at -= 1
    out: Term = Id(tuple(colours[v] for v in frontier))
    for t in layers:
        out = Seq(out, t)
    return out


def _topo(g: Hypergraph, edges) -> list[int]:
    order, left = [], set(edges)
    while left:
        ready = sorted(e for e in left
                       if not any(_follows(g, h, e) for h in left if h != e))
        order.append(ready[0])
        left.remove(ready[0])
    return order


def _apply_edge(term, frontier, g, e):
    ed = g.edges[e]
    others = [v for v in frontier if v not in ed.sources]
    target = others + list(ed.sources)
    term = Seq(term, _shuffle([g.nodes[v] for v in frontier], frontier, target))
    rest = tuple(g.nodes[v] for v in others)
    term = Seq(term, Par(Id(rest), Gen(ed.label)) if rest else Gen(ed.label))
    return term, others + list(ed.targets)


def syntactic_results(host: Cospan, lhs: Cospan, rhs: Term, sig: Signature) -> list[Cospan]:
    """Every ``c1 ; (id + r) ; c2`` with ``host = c1 ; (id + l) ; c2``.

    The left-hand side must have no isolated nodes (true for every rule of
    the two built-in theories).
    """
    g, L = host.carrier, lhs.carrier
    need = sorted(L.labels())
    out = []
    for S in itertools.combinations(sorted(g.edges), len(L.edges)):
        if sorted(g.edges[e].label for e in S) != need:
            continue
        S = set(S)
        # P: every edge outside S with a path into S; must be closed under predecessors
        P = {e for e in g.edges if e not in S
             and any(brute_has_path(g, ("edge", e), ("edge", s)) for s in S)}
        if any(_follows(g, h, p) for p in P for h in g.edges if h not in P):
            continue
        Q = set(g.edges) - P - S
        for perm in itertools.permutations(sorted(S)):
            nm: dict[int, int] = {}
            ok = True
            for x, y in zip(sorted(L.edges), perm):
                a, b = L.edges[x], g.edges[y]
                if a.label != b.label:
                    ok = False
                    break
                for u, v in zip(a.sources + a.targets, b.sources + b.targets):
                    if nm.setdefault(u, v) != v:
                        ok = False
            if not ok or len(set(nm.values())) != len(nm) or len(nm) != len(L.nodes):
                continue
            i_list = [nm[v] for v in lhs.inputs]
            j_list = [nm[v] for v in lhs.outputs]
            term: Term = Id(host.dom)
            frontier = list(host.inputs)
            for e in _topo(g, P):
                term, frontier = _apply_edge(term, frontier, g, e)
            k = [v for v in frontier if v not in i_list]
            if len(k) + len(i_list) != len(frontier):
                continue
            term = Seq(term, _shuffle([g.nodes[v] for v in frontier], frontier, k + i_list))
            kw = tuple(g.nodes[v] for v in k)
            term = Seq(term, Par(Id(kw), rhs) if kw else rhs)
            frontier = k + j_list
            for e in _topo(g, Q):
                term, frontier = _apply_edge(term, frontier, g, e)
            if sorted(frontier) != sorted(host.outputs):
                continue
            term = Seq(term, _shuffle([g.nodes[v] for v in frontier], frontier, list(host.outputs)))
            out.append(interpret(term, sig))
    return out


def iso_classes(cospans, iso) -> list:
    reps = []
    for c in cospans:
        if not any(iso(c, r) for r in reps):
            reps.append(c)
    return reps


def same_classes(xs, ys, iso) -> bool:
    a, b = iso_classes(xs, iso), iso_classes(ys, iso)
    return len(a) == len(b) and all(any(iso(x, y) for y in b) for x in a)
