"""Σ-terms for symmetric monoidal syntax and their hypergraph semantics.

Concrete syntax (whitespace-insensitive)::

    expr  := par (';' par)*
    par   := atom ('+' atom)*
    atom  := '(' expr ')' | 'id' '(' word ')' | 'sym' '(' word ',' word ')' | NAME
    word  := INT | NAME*

``+`` binds tighter than ``;``.  A word given as an integer ``n`` stands for
``n`` copies of the default colour; otherwise it lists colours separated by
spaces.  ``id()`` and ``id(0)`` are the empty identity.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .cospan import (
    Cospan,
    compose,
    generator_cospan,
    identity,
    is_ma,
    is_monogamous,
    symmetry,
    tensor,
)
from .hypergraph import (
    DEFAULT_COLOUR,
    GraphError,
    Selection,
    Signature,
    is_acyclic,
    is_convex,
    coreachable_edges,
)


class TermError(ValueError):
    """Syntax or typing error; ``pos`` is the character offset when known."""

    def __init__(self, msg: str, pos: Optional[int] = None) -> None:
        super().__init__(msg if pos is None else f"{msg} (at offset {pos})")
        self.pos = pos


class NotMonogamousAcyclic(GraphError):
    """The cospan is outside the image of the term interpretation."""


@dataclass(frozen=True)
class Gen:
    label: str

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Id:
    word: tuple[str, ...]

    def __str__(self) -> str:
        return f"id({_word_str(self.word)})"


@dataclass(frozen=True)
class Sym:
    left: tuple[str, ...]
    right: tuple[str, ...]

    def __str__(self) -> str:
        return f"sym({_word_str(self.left)}, {_word_str(self.right)})"


@dataclass(frozen=True)
class Seq:
    first: "Term"
    second: "Term"

    def __str__(self) -> str:
        return f"{self.first} ; {self.second}"


@dataclass(frozen=True)
class Par:
    top: "Term"
    bottom: "Term"

    def __str__(self) -> str:
        def wrap(t: Term) -> str:
            return f"({t})" if isinstance(t, Seq) else str(t)
        return f"{wrap(self.top)} + {wrap(self.bottom)}"


Term = Union[Gen, Id, Sym, Seq, Par]


def _word_str(word: Sequence[str]) -> str:
    if all(c == DEFAULT_COLOUR for c in word):
        return str(len(word))
    return " ".join(word)


def seq(*terms: Term) -> Term:
    out = terms[0]
    for t in terms[1:]:
        out = Seq(out, t)
    return out


def par(*terms: Term) -> Term:
    out = terms[0]
    for t in terms[1:]:
        out = Par(out, t)
    return out


def typeof(term: Term, sig: Signature) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """``(domain, codomain)`` words of a term; raises :class:`TermError` if ill-typed."""
    if isinstance(term, Gen):
        if term.label not in sig:
            raise TermError(f"unknown generator {term.label!r}")
        return sig.arity(term.label), sig.coarity(term.label)
    if isinstance(term, Id):
        return term.word, term.word
    if isinstance(term, Sym):
        return term.left + term.right, term.right + term.left
    if isinstance(term, Seq):
        d1, c1 = typeof(term.first, sig)
        d2, c2 = typeof(term.second, sig)
        if c1 != d2:
            raise TermError(f"type mismatch in ';': {_word_str(c1) or 'ε'} vs {_word_str(d2) or 'ε'}"
                            f" in {term}")
        return d1, c2
    if isinstance(term, Par):
        d1, c1 = typeof(term.top, sig)
        d2, c2 = typeof(term.bottom, sig)
        return d1 + d2, c1 + c2
    raise TypeError(f"not a term: {term!r}")


def size(term: Term) -> int:
    """Number of generator occurrences."""
    if isinstance(term, Gen):
        return 1
    if isinstance(term, (Seq, Par)):
        a, b = (term.first, term.second) if isinstance(term, Seq) else (term.top, term.bottom)
        return size(a) + size(b)
    return 0


# -- parsing -----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[^\W\d]\w*)|(?P<op>[();+,]))", re.UNICODE)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise TermError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value: Optional[str] = None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise TermError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> Term:
        t = self.par()
        while self.peek()[1] == ";":
            self.take()
            t = Seq(t, self.par())
        return t

    def par(self) -> Term:
        t = self.atom()
        while self.peek()[1] == "+":
            self.take()
            t = Par(t, self.atom())
        return t

    def atom(self) -> Term:
        kind, val, pos = self.peek()
        if val == "(":
            self.take()
            t = self.expr()
            self.take(")")
            return t
        if kind != "name":
            raise TermError(f"unexpected {val or 'end of input'!r}", pos)
        self.take()
        if val == "id" and self.peek()[1] == "(":
            self.take("(")
            w = self.word()
            self.take(")")
            return Id(w)
        if val == "sym" and self.peek()[1] == "(":
            self.take("(")
            w1 = self.word()
            self.take(",")
            w2 = self.word()
            self.take(")")
            return Sym(w1, w2)
        return Gen(val)

    def word(self) -> tuple[str, ...]:
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            return (DEFAULT_COLOUR,) * int(val)
        out = []
        while self.peek()[0] == "name":
            out.append(self.take()[1])
        return tuple(out)


def parse(text: str, sig: Optional[Signature] = None) -> Term:
    """Parse a term; with ``sig`` it is also type-checked."""
    p = _Parser(text)
    t = p.expr()
    kind, val, pos = p.peek()
    if kind != "eof":
        raise TermError(f"trailing input {val!r}", pos)
    if sig is not None:
        typeof(t, sig)
    return t


# -- semantics ---------------------------------------------------------


def interpret(term: Term, sig: Signature) -> Cospan:
    """The monogamous acyclic cospan denoted by ``term``."""
    typeof(term, sig)
    return _interpret(term, sig).compact()


def _interpret(term: Term, sig: Signature) -> Cospan:
    if isinstance(term, Gen):
        return generator_cospan(sig, term.label)
    if isinstance(term, Id):
        return identity(term.word)
    if isinstance(term, Sym):
        return symmetry(term.left, term.right)
    if isinstance(term, Seq):
        return compose(_interpret(term.first, sig), _interpret(term.second, sig))
    return tensor(_interpret(term.top, sig), _interpret(term.bottom, sig))


@dataclass(frozen=True)
class Decomposition:
    """``g ≅ c1 ; (id(k) + l) ; c2`` for a convex piece ``l`` of ``g``."""

    c1: Cospan
    k: tuple[str, ...]
    l: Cospan
    c2: Cospan

    def reassemble(self) -> Cospan:
        return compose(compose(self.c1, tensor(identity(self.k), self.l)), self.c2)


def decompose(g: Cospan, sel: Selection,
              i_order: Optional[Sequence[int]] = None,
              j_order: Optional[Sequence[int]] = None) -> Decomposition:
    """Factor ``g`` around the convex sub-hypergraph ``sel``.

    The interfaces of the factored piece are ordered by ``i_order`` /
    ``j_order`` when given, else by node id; the pass-through wires ``k``
    are ordered by node id.  Nodes keep their ids from ``g`` in every part.
    """
    G = g.carrier
    if not is_ma(g):
        raise NotMonogamousAcyclic("decompose needs a monogamous acyclic cospan")
    if not sel.is_closed(G):
        raise GraphError("selection is not closed")
    if not is_convex(G, sel):
        raise GraphError("selection is not convex")

    into_l = {h for v in sel.nodes for h, _ in G.in_edges(v)}
    c1_edges = coreachable_edges(G, into_l) - sel.edges
    c2_edges = set(G.edges) - c1_edges - sel.edges

    def nodes_of(edges):
        return {v for e in edges for v in G.edges[e].sources + G.edges[e].targets}

    c1_nodes = set(g.inputs) | nodes_of(c1_edges)
    covered = c1_nodes | set(sel.nodes)
    c2_nodes = set(g.outputs) | nodes_of(c2_edges) | (set(G.nodes) - covered)

    i = c1_nodes & sel.nodes
    j = c2_nodes & sel.nodes
    k = sorted((c1_nodes & c2_nodes) - sel.nodes)
    i_list = list(i_order) if i_order is not None else sorted(i)
    j_list = list(j_order) if j_order is not None else sorted(j)
    if set(i_list) != i or len(i_list) != len(i) or set(j_list) != j or len(j_list) != len(j):
        raise GraphError("interface orders do not match the factored boundary")

    c1 = Cospan(G.restrict(c1_nodes, c1_edges), g.inputs, tuple(k + i_list))
    l = Cospan(G.restrict(sel.nodes, sel.edges), tuple(i_list), tuple(j_list))
    c2 = Cospan(G.restrict(c2_nodes, c2_edges), tuple(k + j_list), g.outputs)
    return Decomposition(c1, tuple(G.nodes[v] for v in k), l, c2)


def permutation_term(word: Sequence[str], perm: Sequence[int]) -> Term:
    """A term of Id/Sym sending input position ``perm[q]`` to output ``q``.

    Built from adjacent transpositions in bubble-sort order.
    """
    n = len(word)
    slot = {p: q for q, p in enumerate(perm)}
    state = list(range(n))  # input position currently at each slot
    layers: list[Term] = []
    changed = True
    while changed:
        changed = False
        for t in range(n - 1):
            if slot[state[t]] > slot[state[t + 1]]:
                pieces: list[Term] = []
                if t:
                    pieces.append(Id(tuple(word[s] for s in state[:t])))
                pieces.append(Sym((word[state[t]],), (word[state[t + 1]],)))
                if t + 2 < n:
                    pieces.append(Id(tuple(word[s] for s in state[t + 2:])))
                layers.append(par(*pieces))
                state[t], state[t + 1] = state[t + 1], state[t]
                changed = True
    return seq(*layers) if layers else Id(tuple(word))


def extract_term(g: Cospan) -> Term:
    """A term whose interpretation is isomorphic to ``g``.

    Peels off the source-most hyperedge with the smallest id at each step.
    Raises :class:`NotMonogamousAcyclic` when no term exists.
    """
    rep = is_monogamous(g)
    if not rep.legs_mono:
        raise NotMonogamousAcyclic("not monogamous: interface leg is not mono")
    if rep.offenders:
        v, kind, want, got = rep.offenders[0]
        raise NotMonogamousAcyclic(f"not monogamous: node {v} has {kind}-degree {got}, expected {want}")
    if not is_acyclic(g.carrier):
        raise NotMonogamousAcyclic("not acyclic")
    return _extract(g)


def _extract(g: Cospan) -> Term:
    G = g.carrier
    if not G.edges:
        pos = {v: p for p, v in enumerate(g.inputs)}
        return permutation_term(g.dom, [pos[v] for v in g.outputs])
    e = min(h for h in G.edges if not any(G.in_edges(v) for v in G.edges[h].sources))
    ed = G.edges[e]
    d = decompose(g, Selection.of_edges(G, [e]), ed.sources, ed.targets)
    head = _extract(d.c1)
    mid = Gen(ed.label) if not d.k else Par(Id(d.k), Gen(ed.label))
    tail = _extract(d.c2)
    return _trim(Seq(Seq(head, mid), tail))


def _trim(t: Term) -> Term:
    # drop identity factors of sequential composites
    if isinstance(t, Seq):
        a, b = _trim(t.first), _trim(t.second)
        if isinstance(a, Id):
            return b
        if isinstance(b, Id):
            return a
        return Seq(a, b)
    return t


# -- random terms ------------------------------------------------------


def random_term(sig: Signature, rng: random.Random, max_gens: int = 6,
                width: Optional[Sequence[str]] = None, labels: Optional[Sequence[str]] = None,
                max_width: int = 5) -> Term:
    """A random well-typed term with at most ``max_gens`` generators.

    Built layer by layer: an optional random wire shuffle, then one
    generator acting on a contiguous block of wires spelling its arity.
    """
    labels = sorted(labels if labels is not None else sig.operations)
    if width is None:
        width = tuple(rng.choice(sig.colours) for _ in range(rng.randint(1, 3)))
    word = list(width)
    layers: list[Term] = []
    for _ in range(rng.randint(0, max_gens)):
        options = [o for o in labels
                   if len(word) - len(sig.arity(o)) + len(sig.coarity(o)) <= max_width]
        rng.shuffle(options)
        for o in options:
            ar = list(sig.arity(o))
            perm = list(range(len(word)))
            if rng.random() < 0.5:
                rng.shuffle(perm)
            shuffled = [word[p] for p in perm]
            starts = [s for s in range(len(shuffled) - len(ar) + 1)
                      if shuffled[s:s + len(ar)] == ar]
            if not starts:
                continue
            s = rng.choice(starts)
            if perm != sorted(perm):
                layers.append(permutation_term(word, perm))
            pieces: list[Term] = []
            if s:
                pieces.append(Id(tuple(shuffled[:s])))
            pieces.append(Gen(o))
            if s + len(ar) < len(shuffled):
                pieces.append(Id(tuple(shuffled[s + len(ar):])))
            layers.append(par(*pieces))
            word = shuffled[:s] + list(sig.coarity(o)) + shuffled[s + len(ar):]
            break
        else:
            break
    if rng.random() < 0.3 and len(word) > 1:
        perm = list(range(len(word)))
        rng.shuffle(perm)
        layers.append(permutation_term(word, perm))
    return seq(*layers) if layers else Id(tuple(width))
