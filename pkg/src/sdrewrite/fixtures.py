"""Small reconstructed scenarios exercising the side conditions of convex rewriting.

These are minimal instances built to show a particular behaviour; they
are labelled ``reconstruction`` wherever they are exported.
"""
from __future__ import annotations

from dataclasses import dataclass

from .cospan import Cospan, compose, frobenius_generator, is_ma
from .dpo import (
    Complement,
    Match,
    RewriteError,
    RewriteRule,
    apply_step,
    boundary_complement,
    enumerate_pushout_complements,
    find_matches,
    is_left_connected,
)
from .hypergraph import Edge, Hypergraph, Selection, Signature
from .terms import interpret, parse

# -- a chain e1 ; (e3 + id) ; e2 -----------------------------------------

CHAIN_SIGNATURE = Signature.one_sorted({"e1": (1, 2), "e2": (2, 1), "e3": (1, 1), "e4": (1, 1)})
CHAIN_HOST = "e1 ; (e3 + id(1)) ; e2"
# the U-shaped left-hand side: e1's outputs leave on the far side, e2's inputs enter from it
BLOCKED_LHS = "(e1 + id(1)) ; (id(1) + sym(1, 1)) ; (id(1) + e2)"
BLOCKED_RHS = "e4 + e4"


def chain_host() -> Cospan:
    return interpret(parse(CHAIN_HOST, CHAIN_SIGNATURE), CHAIN_SIGNATURE)


def blocked_rule() -> RewriteRule:
    sig = CHAIN_SIGNATURE
    return RewriteRule.from_terms("blocked", parse(BLOCKED_LHS, sig), parse(BLOCKED_RHS, sig), sig)


@dataclass
class ConvexityBlocking:
    host: Cospan
    rule: RewriteRule
    mono_matches: list[Match]
    convex_matches: list[Match]
    frobenius_result: Cospan
    frobenius_result_ma: bool
    convex_rejected: bool
    left_connected: bool

    @property
    def ok(self) -> bool:
        return (len(self.mono_matches) >= 1 and not self.convex_matches
                and self.convex_rejected and not self.left_connected)


def convexity_blocking() -> ConvexityBlocking:
    """A mono match whose image is not convex: only plain DPOI may use it."""
    host, rule = chain_host(), blocked_rule()
    mono = find_matches(rule, host, "any-mono")
    convex = find_matches(rule, host, "convex")
    if not mono:
        raise RuntimeError("reconstruction lost its match")
    m = mono[0]
    comp = enumerate_pushout_complements(m)[0]
    result = apply_step(m, comp, "frobenius")
    try:
        apply_step(m, comp, "convex")
        rejected = False
    except RewriteError:
        rejected = True
    return ConvexityBlocking(host, rule, mono, convex, result, is_ma(result), rejected,
                             is_left_connected([rule])[0])


def label_selection(host: Cospan, labels=("e1", "e2")) -> Selection:
    g = host.carrier
    return Selection.of_edges(g, [e for e, ed in g.edges.items() if ed.label in labels])


# -- rewired identity in a1 ; a3 ; a2 ----------------------------------

LOOP_SIGNATURE = Signature.one_sorted({"a1": (0, 1), "a2": (1, 0), "a3": (1, 1)})
LOOP_HOST = "a1 ; a3 ; a2"


def loop_host() -> Cospan:
    return interpret(parse(LOOP_HOST, LOOP_SIGNATURE), LOOP_SIGNATURE)


def identity_rule() -> RewriteRule:
    sig = LOOP_SIGNATURE
    return RewriteRule.from_terms("insert-a3", parse("id(1)", sig), parse("a3", sig), sig)


@dataclass
class BoundaryUniqueness:
    host: Cospan
    rule: RewriteRule
    matches: list[Match]
    complements: list[list[Complement]]
    boundary: list[Complement | None]
    results: list[Cospan]
    bad_results: list[Cospan]

    @property
    def ok(self) -> bool:
        return (bool(self.matches)
                and all(len(cs) >= 2 for cs in self.complements)
                and all(sum(c.boundary for c in cs) == 1 for cs in self.complements)
                and all(b is not None for b in self.boundary)
                and all(is_ma(r) for r in self.results)
                and all(not is_ma(r) for r in self.bad_results))


def boundary_uniqueness() -> BoundaryUniqueness:
    """Several complements per match, exactly one of them boundary.

    Rewriting with a non-boundary complement glues the wires around the
    match the wrong way round, so the result stops being monogamous.
    """
    host, rule = loop_host(), identity_rule()
    matches = find_matches(rule, host, "convex")
    comps = [enumerate_pushout_complements(m) for m in matches]
    bcs = [boundary_complement(m) for m in matches]
    results, bad = [], []
    for m, cs, b in zip(matches, comps, bcs):
        if b is not None:
            results.append(apply_step(m, b, "convex"))
        bad.extend(apply_step(m, c, "frobenius") for c in cs if not c.boundary)
    return BoundaryUniqueness(host, rule, matches, comps, bcs, results, bad)


def expected_insertion() -> Cospan:
    return interpret(parse("a1 ; a3 ; a3 ; a2", LOOP_SIGNATURE), LOOP_SIGNATURE)


# -- a cyclic composite ------------------------------------------------


def cyclic_composition() -> tuple[Cospan, Cospan, Cospan]:
    """Two acyclic cospans whose composite has a loop.

    ``a`` has an edge u -> v with inputs [u] and outputs [v, u]; ``b``
    merges its two inputs into its output node, which identifies v with u.
    """
    g = Hypergraph({0: "•", 1: "•"}, {0: Edge("f", (0,), (1,))})
    a = Cospan(g, (0,), (1, 0))
    b = frobenius_generator("mu")
    return a, b, compose(a, b)

