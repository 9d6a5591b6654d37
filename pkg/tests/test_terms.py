import random

import pytest
from hypothesis import given, settings, strategies as st

from sdrewrite.cospan import Cospan, compose, cospans_isomorphic, frobenius_generator, identity, is_ma
from sdrewrite.fixtures import chain_host
from sdrewrite.hypergraph import Edge, GraphError, Hypergraph, Selection, Signature
from sdrewrite.terms import (
    Gen,
    Id,
    NotMonogamousAcyclic,
    Par,
    Seq,
    Sym,
    TermError,
    decompose,
    extract_term,
    interpret,
    parse,
    permutation_term,
    random_term,
    typeof,
)
from sdrewrite.theories import BA_SIGNATURE, FS_SIGNATURE, fs_counterexample

COLOURED = Signature(("a", "b", "c"), {
    "f": (("a", "b"), ("c",)), "g": (("c",), ("a", "b")), "h": ((), ("b",)),
    "k": (("a",), ()), "m": (("b", "c"), ("c", "a", "b")),
})


def test_parse_precedence():
    t = parse("mu + id(1) ; delta")
    assert isinstance(t, Seq) and isinstance(t.first, Par)


def test_parse_words():
    assert parse("id(2)") == Id(("•", "•"))
    assert parse("id()") == Id(())
    assert parse("id(0)") == Id(())
    assert parse("sym(a b, c)") == Sym(("a", "b"), ("c",))


def test_parse_errors_have_offsets():
    with pytest.raises(TermError) as exc:
        parse("mu ; (delta")
    assert "offset" in str(exc.value)
    with pytest.raises(TermError):
        parse("mu ; delta )")


def test_typecheck():
    assert typeof(parse("(mu + id(1)) ; mu"), FS_SIGNATURE) == (("•",) * 3, ("•",))
    with pytest.raises(TermError):
        typeof(parse("mu ; mu"), FS_SIGNATURE)
    with pytest.raises(TermError):
        parse("nope", FS_SIGNATURE)


def test_printing_round_trips():
    t = parse("(delta + delta) ; (id(1) + sym(1, 1) + id(1)) ; (mu + mu)")
    assert parse(str(t)) == t


def test_extract_identity():
    assert extract_term(identity()) == Id(("•",))


def test_extract_rejects_frobenius_mu():
    with pytest.raises(NotMonogamousAcyclic, match="not monogamous"):
        extract_term(frobenius_generator("mu"))


def test_extract_rejects_cycle():
    g = Hypergraph({0: "•", 1: "•"}, {0: Edge("p", (0,), (1,)), 1: Edge("p", (1,), (0,))})
    with pytest.raises(NotMonogamousAcyclic):
        extract_term(Cospan(g))


def test_decompose_everything():
    c = fs_counterexample()
    d = decompose(c, Selection.whole(c.carrier))
    assert not d.c1.carrier.edges and not d.c2.carrier.edges and d.k == ()


def test_decompose_around_e3():
    c = chain_host()
    g = c.carrier
    e3 = next(e for e, ed in g.edges.items() if ed.label == "e3")
    d = decompose(c, Selection.of_edges(g, [e3]))
    assert len(d.k) == 1
    assert [ed.label for ed in d.c1.carrier.edges.values()] == ["e1"]
    assert [ed.label for ed in d.c2.carrier.edges.values()] == ["e2"]
    assert cospans_isomorphic(d.reassemble(), c)
    assert all(is_ma(x) for x in (d.c1, d.l, d.c2))


def test_decompose_rejects_non_convex():
    c = chain_host()
    g = c.carrier
    sel = Selection.of_edges(g, [e for e, ed in g.edges.items() if ed.label in ("e1", "e2")])
    with pytest.raises(GraphError):
        decompose(c, sel)


def test_permutation_term():
    word = ("a", "b", "c")
    t = permutation_term(word, [2, 0, 1])
    c = interpret(t, COLOURED)
    assert c.dom == word and c.cod == ("c", "a", "b")
    assert all(c.outputs[q] == c.inputs[p] for q, p in enumerate([2, 0, 1]))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 1_000_000))
def test_round_trip_coloured(seed):
    rng = random.Random(seed)
    t = random_term(COLOURED, rng, max_gens=8)
    c = interpret(t, COLOURED)
    assert is_ma(c)
    back = interpret(extract_term(c), COLOURED)
    assert cospans_isomorphic(back, c)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 1_000_000))
def test_decomposition_parts(seed):
    rng = random.Random(seed)
    c = interpret(random_term(BA_SIGNATURE, rng, max_gens=8), BA_SIGNATURE)
    for e in c.carrier.edges:
        d = decompose(c, Selection.of_edges(c.carrier, [e]))
        assert all(is_ma(x) for x in (d.c1, d.l, d.c2))
        assert cospans_isomorphic(d.reassemble(), c)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 1_000_000))
def test_non_ma_rejected(seed):
    rng = random.Random(seed)
    c = interpret(random_term(BA_SIGNATURE, rng, max_gens=6), BA_SIGNATURE)
    if len(c.outputs) >= 1 and c.inputs:
        # merge an input with an output or feed an output back
        bad = Cospan(c.carrier, c.inputs + (c.outputs[0],), c.outputs)
        with pytest.raises(NotMonogamousAcyclic):
            extract_term(bad)
    if c.inputs and c.outputs:
        merged = compose(c, Cospan(Hypergraph({0: "•"}), (0,) * len(c.cod), (0,)))
        if len(c.cod) > 1:
            with pytest.raises(NotMonogamousAcyclic):
                extract_term(merged)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=0, max_size=5).map(lambda xs: sorted(range(len(xs)), key=lambda i: xs[i])))
def test_discrete_extraction_uses_only_wires(perm):
    word = ("•",) * len(perm)
    c = interpret(permutation_term(word, perm), FS_SIGNATURE)
    t = extract_term(c)

    def wires_only(x):
        if isinstance(x, (Id, Sym)):
            return True
        if isinstance(x, Gen):
            return False
        return wires_only(x.first if isinstance(x, Seq) else x.top) and \
            wires_only(x.second if isinstance(x, Seq) else x.bottom)
    assert wires_only(t)
    assert cospans_isomorphic(interpret(t, FS_SIGNATURE), c)
