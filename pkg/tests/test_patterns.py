import json

import pytest
from hypothesis import given, strategies as st

from cberlab.groups import F2, Z
from cberlab.patterns import (Language, Pattern, PatternDomainError, SublanguageError,
                              canonical_json, equality_type, expand, from_json, is_expansion,
                              occurs_at, pattern_hash, reduct, restrict, to_json, translate)

from strategies import LANG, elements, patterns

GRAPH = Language.of(E=2)


def zline_graph(lo, hi):
    pts = range(lo, hi + 1)
    edges = [(x, x + 1) for x in range(lo, hi)] + [(x + 1, x) for x in range(lo, hi)]
    return Pattern(Z, GRAPH, pts, {"E": edges})


def test_translate_examples():
    edge = Pattern(Z, GRAPH, [0, 1], {"E": [(0, 1)]})
    assert translate(0, edge) == edge
    assert translate(2, edge) == Pattern(Z, GRAPH, [2, 3], {"E": [(2, 3)]})


@given(st.data())
def test_translate_is_an_action(data):
    A = data.draw(patterns())
    G = A.group
    g = data.draw(elements(G, 3))
    h = data.draw(elements(G, 3))
    assert translate(G.identity, A) == A
    assert translate(g, translate(h, A)) == translate(G.mul(g, h), A)


def test_reduct_and_restrict_examples():
    A = Pattern(Z, LANG, [0, 1, 2], {"E": [(0, 1), (1, 2)], "M": [(1,)]})
    assert reduct(A, LANG) == A
    assert reduct(A, GRAPH) == Pattern(Z, GRAPH, [0, 1, 2], {"E": [(0, 1), (1, 2)]})
    assert restrict(A, A.universe) == A
    assert restrict(A, []) == Pattern(Z, LANG, [], {})
    assert restrict(A, [0, 2]).rel("E") == frozenset()
    with pytest.raises(SublanguageError):
        reduct(A, Language.of(Q=1))
    with pytest.raises(PatternDomainError):
        restrict(A, [5])


@given(st.data())
def test_reduct_restrict_commute(data):
    A = data.draw(patterns())
    S = data.draw(st.sets(st.sampled_from(sorted(A.universe, key=A.group.sort_key)))
                  if A.universe else st.just(set()))
    assert reduct(restrict(A, S), GRAPH) == restrict(reduct(A, GRAPH), S)


@given(st.data())
def test_reduct_of_expand_is_identity(data):
    A = data.draw(patterns(language=GRAPH))
    pts = sorted(A.universe, key=A.group.sort_key)
    marks = data.draw(st.sets(st.sampled_from(pts))) if pts else set()
    Astar = expand(A, Language.of(M=1), {"M": [(x,) for x in marks]})
    assert reduct(Astar, GRAPH) == A
    assert is_expansion(Astar, A)


def test_is_expansion_examples():
    G = zline_graph(0, 3)
    coloured = expand(G, Language.of(C0=1, C1=1), {"C0": [(0,), (2,)], "C1": [(1,), (3,)]})
    assert is_expansion(coloured, G)
    smaller = Pattern(Z, GRAPH, G.universe, {"E": set(G.rel("E")) - {(0, 1)}})
    assert not is_expansion(expand(smaller, Language.of(C0=1), {}), G)
    assert is_expansion(G, G)


def test_occurs_at_examples():
    A = zline_graph(-10, 10)
    vertex = Pattern(Z, GRAPH, [0], {})
    assert all(occurs_at(vertex, A, g) for g in A.universe)
    edge = Pattern(Z, GRAPH, [0, 1], {"E": [(0, 1), (1, 0)]})
    assert occurs_at(edge, A, 5)
    gap = Pattern(Z, GRAPH, [0, 2], {"E": [(0, 2), (2, 0)]})
    assert not any(occurs_at(gap, A, g) for g in range(-15, 15))


@given(st.data())
def test_occurs_at_equivariant(data):
    A = data.draw(patterns(radius=2))
    G = A.group
    A0 = data.draw(patterns(G=G, radius=1))
    g = data.draw(elements(G, 2))
    d = data.draw(elements(G, 2))
    assert occurs_at(A0, translate(d, A), G.mul(d, g)) == occurs_at(A0, A, g)


def test_equality_type():
    assert equality_type(("a", "a", "b")) == {(0, 1)}
    assert equality_type((1, 2, 3)) == frozenset()
    assert equality_type((7, 7, 7)) == {(0, 1), (0, 2), (1, 2)}


def test_json_format_and_roundtrip():
    A = Pattern(F2, LANG, F2.ball(1), {"E": [(F2.identity, F2.generators[1])],
                                       "M": [(F2.generators[0],)]})
    data = to_json(A)
    assert set(data) == {"group", "language", "universe", "relations"}
    assert data["language"] == [{"name": "E", "arity": 2}, {"name": "M", "arity": 1}]
    assert data["relations"]["M"] == [["a^-1"]]
    text = canonical_json(A)
    assert canonical_json(from_json(json.loads(text))) == text
    assert len(pattern_hash(A)) == 64


@given(patterns())
def test_json_roundtrip_property(A):
    text = canonical_json(A)
    B = from_json(json.loads(text))
    assert B == A
    assert canonical_json(B) == text
    no_group = to_json(A, with_group=False)
    assert from_json(no_group, A.group) == A


def test_pattern_validation():
    with pytest.raises(PatternDomainError):
        Pattern(Z, GRAPH, [0], {"E": [(0, 1)]})
    with pytest.raises(ValueError):
        Pattern(Z, GRAPH, [0, 1], {"E": [(0,)]})
    with pytest.raises(SublanguageError):
        Pattern(Z, GRAPH, [0], {"Q": []})
    with pytest.raises(ValueError):
        Language.of(E=0)
