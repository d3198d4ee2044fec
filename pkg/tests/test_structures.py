import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iforge.errors import ContractError, StructureFormatError, StructureValidationError
from iforge.morphisms import MorphKind, naive_search
from iforge.structures import (
    Structure,
    StructureClass,
    canonical_form,
    export_dot,
    graph,
    load_structure,
    save_structure,
    validate,
)
from strategies import graphs, relabelings, structures

K3 = graph(3, [(0, 1), (1, 2), (0, 2)])
P3 = graph(3, [(0, 1), (1, 2)])


def messages(s, c):
    return [str(d) for d in validate(s, c)]


def test_out_of_domain_pair_rejected():
    with pytest.raises(ContractError, match="label 7 out of domain"):
        Structure([0, 1], {"edge": [(0, 7)]})


def test_unknown_relation_rejected():
    with pytest.raises(ContractError):
        Structure([0], {"colour": []})


def test_structure_is_immutable_and_hashable():
    s = graph(2, [(0, 1)])
    with pytest.raises(AttributeError):
        s.domain = frozenset()
    assert hash(s) == hash(graph(2, [(1, 0)]))
    assert s == Structure([0, 1], {"edge": [(0, 1), (1, 0)]}, StructureClass.GRAPH)


def test_graph_helper_symmetrises():
    assert graph(2, [(0, 1)]).rel("edge") == {(0, 1), (1, 0)}


def test_triangle_is_not_a_tree():
    assert messages(K3, StructureClass.COMBINATORIAL_TREE) == ["cycle: 0-1-2-0"]


def test_path_is_a_tree():
    assert validate(P3, StructureClass.COMBINATORIAL_TREE) == []


def test_disconnected_forest():
    assert messages(graph(3, [(0, 1)]), StructureClass.COMBINATORIAL_TREE) == ["not connected: 0 and 2"]


def test_order_transitivity():
    s = graph(3, [], order=[(0, 1), (1, 2)])
    diags = validate(s, StructureClass.ORDERED_GRAPH)
    assert len(diags) == 1 and "not transitive" in str(diags[0])
    assert diags[0].witness == (0, 1, 2)


def test_missing_relation_is_a_diagnostic():
    assert messages(graph(2), StructureClass.ORDERED_GRAPH) == ["missing relation: order"]


def test_graph_axioms():
    loop = Structure([0], {"edge": [(0, 0)]})
    arrow = Structure([0, 1], {"edge": [(0, 1)]})
    assert messages(loop, StructureClass.GRAPH) == ["not irreflexive: 0-0"]
    assert messages(arrow, StructureClass.GRAPH) == ["not symmetric: (0,1) without (1,0)"]


def test_set_tree_axioms():
    chain = Structure([0, 1, 2], {"tree": [(0, 1), (0, 2), (1, 2)]})
    assert validate(chain, StructureClass.SET_TREE) == []
    two_roots = Structure([0, 1], {"tree": []})
    assert "single minimal element" in messages(two_roots, StructureClass.SET_TREE)[0]
    vee = Structure([0, 1, 2], {"tree": [(0, 2), (1, 2)]})
    assert messages(vee, StructureClass.SET_TREE) == ["predecessors of 2 not a chain: 0, 1"]


@settings(max_examples=200)
@given(structures(names=("edge",)))
def test_valid_graph_means_symmetric_irreflexive(s):
    if not validate(s, StructureClass.GRAPH):
        e = s.rel("edge")
        assert e == {(b, a) for a, b in e}
        assert not any(a == b for a, b in e)


def test_canonical_form_examples():
    p2 = Structure([5, 9], {"edge": [(5, 9), (9, 5)]})
    assert canonical_form(p2) == graph(2, [(0, 1)])
    relabeled = K3.relabel({0: 4, 1: 8, 2: 1})
    assert canonical_form(relabeled) == canonical_form(K3)


@settings(max_examples=150, deadline=None)
@given(structures(max_n=4), st.data())
def test_canonical_form_is_a_relabeling_invariant(s, data):
    c = canonical_form(s)
    assert canonical_form(c) == c
    assert sorted(c.domain) == list(range(len(s)))
    other = s.relabel(data.draw(relabelings(s)))
    assert canonical_form(other) == c


@settings(max_examples=150, deadline=None)
@given(structures(max_n=3), structures(max_n=3))
def test_equal_canonical_forms_iff_isomorphic(a, b):
    iso = naive_search(a, b, MorphKind.ISOMORPHISM) is not None
    assert (canonical_form(a) == canonical_form(b)) == iso


def test_round_trip_is_byte_identical():
    data = save_structure(P3)
    assert load_structure(data) == P3
    assert save_structure(load_structure(data)) == data
    doc = json.loads(data)
    assert doc["relations"]["edge"] == sorted(doc["relations"]["edge"])


@given(structures(names=("edge", "order", "tree")))
def test_round_trip_property(s):
    assert load_structure(save_structure(s)) == s


def test_load_reports_position():
    with pytest.raises(StructureFormatError) as exc:
        load_structure(b'{"domain": [0, 1],\n "relations": {"edge": [[0 1]]}}')
    assert exc.value.position is not None
    assert "line 2" in str(exc.value)


def test_load_out_of_domain():
    with pytest.raises(StructureValidationError, match="label 7 out of domain"):
        load_structure('{"domain": [0, 1], "relations": {"edge": [[0, 7]]}}')


@pytest.mark.parametrize(
    "doc",
    ['[]', '{"relations": {}}', '{"domain": [-1]}', '{"domain": [0], "relations": {"x": []}}',
     '{"domain": [0], "relations": {"edge": [[0]]}}', '{"domain": [true]}'],
)
def test_load_rejects_malformed(doc):
    with pytest.raises(StructureFormatError):
        load_structure(doc)


def test_dot_export():
    s = Structure([0, 1, 2], {"edge": [(0, 1), (1, 0)], "order": [(0, 2)], "tree": [(1, 2)]})
    text = export_dot(s).decode()
    assert text.splitlines() == [
        "digraph G {", "  0;", "  1;", "  2;",
        "  0 -> 1 [dir=none];", "  0 -> 2 [style=dashed];", "  1 -> 2;", "}",
    ]
    assert export_dot(Structure([], {})).decode() == "digraph G {\n}\n"


@given(graphs())
def test_compact_and_induced(g):
    half = [v for v in g.domain if v % 2 == 0]
    sub = g.induced(half)
    assert sub.domain == frozenset(half)
    assert all(a in sub.domain and b in sub.domain for a, b in sub.rel("edge"))
    assert sorted(sub.compact().domain) == list(range(len(half)))
