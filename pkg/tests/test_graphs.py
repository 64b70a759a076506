import itertools
from math import factorial, prod

import pytest
from hypothesis import given, settings

from conftest import graphs
from raagkit.graphs import (DisjointUnion, GraphError, Join, Leaf, P4Witness, SimpleGraph,
                            all_graphs, amalgam_graph, cograph_decompose, complete_graph,
                            components_minus_star, cycle_graph, dominates, domination_structure,
                            evaluate_cotree, find_induced_p4, graph_automorphisms, is_isomorphic,
                            labeled_quotient_automorphisms, link, named_graph, null_graph,
                            path_graph, quotient_graph, star)

P3, P4, K3, N3, C4 = path_graph(3), path_graph(4), complete_graph(3), null_graph(3), cycle_graph(4)


def test_graph_rejects_bad_input():
    with pytest.raises(GraphError):
        SimpleGraph("ab", [("a", "a")])
    with pytest.raises(GraphError):
        SimpleGraph("ab", [("a", "z")])
    with pytest.raises(GraphError):
        SimpleGraph("aa")
    assert len(SimpleGraph("ab", [("a", "b"), ("b", "a")]).edges) == 1


def test_round_trip_serialisation():
    for g in (P3, C4, N3, named_graph("K4")):
        assert SimpleGraph.loads(g.dumps()) == g
    yaml_text = "vertices: [x, y, z]\nedges:\n  - [x, y]\n"
    assert SimpleGraph.loads(yaml_text) == SimpleGraph("xyz", [("x", "y")])
    with pytest.raises(GraphError):
        SimpleGraph.loads("edges: []")


def test_link_and_star():
    assert link(P3, "b") == {"a", "c"}
    assert link(K3, "a") == {"b", "c"}
    assert link(N3, "a") == set()
    assert star(P3, "b") == {"a", "b", "c"}
    assert star(P3, "a") == {"a", "b"}
    assert star(N3, "a") == {"a"}


def test_components_minus_star():
    assert components_minus_star(P3, "a") == [frozenset("c")]
    assert components_minus_star(P4, "b") == [frozenset("d")]
    assert components_minus_star(K3, "a") == []


def test_dominates_examples():
    assert dominates(P3, "a", "b")
    assert not dominates(P3, "b", "a")
    assert dominates(P3, "a", "c")


def test_domination_classes():
    ds = domination_structure(P3)
    assert dict(zip(ds.classes, ds.class_kind)) == {("a", "c"): "Null", ("b",): "Singleton"}
    ds = domination_structure(K3)
    assert ds.classes == (("a", "b", "c"),) and ds.class_kind == ("Complete",)
    assert len(domination_structure(P4).classes) == 4


def test_quotient_graph_labels():
    q = quotient_graph(P3)
    assert sorted(q.label_text(v) for v in q.graph.vertices) == ["F_2", "Z"]
    assert len(q.graph.edges) == 1
    assert [quotient_graph(K3).label_text(v) for v in quotient_graph(K3).graph.vertices] == ["Z^3"]
    assert [quotient_graph(N3).label_text(v) for v in quotient_graph(N3).graph.vertices] == ["F_3"]


def test_automorphism_groups():
    assert len(graph_automorphisms(P3)) == 2
    assert len(graph_automorphisms(K3)) == 6
    assert graph_automorphisms(P4) == [tuple("abcd"), tuple("dcba")]
    assert len(labeled_quotient_automorphisms(quotient_graph(P3))) == 1
    assert len(labeled_quotient_automorphisms(quotient_graph(C4))) == 2
    assert len(labeled_quotient_automorphisms(quotient_graph(K3))) == 1


def test_amalgam_examples():
    assert is_isomorphic(amalgam_graph(N3, star(N3, "a"), 2), null_graph(5))
    assert amalgam_graph(C4, C4.vertices, 3) == C4
    assert amalgam_graph(P3, star(P3, "b"), 3) == P3


def test_cograph_examples():
    t = cograph_decompose(C4)
    assert isinstance(t, Join)
    assert {frozenset(c.vertex for c in u.children) for u in t.children} == {
        frozenset("ac"), frozenset("bd")}
    assert all(isinstance(u, DisjointUnion) for u in t.children)
    w = cograph_decompose(P4)
    assert isinstance(w, P4Witness) and set(w.path) == set("abcd")
    t = cograph_decompose(K3)
    assert isinstance(t, Join) and all(isinstance(c, Leaf) for c in t.children)


def test_isomorphism_class_counts():
    assert [len(all_graphs(n)) for n in range(1, 5)] == [1, 2, 4, 11]


@settings(max_examples=60, deadline=None)
@given(graphs(max_size=6))
def test_star_and_components_partition(g):
    for v in g.vertices:
        assert star(g, v) == link(g, v) | {v}
        comps = components_minus_star(g, v)
        assert sum(len(c) for c in comps) == len(g) - len(star(g, v))
        assert set().union(*comps) == set(g.vertices) - star(g, v)


@settings(max_examples=40, deadline=None)
@given(graphs(max_size=5))
def test_domination_is_a_preorder(g):
    for v in g.vertices:
        assert dominates(g, v, v)
    for u, v, w in itertools.product(g.vertices, repeat=3):
        if dominates(g, u, v) and dominates(g, v, w):
            assert dominates(g, u, w)


@settings(max_examples=60, deadline=None)
@given(graphs(max_size=6))
def test_classes_are_complete_or_null(g):
    for cls in domination_structure(g).classes:
        sub = g.subgraph(cls)
        assert sub.is_complete() or not sub.edges


@settings(max_examples=40, deadline=None)
@given(graphs(max_size=5))
def test_amalgam_vertex_count(g):
    for v in g.vertices:
        lam = star(g, v)
        for d in (1, 2, 3):
            h = amalgam_graph(g, lam, d)
            assert len(h) == d * (len(g) - len(lam)) + len(lam)


@settings(max_examples=60, deadline=None)
@given(graphs(max_size=7))
def test_cograph_iff_no_induced_p4(g):
    t = cograph_decompose(g)
    if isinstance(t, P4Witness):
        assert find_induced_p4(g) is not None
    else:
        assert find_induced_p4(g) is None
        assert is_isomorphic(evaluate_cotree(t), g)


@settings(max_examples=40, deadline=None)
@given(graphs(max_size=6))
def test_automorphism_group_splits_over_classes(g):
    q = quotient_graph(g)
    within = prod(factorial(len(c)) for c in domination_structure(g).classes)
    assert len(graph_automorphisms(g)) == within * len(labeled_quotient_automorphisms(q))
