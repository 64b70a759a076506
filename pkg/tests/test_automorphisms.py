import itertools
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs
from raagkit.automorphisms import (GraphSymmetry, Inversion, PartialConjugation, Transvection,
                                   Type1, Type2, abelian_matrix, apply, brute_force_well_defined,
                                   compose, conjugation, day_relation_instances, endo_of_ls,
                                   endo_of_whitehead, endomorphism, endos_equal,
                                   enumerate_whitehead, identity, instance_endomorphisms,
                                   ls_generators, preserves_relators, verify_day_presentation,
                                   whitehead_inverse, whitehead_well_defined, all_type2_candidates)
from raagkit.graphs import (GraphError, complete_graph, components_minus_star, null_graph,
                            path_graph)
from raagkit.lifts import whitehead_factors
from raagkit.words import Word

N1, N2, K2, P3 = null_graph(1), null_graph(2), complete_graph(2), path_graph(3)


def L(*letters):
    return frozenset(letters)


def w(text):
    return Word.parse(text)


def images(g, e):
    return {v: str(apply(g, e, Word.gen(v))) for v in g.vertices}


def test_ls_generator_counts():
    count = lambda g: Counter(type(x).__name__ for x in ls_generators(g))
    assert count(N2) == {"Inversion": 2, "GraphSymmetry": 2, "Transvection": 2,
                         "PartialConjugation": 2}
    assert count(K2) == {"Inversion": 2, "GraphSymmetry": 2, "Transvection": 2}
    transvections = {(x.v, x.w) for x in ls_generators(P3) if isinstance(x, Transvection)}
    assert transvections == {("b", "a"), ("b", "c"), ("a", "c"), ("c", "a")}


def test_ls_generator_preconditions():
    with pytest.raises(GraphError):
        endo_of_ls(P3, Transvection("a", "b"))
    with pytest.raises(GraphError):
        endo_of_ls(P3, PartialConjugation("b", frozenset("a")))


def test_well_definedness_examples():
    assert whitehead_well_defined(P3, L(("b", 1), ("a", 1)), ("b", 1))[0]
    ok, reason = whitehead_well_defined(P3, L(("a", 1), ("b", 1)), ("a", 1))
    assert not ok and reason.startswith("condition 2")
    A = L(("b", 1), ("a", 1), ("a", -1))
    assert whitehead_well_defined(P3, A, ("b", 1))[0] == brute_force_well_defined(P3, A, ("b", 1))


def test_apply_examples():
    assert apply(N2, endo_of_ls(N2, Inversion("a")), w("a")) == w("a^-1")
    assert apply(N2, endo_of_ls(N2, Transvection("a", "b")), w("b")) == w("a b")
    pc = endo_of_ls(N2, PartialConjugation("a", frozenset("b")))
    assert apply(N2, pc, w("b")) == w("a b a^-1")


def test_compose_examples():
    inv_a = endo_of_ls(N2, Inversion("a"))
    assert compose(N2, inv_a, inv_a) == identity(N2)
    lam = endo_of_ls(N2, Transvection("a", "b"))
    assert images(N2, compose(N2, lam, lam)) == {"a": "a", "b": "a a b"}
    # the partial conjugations at b in P3 compose to conjugation by b
    e = identity(P3)
    for A in components_minus_star(P3, "b"):
        e = compose(P3, e, endo_of_ls(P3, PartialConjugation("b", A)))
    assert endos_equal(P3, e, conjugation(P3, w("b")))
    e = identity(P3)
    for A in components_minus_star(P3, "a"):
        e = compose(P3, e, endo_of_ls(P3, PartialConjugation("a", A)))
    assert endos_equal(P3, e, conjugation(P3, w("a")))


def test_whitehead_dictionary_examples():
    a, b = ("a", 1), ("b", 1)
    rho = endo_of_whitehead(N2, Type2(L(a, b), a))
    assert images(N2, rho) == {"a": "a", "b": "b a"}
    lam_inv = endo_of_whitehead(N2, Type2(L(a, ("b", -1)), a))
    assert endos_equal(N2, lam_inv, endo_of_ls(N2, Transvection("a", "b"), inverse=True))
    everything_but = frozenset((v, s) for v in N2.vertices for s in (1, -1)) - {("a", -1)}
    gamma_inv = endo_of_whitehead(N2, Type2(everything_but, a))
    assert endos_equal(N2, gamma_inv, conjugation(N2, w("a^-1")))


def test_endos_equal_examples():
    inv_a = endo_of_ls(N2, Inversion("a"))
    assert endos_equal(N2, compose(N2, inv_a, inv_a), identity(N2))
    for g, expected in ((N2, False), (K2, True)):
        lam = endo_of_ls(g, Transvection("a", "b"))
        rho = endomorphism(g, {"a": w("a"), "b": w("b a")})
        assert endos_equal(g, lam, rho) == expected


def test_whitehead_counts():
    kinds = lambda g: Counter(type(x).__name__ for x in enumerate_whitehead(g))
    assert kinds(N1) == {"Type1": 2, "Type2": 2}
    assert kinds(N2) == {"Type1": 8, "Type2": 16}
    assert kinds(K2) == {"Type1": 8, "Type2": 16}
    assert kinds(path_graph(3))["Type2"] == 64
    for x in enumerate_whitehead(N1):
        if isinstance(x, Type2):
            assert endo_of_whitehead(N1, x) == identity(N1)


def test_day_instance_counts():
    insts = day_relation_instances(N2)
    n_type1 = sum(isinstance(x, Type1) for x in enumerate_whitehead(N2))
    assert sum(i.relation == 7 for i in insts) == n_type1 ** 2
    a, b = ("a", 1), ("b", 1)
    r1 = [i for i in insts if i.relation == 1
          and Type2(L(a, b), a) in [x for x, _ in i.left + i.right]]
    assert r1
    left, right = instance_endomorphisms(N2, r1[0])
    assert left == right


@pytest.mark.parametrize("g", [N1, N2, K2, P3], ids=["N1", "N2", "K2", "P3"])
def test_day_presentation_small(g):
    report = verify_day_presentation(g)
    assert report.instances > 0
    assert report.failures == []


@pytest.mark.parametrize("g", [N2, K2, P3, complete_graph(3), null_graph(3)],
                         ids=["N2", "K2", "P3", "K3", "N3"])
def test_oracle_agrees_on_small_graphs(g):
    for c in all_type2_candidates(g):
        assert whitehead_well_defined(g, c.A, c.a)[0] == brute_force_well_defined(g, c.A, c.a)


@pytest.mark.parametrize("g", [N2, K2, P3, path_graph(4)], ids=["N2", "K2", "P3", "P4"])
def test_whitehead_factorisation_into_ls_generators(g):
    for wa in enumerate_whitehead(g):
        e = identity(g)
        for gen, exponent in whitehead_factors(g, wa):
            e = compose(g, e, endo_of_ls(g, gen, exponent < 0))
        assert endos_equal(g, e, endo_of_whitehead(g, wa))


@pytest.mark.parametrize("g", [N2, K2, P3, path_graph(4)], ids=["N2", "K2", "P3", "P4"])
def test_right_transvection_identity(g):
    for x in ls_generators(g):
        if not isinstance(x, Transvection):
            continue
        v, u = x.v, x.w
        rho = endomorphism(g, {y: (w(f"{u} {v}") if y == u else Word.gen(y)) for y in g.vertices})
        lam = endo_of_ls(g, x)
        if g.adjacent(v, u):
            assert endos_equal(g, rho, lam)
        else:
            gamma_inv = endo_of_ls(g, PartialConjugation(v, frozenset({u})), inverse=True)
            assert endos_equal(g, rho, compose(g, lam, gamma_inv))


def test_whitehead_inverses_compose_to_identity():
    for g in (N2, K2, P3):
        for wa in enumerate_whitehead(g):
            e = compose(g, endo_of_whitehead(g, wa), endo_of_whitehead(g, whitehead_inverse(g, wa)))
            assert e == identity(g)


@st.composite
def graph_and_ls_triples(draw):
    g = draw(graphs(max_size=4))
    gens = ls_generators(g)
    pick = st.tuples(st.sampled_from(gens), st.booleans())
    return g, [draw(pick) for _ in range(3)]


@settings(max_examples=60, deadline=None)
@given(graph_and_ls_triples())
def test_composition_associative_and_functorial(data):
    g, picks = data
    f, e, d = (endo_of_ls(g, x, inv) for x, inv in picks)
    assert compose(g, compose(g, f, e), d) == compose(g, f, compose(g, e, d))
    assert compose(g, identity(g), f) == f == compose(g, f, identity(g))
    assert preserves_relators(g, compose(g, f, e))
    M = lambda x: [list(r) for r in abelian_matrix(g, x)]
    fe = M(compose(g, f, e))
    prod_ = [[sum(a * b for a, b in zip(row, col)) for col in zip(*M(e))] for row in M(f)]
    assert fe == prod_


def test_graph_symmetry_and_type1():
    sym = GraphSymmetry(("c", "b", "a"))
    assert images(P3, endo_of_ls(P3, sym)) == {"a": "c", "b": "b", "c": "a"}
    n = sum(isinstance(x, Type1) for x in enumerate_whitehead(P3))
    assert n == 2 ** 3 * 2
    assert list(itertools.islice(enumerate_whitehead(P3), 1))[0] == Type1((1, 1, 1), ("a", "b", "c"))
