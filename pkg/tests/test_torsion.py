import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs
from raagkit.graphs import (GraphError, SimpleGraph, complete_graph, cycle_graph,
                            disjoint_union, null_graph, path_graph)
from raagkit.torsion import (TorsionProfile, abelian_fits_aut_fn, full_group_bounds,
                             graph_symmetry_group, lower_bound_factors, minkowski,
                             nu_p_finite_group, nu_p_gl, nu_p_of_factors, nu_p_pure,
                             obstruction_report, rank_p_finite_group, rank_p_gl,
                             rank_p_of_factors, rank_p_pure)

P3 = path_graph(3)
S3 = [(1, 0, 2), (1, 2, 0)]
KLEIN = [(1, 0, 3, 2), (2, 3, 0, 1)]
ASYMMETRIC6 = SimpleGraph("abcdef", [("a", "c"), ("a", "d"), ("a", "f"), ("b", "c"),
                                     ("b", "e"), ("c", "d")])


def test_gl_values():
    assert (nu_p_gl(2, 2), rank_p_gl(2, 2), nu_p_gl(2, 3)) == (3, 2, 1)
    assert [minkowski(n) for n in (1, 2, 3, 4)] == [2, 24, 48, 5760]
    with pytest.raises(GraphError):
        nu_p_gl(2, 4)


def test_pure_values():
    assert (nu_p_pure(P3, 2), rank_p_pure(P3, 2)) == (4, 3)
    for n in range(1, 7):
        assert nu_p_pure(null_graph(n), 2) == sum(n // 2 ** k for k in range(0, 4))
    assert nu_p_pure(null_graph(1), 2) == rank_p_pure(null_graph(1), 2) == 1
    assert nu_p_pure(null_graph(1), 3) == 0


def test_finite_groups():
    assert nu_p_finite_group(S3, 2) == nu_p_finite_group(S3, 3) == 1
    assert nu_p_finite_group([], 5) == 0
    assert rank_p_finite_group(KLEIN, 2) == 2
    assert rank_p_finite_group(S3, 3) == 1
    assert rank_p_finite_group([(1, 2, 3, 0)], 2) == 1


def test_full_group_bounds_examples():
    assert full_group_bounds(P3, 2) == TorsionProfile(2, (4, 4), (3, 3))
    assert full_group_bounds(null_graph(2), 2).nu == (3, 3)
    c4 = full_group_bounds(cycle_graph(4), 2)
    assert c4.nu == (6, 7) and c4.rank == (4, 4)
    assert full_group_bounds(cycle_graph(4), 2, outer=False) == c4


def test_profile_validation():
    with pytest.raises(ValueError):
        TorsionProfile(2, (3, 2), (0, 0))
    assert TorsionProfile(2, (6, 7), (4, 4)).text() == "p=2 nu=[6, 7] rank=4"


def test_abelian_criterion():
    assert abelian_fits_aut_fn([4], 2)
    assert not abelian_fits_aut_fn([5], 2)
    assert abelian_fits_aut_fn([2, 2], 2)
    with pytest.raises(GraphError):
        abelian_fits_aut_fn([6], 5)


def test_obstruction_examples():
    report = obstruction_report(P3, null_graph(2))
    assert report.blocked
    assert "vertex-count" in {v.condition for v in report.violations}
    assert len(graph_symmetry_group(ASYMMETRIC6)) == 1
    report = obstruction_report(null_graph(2), ASYMMETRIC6)
    assert "asymmetry" in {v.condition for v in report.violations}
    for g in (P3, cycle_graph(4), ASYMMETRIC6):
        assert not obstruction_report(g, g).blocked


def test_single_vertex_target_blocks_larger_sources():
    target = null_graph(1)
    for g in (null_graph(2), complete_graph(2), P3):
        assert full_group_bounds(g, 2).nu[0] > full_group_bounds(target, 2).nu[1]
        assert obstruction_report(g, target).blocked


@settings(max_examples=80, deadline=None)
@given(graphs(max_size=5), st.sampled_from([2, 3, 5]))
def test_pure_invariants(g, p):
    nu, rank = nu_p_pure(g, p), rank_p_pure(g, p)
    assert 0 <= rank <= nu
    factors = lower_bound_factors(g)
    assert nu == nu_p_of_factors(factors, p)
    assert rank == rank_p_of_factors(factors, p)
    bigger = disjoint_union(g, SimpleGraph(["z"], []))
    assert nu_p_pure(bigger, p) >= nu and rank_p_pure(bigger, p) >= rank
    bounds = full_group_bounds(g, p)
    assert bounds.nu[0] == nu and bounds.nu[1] <= nu_p_gl(len(g), p)


@given(st.integers(1, 8))
def test_minkowski_is_product_of_gl_valuations(n):
    from sympy import primerange
    value = 1
    for p in primerange(2, n + 2):
        value *= p ** nu_p_gl(n, p)
    assert minkowski(n) == value
    assert nu_p_gl(n, 2) >= rank_p_gl(n, 2)
