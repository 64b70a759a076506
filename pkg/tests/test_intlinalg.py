from math import gcd

from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix

from raagkit.intlinalg import (column_echelon, congruence_solvable, determinant, ext_gcd,
                               integer_kernel, mat_vec, solve_integer_system)

ints = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=5):
    return st.integers(1, max_cols).flatmap(
        lambda n: st.lists(st.lists(ints, min_size=n, max_size=n), min_size=0, max_size=max_rows)
        .map(lambda rows: (rows, n)))


def test_examples():
    assert ext_gcd(12, 18)[0] == 6
    assert integer_kernel([[2, 4]], 2) == [[2, -1]]
    assert solve_integer_system([[2, 4]], [3], 2) is None
    x, _ = solve_integer_system([[2, 4]], [6], 2)
    assert 2 * x[0] + 4 * x[1] == 6
    assert determinant([[2, 1], [7, 4]]) == 1
    assert congruence_solvable([2], -1, 3) and not congruence_solvable([2], -1, 4)


@given(ints, ints)
def test_ext_gcd(a, b):
    g, x, y = ext_gcd(a, b)
    assert g == gcd(a, b) and a * x + b * y == g


@settings(max_examples=150)
@given(matrices())
def test_echelon_is_unimodular_transform(data):
    rows, n = data
    H, U, pivots = column_echelon(rows, n)
    assert abs(determinant(U)) == 1
    for i, row in enumerate(rows):
        assert [sum(row[k] * U[k][j] for k in range(n)) for j in range(n)] == H[i]


@settings(max_examples=150)
@given(matrices())
def test_kernel_matches_sympy_rank(data):
    rows, n = data
    basis = integer_kernel(rows, n)
    for b in basis:
        assert mat_vec(rows, b) == [0] * len(rows)
    rank = Matrix(rows).rank() if rows else 0
    assert len(basis) == n - rank
    if basis:
        assert Matrix(basis).rank() == len(basis)


@settings(max_examples=150)
@given(matrices(max_rows=3, max_cols=3), st.lists(ints, min_size=3, max_size=3))
def test_solutions_are_correct_and_complete(data, x_true):
    rows, n = data
    x_true = x_true[:n]
    rhs = mat_vec(rows, x_true)
    out = solve_integer_system(rows, rhs, n)
    assert out is not None
    x, kernel = out
    assert mat_vec(rows, x) == rhs
    # perturbing the right-hand side off the lattice is detected
    if rows and any(rows[0]):
        g = 0
        for c in rows[0]:
            g = gcd(g, c)
        if g > 1:
            bumped = [rhs[0] + 1] + rhs[1:]
            assert solve_integer_system(rows, bumped, n) is None


@given(st.lists(st.lists(ints, min_size=3, max_size=3), min_size=3, max_size=3))
def test_determinant_matches_sympy(m):
    assert determinant(m) == Matrix(m).det()
