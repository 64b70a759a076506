"""Exact integer linear algebra: column echelon form, integer kernels and
solutions of linear Diophantine systems."""
from __future__ import annotations

from math import gcd
from typing import Sequence


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x a + y b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def column_echelon(rows: Sequence[Sequence[int]], ncols: int):
    """Unimodular column reduction.

    Returns (H, U, pivots) with H = A U lower echelon: row i of a pivot pair
    (i, p) has H[i][p] > 0 and zeros right of p, and columns right of the last
    pivot vanish.
    """
    H = [list(r) for r in rows]
    U = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def combine(p: int, j: int, x: int, y: int, u: int, v: int):
        # col_p, col_j <- x col_p + y col_j, u col_p + v col_j
        for M in (H, U):
            for r in M:
                a, b = r[p], r[j]
                r[p], r[j] = x * a + y * b, u * a + v * b

    piv = 0
    pivots = []
    for i in range(len(H)):
        if piv >= ncols:
            break
        for j in range(piv + 1, ncols):
            b = H[i][j]
            if b == 0:
                continue
            a = H[i][piv]
            g, x, y = ext_gcd(a, b)
            combine(piv, j, x, y, -b // g, a // g)
        if H[i][piv] == 0:
            continue
        if H[i][piv] < 0:
            for M in (H, U):
                for r in M:
                    r[piv] = -r[piv]
        pivots.append((i, piv))
        piv += 1
    return H, U, pivots


def _normalise(vec: list[int]) -> list[int]:
    for x in vec:
        if x:
            return [-y for y in vec] if x < 0 else vec
    return vec


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """A basis of {x ∈ Z^ncols : A x = 0}, each vector with positive leading entry."""
    if not rows:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    _, U, pivots = column_echelon(rows, ncols)
    basis = [[U[r][c] for r in range(ncols)] for c in range(len(pivots), ncols)]
    return _size_reduce([_normalise(b) for b in basis])


def _size_reduce(basis: list[list[int]]) -> list[list[int]]:
    """Cheap pairwise reduction to keep kernel vectors short (same lattice)."""
    changed = True
    while changed:
        changed = False
        for i, b in enumerate(basis):
            for j, c in enumerate(basis):
                if i == j:
                    continue
                cc = sum(x * x for x in c)
                if cc == 0:
                    continue
                q = round(sum(x * y for x, y in zip(b, c)) / cc)
                if q:
                    nb = [x - q * y for x, y in zip(b, c)]
                    if sum(x * x for x in nb) < sum(x * x for x in b):
                        basis[i] = b = _normalise(nb)
                        changed = True
    return basis


def solve_integer_system(rows: Sequence[Sequence[int]], rhs: Sequence[int], ncols: int):
    """One integer solution of A x = b together with a kernel basis, or None."""
    if not rows:
        return [0] * ncols, integer_kernel(rows, ncols)
    H, U, pivots = column_echelon(rows, ncols)
    pivot_of = dict(pivots)
    y = [0] * ncols
    for i, row in enumerate(H):
        # y[j] is still zero for every pivot column not yet reached
        residual = rhs[i] - sum(row[j] * y[j] for j in range(len(pivots)))
        if i in pivot_of:
            p = pivot_of[i]
            if residual % row[p]:
                return None
            y[p] = residual // row[p]
        elif residual:
            return None
    x = [sum(U[r][c] * y[c] for c in range(ncols)) for r in range(ncols)]
    kernel = [[U[r][c] for r in range(ncols)] for c in range(len(pivots), ncols)]
    return x, _size_reduce([_normalise(b) for b in kernel])


def mat_vec(rows: Sequence[Sequence[int]], vec: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(r, vec)) for r in rows]


def congruence_solvable(coeffs: Sequence[int], target: int, modulus: int) -> bool:
    """Whether c·t ≡ target (mod modulus) has an integer solution t."""
    g = modulus
    for c in coeffs:
        g = gcd(g, c)
    return target % g == 0 if g else target == 0


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
