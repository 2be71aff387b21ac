"""Exact linear algebra: SNF, Bareiss rank, integer systems."""

from __future__ import annotations

import random
from fractions import Fraction

from ggtkit.exactla import (
    SparseRationalMatrix,
    bareiss_rank,
    reduce_by_kernel,
    smith_normal_form,
    solve_integer_system,
)


def matmul(X, Y):
    return [
        [sum(X[i][k] * Y[k][j] for k in range(len(Y))) for j in range(len(Y[0]))]
        for i in range(len(X))
    ]


def rank_by_gauss(A):
    """Independent rank oracle: plain Gaussian elimination over Fractions."""
    if not A:
        return 0
    m = [[Fraction(v) for v in row] for row in A]
    nrows, ncols = len(m), len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def test_snf_diag_2_3():
    U, S, V = smith_normal_form([[2, 0], [0, 3]])
    assert [S[0][0], S[1][1]] == [1, 6]


def test_snf_zero_matrix():
    U, S, V = smith_normal_form([[0, 0], [0, 0]])
    assert S == [[0, 0], [0, 0]]
    assert U == [[1, 0], [0, 1]] and V == [[1, 0], [0, 1]]


def test_snf_random_properties():
    rng = random.Random(7)
    for _ in range(200):
        nr, nc = rng.randint(1, 4), rng.randint(1, 5)
        A = [[rng.randint(-6, 6) for _ in range(nc)] for _ in range(nr)]
        U, S, V = smith_normal_form(A)
        assert matmul(matmul(U, A), V) == S
        d = [S[i][i] for i in range(min(nr, nc))]
        for i in range(len(d) - 1):
            if d[i + 1] != 0:
                assert d[i] != 0 and d[i + 1] % d[i] == 0
            # everything divides 0, so a zero tail is always fine
        assert sum(1 for x in d if x) == rank_by_gauss(A)


def test_solver_round_trip_and_kernel():
    rng = random.Random(11)
    for _ in range(200):
        nr, nc = rng.randint(1, 4), rng.randint(1, 5)
        A = [[rng.randint(-5, 5) for _ in range(nc)] for _ in range(nr)]
        x = [rng.randint(-4, 4) for _ in range(nc)]
        b = [sum(A[i][j] * x[j] for j in range(nc)) for i in range(nr)]
        z, kernel = solve_integer_system(A, b)
        assert z is not None
        assert all(sum(A[i][j] * z[j] for j in range(nc)) == b[i] for i in range(nr))
        for k in kernel:
            assert all(sum(A[i][j] * k[j] for j in range(nc)) == 0 for i in range(nr))
        z2 = reduce_by_kernel(z, kernel)
        assert all(sum(A[i][j] * z2[j] for j in range(nc)) == b[i] for i in range(nr))
        assert sum(abs(v) for v in z2) <= sum(abs(v) for v in z)


def test_solver_reports_unsolvable():
    z, kernel = solve_integer_system([[2]], [1])
    assert z is None
    z, kernel = solve_integer_system([[0, 0]], [3])
    assert z is None
    assert len(kernel) == 2


def test_bareiss_against_gauss_oracle():
    rng = random.Random(23)
    for _ in range(150):
        nr, nc = rng.randint(1, 6), rng.randint(1, 6)
        A = [[rng.randint(-4, 4) for _ in range(nc)] for _ in range(nr)]
        assert bareiss_rank(A) == rank_by_gauss(A)


def test_sparse_matrix_rank_scales_rationals():
    m = SparseRationalMatrix(2, 2)
    m.add_at(0, 0, Fraction(1, 2))
    m.add_at(0, 1, Fraction(1, 3))
    m.add_at(1, 0, Fraction(1, 5))
    m.add_at(1, 1, Fraction(1, 1))
    assert m.rank() == 2
    m2 = SparseRationalMatrix(2, 2)
    m2.add_at(0, 0, Fraction(1, 2))
    m2.add_at(1, 0, Fraction(1, 4))
    m2.add_at(0, 1, Fraction(1))
    m2.add_at(1, 1, Fraction(1, 2))
    assert m2.rank() == 1


def test_sparse_matmul_and_restrict():
    a = SparseRationalMatrix(2, 3, {(0, 0): Fraction(1), (1, 2): Fraction(2)})
    b = SparseRationalMatrix(3, 2, {(0, 1): Fraction(3), (2, 0): Fraction(1)})
    prod = a.matmul(b)
    assert prod.entries == {(0, 1): Fraction(3), (1, 0): Fraction(2)}
    sub = a.restrict([1], [2, 0])
    assert sub.entries == {(0, 0): Fraction(2)}
