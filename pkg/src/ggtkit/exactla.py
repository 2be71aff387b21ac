"""Exact integer/rational linear algebra: sparse matrices, fraction-free
rank, Smith normal form, and integer linear systems.

No floating point anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .errors import DomainError


@dataclass
class SparseRationalMatrix:
    """Sparse matrix over Q; zero entries are never stored."""

    rows: int
    cols: int
    entries: dict = field(default_factory=dict)  # (i, j) -> Fraction

    def add_at(self, i: int, j: int, value) -> None:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise DomainError(f"entry ({i},{j}) outside a {self.rows}x{self.cols} matrix")
        new = self.entries.get((i, j), Fraction(0)) + Fraction(value)
        if new == 0:
            self.entries.pop((i, j), None)
        else:
            self.entries[(i, j)] = new

    def get(self, i: int, j: int) -> Fraction:
        return self.entries.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self.entries

    def matmul(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.cols != other.rows:
            raise DomainError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        by_row: dict = {}
        for (i, k), v in other.entries.items():
            by_row.setdefault(i, []).append((k, v))
        acc: dict = {}
        for (i, j), v in self.entries.items():
            for k, w in by_row.get(j, ()):
                key = (i, k)
                acc[key] = acc.get(key, Fraction(0)) + v * w
        out = SparseRationalMatrix(self.rows, other.cols)
        out.entries = {k: v for k, v in acc.items() if v != 0}
        return out

    def restrict(self, row_idx: list[int], col_idx: list[int]) -> "SparseRationalMatrix":
        """Submatrix on the given (ordered) row and column index lists."""
        rpos = {r: i for i, r in enumerate(row_idx)}
        cpos = {c: j for j, c in enumerate(col_idx)}
        out = SparseRationalMatrix(len(row_idx), len(col_idx))
        for (i, j), v in self.entries.items():
            ri = rpos.get(i)
            cj = cpos.get(j)
            if ri is not None and cj is not None:
                out.entries[(ri, cj)] = v
        return out

    def dense_int_rows(self) -> list[list[int]]:
        """Rows scaled to integers (each row multiplied by its denominator lcm)."""
        dense: list[list[Fraction]] = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            dense[i][j] = v
        out = []
        for row in dense:
            scale = lcm(*(f.denominator for f in row)) if row else 1
            out.append([int(f * scale) for f in row])
        return out

    def rank(self) -> int:
        return bareiss_rank(self.dense_int_rows())


def bareiss_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [row[:] for row in rows if any(row)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    prev = 1
    col = 0
    while rank < len(m) and col < ncols:
        piv = None
        for r in range(rank, len(m)):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            col += 1
            continue
        if piv != rank:
            m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        prow = m[rank]
        for r in range(rank + 1, len(m)):
            row = m[r]
            f = row[col]
            if f:
                row[col:] = [(p * row[j] - f * prow[j]) // prev for j in range(col, ncols)]
            elif prev != 1 or p != 1:
                row[col:] = [(p * row[j]) // prev for j in range(col, ncols)]
        prev = p
        rank += 1
        col += 1
    return rank


def _det_int(rows: list[list[int]]) -> int:
    """Determinant of a square integer matrix, fraction-free."""
    n = len(rows)
    if n == 0:
        return 1
    m = [row[:] for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        p = m[k][k]
        for r in range(k + 1, n):
            f = m[r][k]
            m[r][k:] = [(p * m[r][j] - f * m[k][j]) // prev for j in range(k, n)]
        prev = p
    return sign * m[-1][-1]


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(matrix: list[list[int]]):
    """Smith normal form: returns (U, S, V) with U*A*V = S.

    U and V are unimodular (|det| = 1, verified), S is diagonal and each
    diagonal entry divides the next.  Works on any shape including empty.
    """
    A = [list(map(int, row)) for row in matrix]
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    if any(len(row) != ncols for row in A):
        raise DomainError("ragged matrix")
    U = _identity(nrows)
    V = _identity(ncols)

    def row_op(i, j, q):  # row_i -= q * row_j
        if q:
            A[i] = [a - q * b for a, b in zip(A[i], A[j])]
            U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        if q:
            for row in A:
                row[i] -= q * row[j]
            for row in V:
                row[i] -= q * row[j]

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]

    n = min(nrows, ncols)
    for k in range(n):
        while True:
            piv = None
            best = None
            for i in range(k, nrows):
                for j in range(k, ncols):
                    a = abs(A[i][j])
                    if a and (best is None or a < best):
                        best = a
                        piv = (i, j)
            if piv is None:
                break
            swap_rows(k, piv[0])
            swap_cols(k, piv[1])
            for i in range(k + 1, nrows):
                row_op(i, k, A[i][k] // A[k][k])
            for j in range(k + 1, ncols):
                col_op(j, k, A[k][j] // A[k][k])
            if any(A[i][k] for i in range(k + 1, nrows)) or any(
                A[k][j] for j in range(k + 1, ncols)
            ):
                continue  # remainders left; re-pivot on a smaller entry
            p = A[k][k]
            bad = None
            for i in range(k + 1, nrows):
                if any(A[i][j] % p for j in range(k + 1, ncols)):
                    bad = i
                    break
            if bad is None:
                break
            row_op(k, bad, -1)  # pull a non-divisible entry into the pivot row
        if k < n and A[k][k] < 0:
            A[k] = [-a for a in A[k]]
            U[k] = [-a for a in U[k]]
        if all(A[i][j] == 0 for i in range(k, nrows) for j in range(k, ncols)):
            break

    for i in range(nrows):
        for j in range(ncols):
            if i != j and A[i][j]:
                raise DomainError("Smith normal form did not reach diagonal shape")  # pragma: no cover
    if abs(_det_int(U)) != 1 or abs(_det_int(V)) != 1:
        raise DomainError("Smith normal form transforms are not unimodular")  # pragma: no cover
    return U, A, V


def solve_integer_system(A: list[list[int]], b: list[int]):
    """Solve A z = b over the integers.

    Returns (particular_solution | None, kernel_basis).  The kernel basis
    spans {z : A z = 0} and is returned even when the system is unsolvable.
    """
    nrows = len(A)
    ncols = len(A[0]) if nrows else 0
    if nrows == 0:
        return [0] * ncols, _identity(ncols)
    if any(len(row) != ncols for row in A) or len(b) != nrows:
        raise DomainError("inconsistent system dimensions")
    U, S, V = smith_normal_form(A)
    ub = [sum(U[i][j] * b[j] for j in range(nrows)) for i in range(nrows)]
    n = min(nrows, ncols)
    y = [0] * ncols
    solvable = True
    for i in range(nrows):
        d = S[i][i] if i < n else 0
        if d:
            if ub[i] % d != 0:
                solvable = False
                break
            y[i] = ub[i] // d
        elif ub[i] != 0:
            solvable = False
            break
    kernel_cols = [j for j in range(ncols) if j >= n or S[j][j] == 0]
    kernel = [[V[i][j] for i in range(ncols)] for j in kernel_cols]
    if not solvable:
        return None, kernel
    z = [sum(V[i][j] * y[j] for j in range(ncols)) for i in range(ncols)]
    return z, kernel


def reduce_by_kernel(z: list[int], kernel: list[list[int]], passes: int = 4) -> list[int]:
    """Greedily shrink the l1 norm of z by integer multiples of kernel vectors.

    No lattice reduction is attempted; adequacy is established by tests, not
    assumed.
    """
    z = list(z)

    def l1(v):
        return sum(abs(x) for x in v)

    for _ in range(passes):
        improved = False
        for k in kernel:
            sq = sum(x * x for x in k)
            if sq == 0:
                continue
            proj = round(sum(a * b for a, b in zip(z, k)) / sq)
            best_t, best_norm = 0, l1(z)
            for t in range(proj - 2, proj + 3):
                if t == 0:
                    continue
                cand = l1([a - t * b for a, b in zip(z, k)])
                if cand < best_norm:
                    best_t, best_norm = t, cand
            if best_t:
                z = [a - best_t * b for a, b in zip(z, k)]
                improved = True
        if not improved:
            break
    return z
