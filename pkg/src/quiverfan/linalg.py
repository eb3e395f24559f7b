"""Small exact linear algebra kit over the rationals.

Everything here works on lists of lists of int/Fraction and never touches
floating point.  Sizes at desk scale are tiny, so plain Gaussian elimination
is used for solving and a fraction-free (Bareiss) scheme for ranks and
determinants of integer matrices.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def rank_int(matrix) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [[int(x) for x in row] for row in matrix]
    if not m or not m[0]:
        return 0
    rows, cols = len(m), len(m[0])
    rnk = 0
    prev = 1
    for col in range(cols):
        pivot_row = next((r for r in range(rnk, rows) if m[r][col] != 0), None)
        if pivot_row is None:
            continue
        m[rnk], m[pivot_row] = m[pivot_row], m[rnk]
        pivot = m[rnk][col]
        for r in range(rnk + 1, rows):
            for c in range(col + 1, cols):
                m[r][c] = (pivot * m[r][c] - m[r][col] * m[rnk][c]) // prev
            m[r][col] = 0
        prev = pivot
        rnk += 1
        if rnk == rows:
            break
    return rnk


def det_int(matrix) -> int:
    """Determinant of a square integer matrix (Bareiss); det of the 0x0 matrix is 1."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for r in range(k + 1, n):
            for c in range(k + 1, n):
                m[r][c] = (m[k][k] * m[r][c] - m[r][k] * m[k][c]) // prev
            m[r][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank(matrix) -> int:
    """Rank of a matrix with int/Fraction entries."""
    m = [[Fraction(x) for x in row] for row in matrix]
    if not m or not m[0]:
        return 0
    rows, cols = len(m), len(m[0])
    rnk = 0
    for col in range(cols):
        pivot_row = next((r for r in range(rnk, rows) if m[r][col] != 0), None)
        if pivot_row is None:
            continue
        m[rnk], m[pivot_row] = m[pivot_row], m[rnk]
        inv = m[rnk][col]
        m[rnk] = [x / inv for x in m[rnk]]
        for r in range(rows):
            if r != rnk and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[rnk])]
        rnk += 1
        if rnk == rows:
            break
    return rnk


def solve(matrix, rhs) -> list[Fraction] | None:
    """One exact solution of A x = b, or None when the system is inconsistent.

    Free variables are set to zero.  A has arbitrary shape.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    pivots = []
    rnk = 0
    for col in range(cols):
        pivot_row = next((r for r in range(rnk, rows) if aug[r][col] != 0), None)
        if pivot_row is None:
            continue
        aug[rnk], aug[pivot_row] = aug[pivot_row], aug[rnk]
        inv = aug[rnk][col]
        aug[rnk] = [x / inv for x in aug[rnk]]
        for r in range(rows):
            if r != rnk and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[rnk])]
        pivots.append(col)
        rnk += 1
        if rnk == rows:
            break
    for r in range(rnk, rows):
        if aug[r][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for r, col in enumerate(pivots):
        x[col] = aug[r][cols]
    return x


def solve_square(matrix, rhs) -> list[Fraction] | None:
    """Unique solution of a square system, or None when the matrix is singular."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix is not square")
    if n == 0:
        return []
    if rank(matrix) < n:
        return None
    return solve(matrix, rhs)


def affine_rank(points) -> int:
    """Dimension of the affine hull of a set of points (-1 for the empty set)."""
    pts = [list(p) for p in points]
    if not pts:
        return -1
    base = pts[0]
    diffs = [[x - b for x, b in zip(p, base)] for p in pts[1:]]
    return rank(diffs) if diffs else 0


def vector_gcd(vector) -> int:
    """gcd of the absolute values of an integer vector; 0 for the zero vector."""
    g = 0
    for x in vector:
        g = gcd(g, abs(int(x)))
    return g
