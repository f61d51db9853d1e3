"""Small exact integer matrix helpers.

Matrices are tuples of row tuples. Everything here is exact; the sizes
involved (n <= 4 or so) never justify a numeric backend.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    m = tuple(tuple(int(v) for v in row) for row in rows)
    if m and any(len(row) != len(m[0]) for row in m):
        raise ValueError("ragged matrix")
    return m


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def matvec(a: Matrix, v: Sequence[int]) -> Vector:
    """Column action a @ v."""
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vecmat(v: Sequence[int], a: Matrix) -> Vector:
    """Row action v @ a."""
    n = len(a[0]) if a else 0
    return tuple(sum(v[i] * a[i][j] for i in range(len(v))) for j in range(n))


def det(a: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inverse_unimodular(a: Matrix) -> Matrix:
    """Exact inverse of an integer matrix with determinant +-1."""
    n = len(a)
    if abs(det(a)) != 1:
        raise ValueError("matrix is not unimodular")
    m = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    out = []
    for row in m:
        right = row[n:]
        if any(v.denominator != 1 for v in right):
            raise ValueError("inverse is not integral")
        out.append(tuple(int(v) for v in right))
    return tuple(out)


def matpow(a: Matrix, k: int, inv: Matrix | None = None) -> Matrix:
    """a**k for any integer k; negative powers need a unimodular a."""
    if k < 0:
        a = inv if inv is not None else inverse_unimodular(a)
        k = -k
    result = identity(len(a))
    base = a
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()
