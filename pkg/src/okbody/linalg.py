"""Small exact linear algebra over the rationals.

Matrices are lists of rows; entries are converted to ``Fraction`` on entry.
Everything here is dimension-agnostic but only ever used on tiny systems
(Gram matrices of a handful of curves, 3x3 orientation tests), so plain
Gauss-Jordan elimination is all we need.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    a = to_matrix(rows)
    if not a:
        return a, []
    n_rows, n_cols = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], n_cols: int | None = None) -> Matrix:
    """Basis of {x : A x = 0}."""
    if not rows:
        if n_cols is None:
            raise ValueError("cannot infer column count of an empty matrix")
        return [[Fraction(int(i == j)) for j in range(n_cols)] for i in range(n_cols)]
    red, pivots = rref(rows)
    n = len(red[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(v)
    return basis


def det(rows: Sequence[Sequence]) -> Fraction:
    a = to_matrix(rows)
    n = len(a)
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            result = -result
        result *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve the square nonsingular system A x = b."""
    n = len(rows)
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [red[i][n] for i in range(n)]


def inverse(rows: Sequence[Sequence]) -> Matrix:
    n = len(rows)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(rows)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def mat_vec(rows: Sequence[Sequence], v: Sequence) -> list:
    return [sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in rows]


def bilinear(u: Sequence, gram: Sequence[Sequence], v: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(u, mat_vec(gram, v))), Fraction(0))


def is_negative_definite(rows: Sequence[Sequence]) -> bool:
    """Sylvester's criterion applied to -A."""
    n = len(rows)
    neg = [[-Fraction(x) for x in row] for row in rows]
    return all(det([r[:k] for r in neg[:k]]) > 0 for k in range(1, n + 1))
