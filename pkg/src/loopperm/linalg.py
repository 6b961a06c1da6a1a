"""Small exact linear algebra over Fractions (Gaussian elimination).

Dimensions here stay tiny (a dozen or so), so O(n^3) elimination with exact
rationals is both fast enough and the point: downstream determinant
identities are asserted with zero tolerance.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import ConsistencyError


def exact_det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(rows)
    a = [list(r) for r in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if a[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col] * inv
            if factor:
                for c in range(col, n):
                    a[r][c] -= factor * a[col][c]
    return det


def exact_solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    n = len(rows)
    a = [list(r) + [Fraction(b)] for r, b in zip(rows, rhs)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if a[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            raise ConsistencyError("singular system in exact solve")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        for c in range(col, n + 1):
            a[col][c] *= inv
        for r in range(n):
            if r != col and a[r][col]:
                factor = a[r][col]
                for c in range(col, n + 1):
                    a[r][c] -= factor * a[col][c]
    return [a[r][n] for r in range(n)]


def exact_inverse(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(rows)
    a = [list(r) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i, r in enumerate(rows)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if a[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            raise ConsistencyError("singular matrix in exact inverse")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        for c in range(2 * n):
            a[col][c] *= inv
        for r in range(n):
            if r != col and a[r][col]:
                factor = a[r][col]
                for c in range(2 * n):
                    a[r][c] -= factor * a[col][c]
    return [row[n:] for row in a]
