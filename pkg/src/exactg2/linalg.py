"""Exact linear algebra over a field, with matrices as lists of row lists.

Entries may be Fractions, ``QSqrt`` values or floats; pivoting uses
``is_zero`` so the float path tolerates rounding noise.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .scalars import is_zero, sign

Matrix = list[list]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def copy(m: Sequence[Sequence]) -> Matrix:
    return [list(r) for r in m]


def transpose(m: Sequence[Sequence]) -> Matrix:
    if not m:
        return []
    return [list(c) for c in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(r, c)), Fraction(0)) for c in bt] for r in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(r, v)), Fraction(0)) for r in a]


def add(a, b) -> Matrix:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def sub(a, b) -> Matrix:
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def scale(c, a) -> Matrix:
    return [[c * x for x in r] for r in a]


def commutator(a, b) -> Matrix:
    return sub(matmul(a, b), matmul(b, a))


def trace(a) -> object:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def is_zero_matrix(a) -> bool:
    return all(is_zero(x) for r in a for x in r)


def rref(m: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = None
        if a and isinstance(a[0][0], float):
            best = 0.0
            for i in range(r, rows):
                if not is_zero(a[i][c]) and abs(a[i][c]) > best:
                    best, p = abs(a[i][c]), i
        else:
            for i in range(r, rows):
                if not is_zero(a[i][c]):
                    p = i
                    break
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and not is_zero(a[i][c]):
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def nullspace(m: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Basis of {x : m x = 0}."""
    if not m:
        n = ncols or 0
        return identity(n)
    n = len(m[0])
    red, piv = rref(m)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(piv):
            v[pc] = -red[i][fc]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list | None:
    """One solution of a x = b, or None when inconsistent."""
    n = len(a[0]) if a else 0
    aug = [list(r) + [bb] for r, bb in zip(a, b)]
    red, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, pc in enumerate(piv):
        x[pc] = red[i][n]
    return x


def det(m: Sequence[Sequence]):
    n = len(m)
    if n == 0:
        return Fraction(1)
    a = copy(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if not is_zero(a[i][c])), None)
        if p is None:
            return Fraction(0) if not isinstance(a[0][0], float) else 0.0
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d = d * a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if not is_zero(a[i][c]):
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def inverse(m: Sequence[Sequence]) -> Matrix:
    n = len(m)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [r[n:] for r in red]


def is_symmetric(m) -> bool:
    n = len(m)
    return all(is_zero(m[i][j] - m[j][i]) for i in range(n) for j in range(i))


def is_positive_definite(m) -> bool:
    """Exact test via symmetric Gaussian elimination (LDL^T pivots all positive)."""
    if not is_symmetric(m):
        return False
    a = copy(m)
    n = len(a)
    for c in range(n):
        if sign(a[c][c]) <= 0:
            return False
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] * inv
            if not is_zero(f):
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return True


def span_contains(basis: Sequence[Sequence], v: Sequence) -> bool:
    if not basis:
        return all(is_zero(x) for x in v)
    return rank(list(basis) + [list(v)]) == rank(basis)


def block_diag(*blocks) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = zeros(n, n)
    o = 0
    for b in blocks:
        for i, r in enumerate(b):
            for j, x in enumerate(r):
                out[o + i][o + j] = x
        o += len(b)
    return out
