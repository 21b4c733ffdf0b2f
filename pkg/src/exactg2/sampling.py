"""Seeded generators of exact random data for the property and refutation checks."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from . import linalg
from .exterior import KForm, basis_indices
from .liealg import LieAlgebra, derivation_equations, derivation_space, exp_nilpotent
from .scalars import is_zero


def rand_fraction(rng: random.Random, bound: int = 6, denom: int = 4, nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(rng.randint(-bound * denom, bound * denom), rng.randint(1, denom))
        if q or not nonzero:
            return q


def rand_vector(rng, n: int, **kw) -> list:
    return [rand_fraction(rng, **kw) for _ in range(n)]


def rand_matrix(rng, n: int, m: int | None = None, **kw) -> list[list]:
    return [rand_vector(rng, m or n, **kw) for _ in range(n)]


def rand_invertible(rng, n: int, **kw) -> list[list]:
    while True:
        m = rand_matrix(rng, n, **kw)
        if not is_zero(linalg.det(m)):
            return m


def rand_form(rng, n: int, k: int, density: float = 0.6, **kw) -> KForm:
    terms = {}
    for idx in basis_indices(n, k):
        if rng.random() < density:
            terms[idx] = rand_fraction(rng, **kw)
    return KForm(n, k, terms)


def rand_combination(rng, mats: Sequence, **kw) -> list[list]:
    """Random linear combination of equally shaped matrices."""
    if not mats:
        raise ValueError("empty family")
    rows, cols = len(mats[0]), len(mats[0][0])
    out = [[Fraction(0)] * cols for _ in range(rows)]
    for m in mats:
        t = rand_fraction(rng, **kw)
        if t:
            out = linalg.add(out, linalg.scale(t, m))
    return out


def rand_derivation(rng, L: LieAlgebra, **kw) -> list[list]:
    return rand_combination(rng, derivation_space(L), **kw)


def _restricted_derivations(L: LieAlgebra, allowed) -> list[list[list]]:
    """Basis of derivations whose nonzero entries lie in the allowed (row, col) positions."""
    n = L.n
    eqs = derivation_equations(L)
    for a in range(n):
        for i in range(n):
            if not allowed(a, i):
                row = [Fraction(0)] * (n * n)
                row[a * n + i] = Fraction(1)
                eqs.append(row)
    vecs = linalg.nullspace(eqs)
    return [[v[a * n : (a + 1) * n] for a in range(n)] for v in vecs]


def rand_automorphism(rng, L: LieAlgebra, bound: int = 2) -> list[list]:
    """Product of a rational diagonal automorphism and exponentials of nilpotent derivations.

    Assumes the differentials only involve lower indices (true for Salamon
    notation), so strictly lower triangular derivations are nilpotent.
    """
    n = L.n
    lower = _restricted_derivations(L, lambda a, i: a > i)
    diag = _restricted_derivations(L, lambda a, i: a == i)
    F = linalg.identity(n)
    if diag:
        # scale a random integer diagonal derivation and exponentiate with base t
        d = [Fraction(0)] * n
        for D in diag:
            t = rng.randint(-2, 2)
            d = [x + t * D[i][i] for i, x in enumerate(d)]
        den = 1
        for x in d:
            den = den * x.denominator // _gcd(den, x.denominator)
        t = Fraction(rng.choice([1, 2, 3]), rng.choice([1, 2]))
        if rng.random() < 0.3:
            t = -t
        exps = [int(x * den) for x in d]
        F = [[(t**exps[i] if i == j else Fraction(0)) for j in range(n)] for i in range(n)]
    for _ in range(2):
        if lower:
            N = rand_combination(rng, lower, bound=bound, denom=2)
            F = linalg.matmul(F, exp_nilpotent(N))
    return F


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a
