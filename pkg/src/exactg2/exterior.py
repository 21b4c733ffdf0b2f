"""Alternating forms on R^n (n <= 7) with exact coefficients.

A ``KForm`` is a sparse map from strictly increasing index tuples (1-based) to
scalars.  Endomorphisms are square matrices ``M`` acting on basis vectors by
``e_j -> sum_i M[i][j] e_i``; the dual action on covectors and the derivation
action carry the sign conventions documented on ``endo_action`` and ``pullback``.
"""

from __future__ import annotations

import ast
import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .scalars import QSqrt, format_scalar, is_zero, to_scalar

MAX_DIM = 7

MultiIndex = tuple[int, ...]


class DimensionError(ValueError):
    """Ambient dimensions or degrees do not fit together."""


class FormParseError(ValueError):
    """Text could not be read as a form."""


def sort_sign(idx: Sequence[int]) -> tuple[int, MultiIndex]:
    """Sign of the permutation sorting ``idx`` and the sorted tuple; sign 0 on repeats."""
    if len(set(idx)) != len(idx):
        return 0, ()
    inv = sum(1 for a, b in itertools.combinations(idx, 2) if a > b)
    return (-1 if inv % 2 else 1), tuple(sorted(idx))


def complement(idx: MultiIndex, n: int) -> MultiIndex:
    s = set(idx)
    return tuple(i for i in range(1, n + 1) if i not in s)


def shuffle_sign(i: MultiIndex, j: MultiIndex) -> int:
    """Sign of e^I wedge e^J relative to e^{I u J}; 0 if they overlap."""
    return sort_sign(i + j)[0]


@dataclass(frozen=True)
class KForm:
    """Alternating k-form on an n-dimensional space; zero coefficients are never stored."""

    n: int
    k: int
    terms: Mapping[MultiIndex, object] = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.n <= MAX_DIM:
            raise DimensionError(f"ambient dimension {self.n} outside 0..{MAX_DIM}")
        if self.k < 0:
            raise DimensionError("negative degree")
        clean = {}
        for idx, c in self.terms.items():
            idx = tuple(idx)
            if len(idx) != self.k or any(not 1 <= i <= self.n for i in idx):
                raise DimensionError(f"index {idx} invalid for a {self.k}-form on R^{self.n}")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise DimensionError(f"index {idx} is not strictly increasing")
            c = to_scalar(c)
            if not is_zero(c):
                clean[idx] = c
        object.__setattr__(self, "terms", clean)

    # construction helpers
    @classmethod
    def zero(cls, n: int, k: int) -> KForm:
        return cls(n, k, {})

    @classmethod
    def scalar(cls, n: int, c) -> KForm:
        return cls(n, 0, {(): c})

    @classmethod
    def monomial(cls, n: int, idx: Sequence[int], c=1) -> KForm:
        """``c * e^{idx}``; unsorted indices are sorted with the permutation sign."""
        s, srt = sort_sign(tuple(idx))
        if s == 0:
            return cls(n, len(idx), {})
        return cls(n, len(idx), {srt: s * to_scalar(c)})

    @classmethod
    def from_vector(cls, n: int, k: int, vec: Sequence) -> KForm:
        return cls(n, k, dict(zip(basis_indices(n, k), vec)))

    def to_vector(self) -> list:
        return [self.terms.get(i, Fraction(0)) for i in basis_indices(self.n, self.k)]

    # inspection
    def coeff(self, idx: Sequence[int]):
        s, srt = sort_sign(tuple(idx))
        if s == 0:
            return Fraction(0)
        return s * self.terms.get(srt, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def top_coeff(self):
        """Coefficient against e^{1..n} of a top-degree form."""
        if self.k != self.n:
            raise DimensionError(f"{self.k}-form is not top degree on R^{self.n}")
        return self.terms.get(tuple(range(1, self.n + 1)), Fraction(0))

    # vector space structure
    def _check(self, other: KForm):
        if not isinstance(other, KForm):
            raise TypeError(f"expected KForm, got {type(other).__name__}")
        if other.n != self.n or other.k != self.k:
            raise DimensionError(
                f"cannot add a {other.k}-form on R^{other.n} to a {self.k}-form on R^{self.n}"
            )

    def __add__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for i, c in other.terms.items():
            out[i] = out.get(i, 0) + c
        return KForm(self.n, self.k, out)

    def __neg__(self):
        return KForm(self.n, self.k, {i: -c for i, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, KForm):
            return NotImplemented
        c = to_scalar(c)
        return KForm(self.n, self.k, {i: c * v for i, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / to_scalar(c))

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        if (self.n, self.k) != (other.n, other.k):
            return False
        keys = set(self.terms) | set(other.terms)
        return all(is_zero(self.terms.get(i, 0) - other.terms.get(i, 0)) for i in keys)

    def __hash__(self):
        return hash((self.n, self.k, frozenset(self.terms.items())))

    def map_coeffs(self, fn) -> KForm:
        return KForm(self.n, self.k, {i: fn(c) for i, c in self.terms.items()})

    def with_dim(self, n: int) -> KForm:
        """Same coefficients viewed on R^n (n must cover every index used)."""
        return KForm(n, self.k, self.terms)

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"KForm({self.n}, {self.k}, {render(self)!r})"


def basis_indices(n: int, k: int) -> list[MultiIndex]:
    return list(itertools.combinations(range(1, n + 1), k))


def basis(n: int, k: int) -> list[KForm]:
    return [KForm(n, k, {i: 1}) for i in basis_indices(n, k)]


def e(n: int, *idx: int) -> KForm:
    """Shorthand ``e(6, 1, 3, 5)`` for e^{135} on R^6."""
    return KForm.monomial(n, idx)


def render(a: KForm) -> str:
    """Canonical text: ``-2/3*e^{13} + e^{24}``, lexicographic terms, ``0`` for zero."""
    if not a.terms:
        return "0"
    parts = []
    for idx in sorted(a.terms):
        c = a.terms[idx]
        mono = "e^{" + "".join(str(i) for i in idx) + "}" if idx else ""
        neg = _is_negative_literal(c)
        mag = -c if neg else c
        if not mono:
            body = format_scalar(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_scalar(mag)}*{mono}"
        parts.append(("-" if neg else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, b in parts[1:]:
        out += f" {s} {b}"
    return out


def _is_negative_literal(c) -> bool:
    if isinstance(c, QSqrt):
        return c.a < 0 if c.a != 0 else c.b < 0
    return c < 0


# ---------------------------------------------------------------------------
# products


def wedge(a: KForm, b: KForm) -> KForm:
    if a.n != b.n:
        raise DimensionError(f"wedge of forms on R^{a.n} and R^{b.n}")
    out: dict = {}
    for i, ca in a.terms.items():
        for j, cb in b.terms.items():
            s, idx = sort_sign(i + j)
            if s:
                out[idx] = out.get(idx, 0) + s * ca * cb
    return KForm(a.n, a.k + b.k, out) if a.k + b.k <= a.n else KForm(a.n, a.k + b.k, {})


def wedge_all(*forms: KForm) -> KForm:
    acc = forms[0]
    for f in forms[1:]:
        acc = wedge(acc, f)
    return acc


def power(a: KForm, m: int) -> KForm:
    if m == 0:
        return KForm.scalar(a.n, 1)
    acc = a
    for _ in range(m - 1):
        acc = wedge(acc, a)
    return acc


def contract(v: Sequence, a: KForm) -> KForm:
    """Interior product ``v ⌟ a`` with v given by its n components."""
    if len(v) != a.n:
        raise DimensionError(f"vector of length {len(v)} on R^{a.n}")
    if a.k == 0:
        raise DimensionError("cannot contract a vector into a 0-form")
    out: dict = {}
    for idx, c in a.terms.items():
        for m, i in enumerate(idx):
            vi = v[i - 1]
            if is_zero(vi):
                continue
            rest = idx[:m] + idx[m + 1 :]
            val = c * vi if m % 2 == 0 else -(c * vi)
            out[rest] = out.get(rest, 0) + val
    return KForm(a.n, a.k - 1, out)


def unit(n: int, i: int) -> list:
    """Standard basis vector e_i (1-based) as a component list."""
    return [Fraction(int(j == i - 1)) for j in range(n)]


def evaluate(a: KForm, vectors: Sequence[Sequence]):
    """Value of a on k vectors (determinant convention: e^{12}(e_1,e_2) = 1)."""
    if len(vectors) != a.k:
        raise DimensionError(f"{a.k}-form evaluated on {len(vectors)} vectors")
    total = Fraction(0)
    for idx, c in a.terms.items():
        m = [[vectors[col][i - 1] for col in range(a.k)] for i in idx]
        total = total + c * linalg.det(m)
    return total


def endo_action(f: Sequence[Sequence], a: KForm) -> KForm:
    """Derivation action ``f.a`` with the global minus sign.

    On covectors ``f.e^i = -sum_j f[i][j] e^j``, i.e. ``(f.a)(X) = -a(f X)``,
    extended to all degrees as a derivation.  Hence ``id.a = -k a``.
    """
    n = a.n
    if len(f) != n:
        raise DimensionError(f"{len(f)}x{len(f)} endomorphism on R^{n}")
    out: dict = {}
    for idx, c in a.terms.items():
        for m, i in enumerate(idx):
            row = f[i - 1]
            for j in range(1, n + 1):
                fij = row[j - 1]
                if is_zero(fij):
                    continue
                new = idx[:m] + (j,) + idx[m + 1 :]
                s, srt = sort_sign(new)
                if s:
                    out[srt] = out.get(srt, 0) - s * fij * c
    return KForm(n, a.k, out)


def covector_images(F: Sequence[Sequence], n: int) -> list[KForm]:
    """``F^* e^i = sum_j F[i][j] e^j`` for each i."""
    return [KForm(n, 1, {(j + 1,): F[i][j] for j in range(n)}) for i in range(n)]


def pullback(F: Sequence[Sequence], a: KForm) -> KForm:
    """Pullback ``F^* a = a(F., ..., F.)``; contravariant, so (FG)^* = G^* F^*."""
    n = a.n
    if len(F) != n:
        raise DimensionError(f"{len(F)}x{len(F)} map on R^{n}")
    if a.k == 0:
        return a
    images = covector_images(F, n)
    out = KForm.zero(n, a.k)
    for idx, c in a.terms.items():
        term = images[idx[0] - 1]
        for i in idx[1:]:
            term = wedge(term, images[i - 1])
        out = out + c * term
    return out


# ---------------------------------------------------------------------------
# coframes and Hodge star


@dataclass(frozen=True)
class Coframe:
    """Ordered one-forms declared orthonormal and positively oriented."""

    forms: tuple

    def __post_init__(self):
        forms = tuple(self.forms)
        object.__setattr__(self, "forms", forms)
        if not forms:
            raise DimensionError("empty coframe")
        n = forms[0].n
        if len(forms) != n or any(f.n != n or f.k != 1 for f in forms):
            raise DimensionError("a coframe needs n one-forms on R^n")
        if is_zero(linalg.det(self.matrix)):
            raise DimensionError("coframe one-forms are linearly dependent")

    @property
    def n(self) -> int:
        return self.forms[0].n

    @property
    def matrix(self) -> list[list]:
        """C with theta^a = sum_j C[a][j] e^j."""
        return [[f.coeff((j,)) for j in range(1, self.n + 1)] for f in self.forms]

    @classmethod
    def standard(cls, n: int) -> Coframe:
        return cls(tuple(e(n, i) for i in range(1, n + 1)))

    def metric(self) -> list[list]:
        """Gram matrix g = C^T C of the metric making the coframe orthonormal."""
        c = self.matrix
        return linalg.matmul(linalg.transpose(c), c)

    def volume(self) -> KForm:
        return wedge_all(*self.forms)

    def to_coframe_coords(self, a: KForm) -> KForm:
        """Coefficients of a against theta monomials (returned as e-monomials)."""
        return pullback(linalg.inverse(self.matrix), a)

    def from_coframe_coords(self, a: KForm) -> KForm:
        return pullback(self.matrix, a)


def standard_star(a: KForm) -> KForm:
    n = a.n
    out = {}
    for idx, c in a.terms.items():
        comp = complement(idx, n)
        out[comp] = shuffle_sign(idx, comp) * c
    return KForm(n, n - a.k, out)


def hodge_star(a: KForm, c: Coframe) -> KForm:
    """Hodge star of the metric and orientation for which ``c`` is an oriented orthonormal coframe."""
    if c.n != a.n:
        raise DimensionError(f"coframe on R^{c.n}, form on R^{a.n}")
    return c.from_coframe_coords(standard_star(c.to_coframe_coords(a)))


def hodge_star_metric(a: KForm, ginv: Sequence[Sequence], vol_coeff) -> KForm:
    """Hodge star from the inverse metric and the volume form ``vol_coeff * e^{1..n}``.

    Uses ``*e^I = vol_coeff * sum_K det(ginv[K, I]) sign(K, K^c) e^{K^c}``, which
    needs no square roots once the volume coefficient is known.
    """
    n, k = a.n, a.k
    out: dict = {}
    ks = basis_indices(n, k)
    for idx, c in a.terms.items():
        for kk in ks:
            m = [[ginv[r - 1][s - 1] for s in idx] for r in kk]
            g = linalg.det(m) if k else Fraction(1)
            if is_zero(g):
                continue
            comp = complement(kk, n)
            out[comp] = out.get(comp, 0) + shuffle_sign(kk, comp) * g * c * vol_coeff
    return KForm(n, n - k, out)


def inner_product(a: KForm, b: KForm, ginv: Sequence[Sequence]):
    """Induced metric on k-forms: sum over I, K of a_I b_K det(ginv[I, K])."""
    if (a.n, a.k) != (b.n, b.k):
        raise DimensionError("inner product of forms of different type")
    total = Fraction(0)
    for i, ca in a.terms.items():
        for kk, cb in b.terms.items():
            m = [[ginv[r - 1][s - 1] for s in kk] for r in i]
            total = total + ca * cb * (linalg.det(m) if a.k else 1)
    return total


# ---------------------------------------------------------------------------
# six-dimensional kappa


def kappa(v: Sequence) -> KForm:
    """``v ⌟ e^{1..n}``."""
    n = len(v)
    return contract(v, KForm(n, n, {tuple(range(1, n + 1)): 1}))


def kappa_inv(a: KForm) -> list:
    """The unique v with ``v ⌟ e^{123456} = a`` for a 5-form a on R^6."""
    if a.n != 6 or a.k != 5:
        raise DimensionError(f"kappa_inv needs a 5-form on R^6, got a {a.k}-form on R^{a.n}")
    v = [Fraction(0)] * 6
    for i in range(1, 7):
        c = a.terms.get(complement((i,), 6), 0)
        v[i - 1] = c if i % 2 == 1 else -c
    return v


# ---------------------------------------------------------------------------
# text input

_MONO = re.compile(r"e\^?\{?(\d+)\}?")


class _FormEval(ast.NodeVisitor):
    def __init__(self, n: int, sqrt_d: int | None):
        self.n = n
        self.sqrt_d = sqrt_d

    def run(self, node):
        return self.visit(node)

    def visit_Expression(self, node):
        return self.visit(node.body)

    def visit_Constant(self, node):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise FormParseError(f"unsupported literal {node.value!r}")
        if isinstance(node.value, float):
            raise FormParseError("decimal literals are not exact; write a fraction like 3/2")
        return Fraction(node.value)

    def visit_Name(self, node):
        name = node.id
        m = re.fullmatch(r"e(\d+)", name)
        if m:
            digits = tuple(int(ch) for ch in m.group(1))
            if any(not 1 <= d <= self.n for d in digits):
                raise FormParseError(f"{name}: index outside 1..{self.n}")
            if len(set(digits)) != len(digits):
                raise FormParseError(f"{name}: repeated index")
            return KForm.monomial(self.n, digits)
        m = re.fullmatch(r"sqrt(\d+)", name)
        if m:
            d = int(m.group(1))
            if self.sqrt_d is None or d != self.sqrt_d:
                raise FormParseError(
                    f"{name} needs the field Q(sqrt {d}); select it explicitly"
                )
            return QSqrt(0, 1, d)
        raise FormParseError(f"unknown name {name!r}")

    def visit_UnaryOp(self, node):
        v = self.visit(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
        raise FormParseError("unsupported unary operator")

    def visit_BinOp(self, node):
        lhs, rhs = self.visit(node.left), self.visit(node.right)
        lf, rf = isinstance(lhs, KForm), isinstance(rhs, KForm)
        op = node.op
        if isinstance(op, (ast.Add, ast.Sub)):
            if lf != rf:
                if lf and lhs.k == 0:
                    rhs, rf = KForm.scalar(self.n, rhs), True
                elif rf and rhs.k == 0:
                    lhs, lf = KForm.scalar(self.n, lhs), True
                else:
                    raise FormParseError("cannot add a scalar to a form of positive degree")
            if lf and lhs.k != rhs.k:
                raise FormParseError(f"mixed degrees {lhs.k} and {rhs.k} in a sum")
            return lhs + rhs if isinstance(op, ast.Add) else lhs - rhs
        if isinstance(op, ast.Mult):
            if lf and rf:
                return wedge(lhs, rhs)
            return lhs * rhs
        if isinstance(op, ast.Div):
            if rf:
                raise FormParseError("cannot divide by a form")
            return lhs / rhs
        if isinstance(op, ast.Pow):
            if lf or rf or not isinstance(rhs, Fraction) or rhs.denominator != 1:
                raise FormParseError("only integer powers of scalars are supported")
            return lhs ** int(rhs)
        raise FormParseError("unsupported operator")

    def generic_visit(self, node):
        raise FormParseError(f"unsupported syntax: {type(node).__name__}")


def parse_form(text: str, n: int, sqrt_d: int | None = None) -> KForm:
    """Read a form such as ``e135 - e146``, ``-2/3*e^{13} + e^{24}`` or ``(1+sqrt5)/2*e12``.

    ``*`` between two forms is the wedge product.  ``sqrt<d>`` literals are
    accepted only when ``sqrt_d`` selects that field.
    """
    if not text or not text.strip():
        raise FormParseError("empty form")
    src = _MONO.sub(lambda m: "e" + m.group(1), text.strip())
    src = src.replace("∧", "*").replace("−", "-")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise FormParseError(f"cannot parse {text!r}: {exc.msg}") from None
    val = _FormEval(n, sqrt_d).run(tree)
    if not isinstance(val, KForm):
        val = KForm.scalar(n, val)
    return val


def forms_matrix(forms: Iterable[KForm]) -> list[list]:
    """Rows are the coefficient vectors of the given forms (all of the same type)."""
    return [f.to_vector() for f in forms]
