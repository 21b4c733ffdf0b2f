"""Lie algebras given by the differentials of their dual basis (Salamon notation).

The differential list is the source of truth.  Structure constants follow from
``de^k(e_i, e_j) = -e^k([e_i, e_j])``, so a token ``ab`` in entry k means
``[e_a, e_b]`` has e_k-component -1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .exterior import KForm, DimensionError, basis_indices, endo_action, render, sort_sign, wedge
from .scalars import format_scalar, is_zero


class NotationError(ValueError):
    """Base class for Salamon-notation problems."""


class MalformedTokenError(NotationError):
    pass


class RepeatedIndexError(NotationError):
    pass


class JacobiError(NotationError):
    """The differentials do not square to zero, so there is no Lie algebra."""

    def __init__(self, message: str, residuals: dict | None = None):
        super().__init__(message)
        self.residuals = residuals or {}


class NotADerivationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Lie algebra on R^n with ``diffs[i] = d e^{i+1}``."""

    n: int
    diffs: tuple
    name: str | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        diffs = tuple(self.diffs)
        object.__setattr__(self, "diffs", diffs)
        if len(diffs) != self.n:
            raise DimensionError(f"{len(diffs)} differentials for dimension {self.n}")
        for d in diffs:
            if d.n != self.n or d.k != 2:
                raise DimensionError("each de^i must be a 2-form on the same space")

    def __eq__(self, other):
        return isinstance(other, LieAlgebra) and self.diffs == other.diffs

    def __hash__(self):
        return hash(self.diffs)

    @property
    def structure_constants(self) -> list:
        """``c[k][i][j]`` with ``[e_i, e_j] = sum_k c[k][i][j] e_k`` (0-based)."""
        c = self._cache.get("c")
        if c is None:
            n = self.n
            c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
            for k, d in enumerate(self.diffs):
                for (i, j), v in d.terms.items():
                    c[k][i - 1][j - 1] = -v
                    c[k][j - 1][i - 1] = v
            self._cache["c"] = c
        return c

    def bracket(self, x: Sequence, y: Sequence) -> list:
        c = self.structure_constants
        n = self.n
        out = []
        for k in range(n):
            ck = c[k]
            s = Fraction(0)
            for i in range(n):
                if is_zero(x[i]):
                    continue
                row = ck[i]
                for j in range(n):
                    if not is_zero(row[j]) and not is_zero(y[j]):
                        s = s + x[i] * y[j] * row[j]
            out.append(s)
        return out

    def ad(self, x: Sequence) -> list[list]:
        """Matrix of ad_x in the endomorphism convention e_j -> sum_i M[i][j] e_i."""
        cols = [self.bracket(x, _unit(self.n, j)) for j in range(self.n)]
        return linalg.transpose(cols)

    def d(self, a: KForm) -> KForm:
        return ce_differential(self, a)

    def d_squared_residuals(self) -> dict[int, KForm]:
        out = {}
        for i, di in enumerate(self.diffs):
            r = ce_differential(self, di)
            if r:
                out[i + 1] = r
        return out

    def is_lie(self) -> bool:
        return not self.d_squared_residuals()

    def notation(self) -> str:
        return render_notation(self)

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return f"LieAlgebra({label}{render_notation(self)})"


def _unit(n: int, j: int) -> list:
    return [Fraction(int(i == j)) for i in range(n)]


def from_differentials(diffs: Sequence[KForm], name: str | None = None, check: bool = True) -> LieAlgebra:
    L = LieAlgebra(len(diffs), tuple(diffs), name)
    if check:
        res = L.d_squared_residuals()
        if res:
            detail = ", ".join(f"d(de^{i}) = {render(r)}" for i, r in res.items())
            raise JacobiError(f"d^2 != 0: {detail}", res)
    return L


def abelian(n: int, name: str | None = None) -> LieAlgebra:
    return LieAlgebra(n, tuple(KForm.zero(n, 2) for _ in range(n)), name)


_TOKEN = re.compile(r"([+-]?)\s*(\d+)")


def parse_notation(s: str, name: str | None = None) -> LieAlgebra:
    """Parse ``(0,0,12,13,14+23,34-25)``; ``ab`` is e^a wedge e^b, so ``42`` is -e^{24}."""
    if s is None or not s.strip():
        raise MalformedTokenError("empty notation")
    text = s.strip().replace("−", "-").replace(" ", "")
    if not (text.startswith("(") and text.endswith(")")):
        raise MalformedTokenError(f"notation must be a parenthesized tuple: {s!r}")
    entries = text[1:-1].split(",")
    n = len(entries)
    if n > 7 or n == 0 or entries == [""]:
        raise MalformedTokenError(f"need between 1 and 7 entries, got {n}")
    diffs = []
    for pos, entry in enumerate(entries, start=1):
        if entry == "0":
            diffs.append(KForm.zero(n, 2))
            continue
        if not entry or not re.fullmatch(r"[+-]?\d+([+-]\d+)*", entry):
            raise MalformedTokenError(f"entry {pos}: cannot read {entry!r}")
        acc = KForm.zero(n, 2)
        for sgn, tok in _TOKEN.findall(entry):
            if len(tok) != 2:
                raise MalformedTokenError(f"entry {pos}: token {tok!r} is not two digits")
            a, b = int(tok[0]), int(tok[1])
            if a == b:
                raise RepeatedIndexError(f"entry {pos}: token {tok!r} repeats an index")
            if not (1 <= a <= n and 1 <= b <= n):
                raise MalformedTokenError(f"entry {pos}: token {tok!r} outside 1..{n}")
            mono = KForm.monomial(n, (a, b))
            acc = acc - mono if sgn == "-" else acc + mono
        diffs.append(acc)
    return from_differentials(diffs, name)


def render_notation(L: LieAlgebra) -> str:
    parts = []
    for d in L.diffs:
        if not d.terms:
            parts.append("0")
            continue
        s = ""
        for (i, j), c in sorted(d.terms.items()):
            neg = c < 0 if not hasattr(c, "sign") else c.sign() < 0
            mag = -c if neg else c
            coef = "" if mag == 1 else f"{format_scalar(mag)}*"
            s += ("-" if neg else ("+" if s else "")) + f"{coef}{i}{j}"
        parts.append(s)
    return "(" + ",".join(parts) + ")"


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg differential


def _d_monomial(L: LieAlgebra, idx: tuple) -> dict:
    cache = L._cache.setdefault("dmono", {})
    hit = cache.get(idx)
    if hit is not None:
        return hit
    out: dict = {}
    for m, i in enumerate(idx):
        di = L.diffs[i - 1]
        sm = -1 if m % 2 else 1
        for (p, q), c in di.terms.items():
            s, srt = sort_sign(idx[:m] + (p, q) + idx[m + 1 :])
            if s:
                out[srt] = out.get(srt, 0) + sm * s * c
    out = {k: v for k, v in out.items() if not is_zero(v)}
    cache[idx] = out
    return out


def ce_differential(L: LieAlgebra, a: KForm) -> KForm:
    """Chevalley-Eilenberg differential, the antiderivation extending e^i -> de^i."""
    if a.n != L.n:
        raise DimensionError(f"form on R^{a.n}, algebra of dimension {L.n}")
    if a.k >= L.n:
        return KForm.zero(L.n, a.k + 1) if a.k + 1 <= L.n else KForm(L.n, a.k + 1, {})
    out: dict = {}
    for idx, c in a.terms.items():
        for j, v in _d_monomial(L, idx).items():
            out[j] = out.get(j, 0) + c * v
    return KForm(L.n, a.k + 1, out)


def d_matrix(L: LieAlgebra, k: int) -> list[list]:
    """Matrix of d: Lambda^k -> Lambda^{k+1}; column c is d of the c-th basis monomial."""
    rows = basis_indices(L.n, k + 1)
    cols = basis_indices(L.n, k)
    pos = {r: i for i, r in enumerate(rows)}
    m = [[Fraction(0)] * len(cols) for _ in rows]
    for c, idx in enumerate(cols):
        for j, v in _d_monomial(L, idx).items():
            m[pos[j]][c] = v
    return m


# ---------------------------------------------------------------------------
# central series


@dataclass(frozen=True)
class SeriesChain:
    """Descending chain k^0 = L, k^i = [L, k^{i-1}] and ascending chain k_0 = 0, k_i."""

    descending: tuple
    ascending: tuple
    n: int

    @property
    def center(self) -> list:
        return list(self.ascending[1]) if len(self.ascending) > 1 else []

    @property
    def is_nilpotent(self) -> bool:
        return len(self.descending[-1]) == 0

    @property
    def step(self) -> int | None:
        """Smallest s with k^s = 0, or None when not nilpotent."""
        if not self.is_nilpotent:
            return None
        return next(i for i, b in enumerate(self.descending) if not b)

    def descending_dims(self) -> list[int]:
        return [len(b) for b in self.descending]

    def ascending_dims(self) -> list[int]:
        return [len(b) for b in self.ascending]

    def upper(self, k: int) -> list:
        """k_k of the ascending chain (stationary after the chain stops)."""
        return list(self.ascending[min(k, len(self.ascending) - 1)])

    def lower(self, k: int) -> list:
        return list(self.descending[min(k, len(self.descending) - 1)])


def _row_basis(vectors: Sequence[Sequence]) -> list:
    vecs = [list(v) for v in vectors if any(not is_zero(x) for x in v)]
    if not vecs:
        return []
    red, piv = linalg.rref(vecs)
    return [red[i] for i in range(len(piv))]


def bracket_span(L: LieAlgebra, a: Sequence, b: Sequence) -> list:
    return _row_basis([L.bracket(x, y) for x in a for y in b])


def centralizer_preimage(L: LieAlgebra, sub: Sequence) -> list:
    """{X : [X, L] is contained in sub}."""
    n = L.n
    ann = linalg.nullspace(sub) if sub else linalg.identity(n)
    c = L.structure_constants
    rows = []
    for j in range(n):
        for a in ann:
            # a . [X, e_j] = sum_i X_i sum_k a_k c[k][i][j]
            rows.append([sum((a[k] * c[k][i][j] for k in range(n)), Fraction(0)) for i in range(n)])
    rows = [r for r in rows if any(not is_zero(x) for x in r)]
    if not rows:
        return linalg.identity(n)
    return _row_basis(linalg.nullspace(rows))


def central_series(L: LieAlgebra) -> SeriesChain:
    n = L.n
    full = linalg.identity(n)
    desc = [full]
    while True:
        nxt = bracket_span(L, full, desc[-1])
        if len(nxt) == len(desc[-1]):
            break
        desc.append(nxt)
        if not nxt:
            break
    asc: list = [[]]
    while True:
        nxt = centralizer_preimage(L, asc[-1])
        if len(nxt) == len(asc[-1]):
            break
        asc.append(nxt)
        if len(nxt) == n:
            break
    return SeriesChain(tuple(desc), tuple(asc), n)


def center(L: LieAlgebra) -> list:
    return centralizer_preimage(L, [])


# ---------------------------------------------------------------------------
# derivations and automorphisms


def derivation_equations(L: LieAlgebra) -> list[list]:
    """Linear system on the n^2 entries f[a][i] (variable a*n + i) cutting out Der(L)."""
    n = L.n
    c = L.structure_constants
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                row = [Fraction(0)] * (n * n)
                # f([e_i, e_j])_k = sum_a f[k][a] c[a][i][j]
                for a in range(n):
                    if c[a][i][j]:
                        row[k * n + a] += c[a][i][j]
                # - [f e_i, e_j]_k = - sum_a f[a][i] c[k][a][j]
                for a in range(n):
                    if c[k][a][j]:
                        row[a * n + i] -= c[k][a][j]
                    if c[k][i][a]:
                        row[a * n + j] -= c[k][i][a]
                if any(row):
                    rows.append(row)
    return rows


def derivation_space(L: LieAlgebra) -> list[list[list]]:
    """Basis of Der(L) as n x n matrices."""
    n = L.n
    hit = L._cache.get("der")
    if hit is not None:
        return hit
    eqs = derivation_equations(L)
    if not eqs:
        vecs = linalg.identity(n * n)
    else:
        vecs = linalg.nullspace(eqs)
    out = [[v[a * n : (a + 1) * n] for a in range(n)] for v in vecs]
    L._cache["der"] = out
    return out


def is_derivation(L: LieAlgebra, f: Sequence[Sequence]) -> bool:
    n = L.n
    if len(f) != n:
        raise DimensionError("endomorphism size does not match the algebra")
    for i in range(n):
        for j in range(i + 1, n):
            ei, ej = _unit(n, i), _unit(n, j)
            lhs = linalg.matvec(f, L.bracket(ei, ej))
            fi = [f[a][i] for a in range(n)]
            fj = [f[a][j] for a in range(n)]
            rhs = [x + y for x, y in zip(L.bracket(fi, ej), L.bracket(ei, fj))]
            if any(not is_zero(x - y) for x, y in zip(lhs, rhs)):
                return False
    return True


def is_automorphism(L: LieAlgebra, F: Sequence[Sequence]) -> bool:
    n = L.n
    if len(F) != n or is_zero(linalg.det(F)):
        return False
    cols = [[F[a][i] for a in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            lhs = linalg.matvec(F, L.bracket(_unit(n, i), _unit(n, j)))
            rhs = L.bracket(cols[i], cols[j])
            if any(not is_zero(x - y) for x, y in zip(lhs, rhs)):
                return False
    return True


def exp_nilpotent(N: Sequence[Sequence]) -> list[list]:
    """Exact exp(N) for a nilpotent matrix N (finite series)."""
    n = len(N)
    out = linalg.identity(n)
    term = linalg.identity(n)
    for k in range(1, n + 1):
        term = linalg.scale(Fraction(1, k), linalg.matmul(term, N))
        if linalg.is_zero_matrix(term):
            return out
        out = linalg.add(out, term)
    if not linalg.is_zero_matrix(linalg.matmul(term, N)):
        raise ValueError("matrix is not nilpotent")
    return out


# ---------------------------------------------------------------------------
# almost nilpotent extensions


@dataclass(frozen=True)
class Extension:
    """g = h ⋊_f R with [e_7, X] = f(X); on forms from h, d = d_h + e^7 ∧ f."""

    base: LieAlgebra
    f: tuple
    algebra: LieAlgebra

    @property
    def n(self) -> int:
        return self.algebra.n


def semidirect_extend(h: LieAlgebra, f: Sequence[Sequence], check: bool = True) -> Extension:
    n = h.n
    if check and not is_derivation(h, f):
        raise NotADerivationError("f is not a derivation of the base algebra")
    m = n + 1
    top = KForm.monomial(m, (m,))
    diffs = []
    for i in range(n):
        e_i = KForm.monomial(n, (i + 1,))
        dh = h.diffs[i].with_dim(m)
        diffs.append(dh + wedge(top, endo_action(f, e_i).with_dim(m)))
    diffs.append(KForm.zero(m, 2))
    g = LieAlgebra(m, tuple(diffs), None)
    res = g.d_squared_residuals()
    if res:
        raise JacobiError("extension does not satisfy d^2 = 0", res)
    return Extension(h, tuple(tuple(r) for r in f), g)


def lift_form(a: KForm, n: int = 7) -> KForm:
    """View a form on the base as a form on the extension."""
    return a.with_dim(n)


@dataclass(frozen=True)
class UnimodularityReport:
    unimodular: bool
    strongly_unimodular: bool
    quotient_traces: tuple  # per basis vector X of g, traces of ad_X on each n^i / n^{i+1}


def _quotient_trace(m: Sequence[Sequence], upper: Sequence, lower: Sequence):
    """Trace of the map induced by m on span(upper)/span(lower), lower inside upper."""
    lower = [list(v) for v in lower]
    comp = []
    cur = list(lower)
    for v in upper:
        if not linalg.span_contains(cur, v) if cur else any(not is_zero(x) for x in v):
            comp.append(list(v))
            cur.append(list(v))
    basis = lower + comp
    if not comp:
        return Fraction(0)
    bt = linalg.transpose(basis)
    tr = Fraction(0)
    for w_idx, w in enumerate(comp):
        img = linalg.matvec(m, w)
        coords = linalg.solve(bt, img)
        if coords is None:
            raise ValueError("subspace is not invariant under the map")
        tr = tr + coords[len(lower) + w_idx]
    return tr


def unimodularity(obj) -> UnimodularityReport:
    """Unimodularity and strong unimodularity.

    For an ``Extension`` that is not nilpotent the nilradical is taken to be the
    base ideal.  A plain ``LieAlgebra`` must be nilpotent or have
    span(e_1..e_{n-1}) as a nilpotent ideal, which is then used the same way.
    """
    if isinstance(obj, Extension):
        g = obj.algebra
    else:
        g = obj
    n = g.n
    units = [_unit(n, i) for i in range(n)]
    ads = [g.ad(x) for x in units]
    uni = all(is_zero(linalg.trace(a)) for a in ads)
    if central_series(g).is_nilpotent:
        return UnimodularityReport(uni, True, ())
    base_dim = n - 1
    ideal = units[:base_dim]
    for x in units:
        for y in ideal:
            br = g.bracket(x, y)
            if not is_zero(br[n - 1]):
                raise ValueError("span(e_1..e_{n-1}) is not an ideal; nilradical unsupported")
    # descending series of the nilradical, inside g-coordinates
    chain = [ideal]
    while chain[-1]:
        nxt = _row_basis([g.bracket(x, y) for x in ideal for y in chain[-1]])
        if len(nxt) == len(chain[-1]):
            raise ValueError("base ideal is not nilpotent; nilradical unsupported")
        chain.append(nxt)
    traces = []
    strong = True
    for a in ads:
        row = tuple(_quotient_trace(a, chain[i], chain[i + 1]) for i in range(len(chain) - 1))
        traces.append(row)
        if any(not is_zero(t) for t in row):
            strong = False
    return UnimodularityReport(uni, strong, tuple(traces))


@dataclass(frozen=True)
class CenterFilter:
    center_dim: int
    second_dim: int
    passes: bool


def exact_g2_center_filter(g: LieAlgebra) -> CenterFilter:
    """Necessary condition for an exact G2-structure: dim z(g) <= 1 and g_2 = z(g)."""
    ch = central_series(g)
    z = ch.center
    g2 = ch.upper(2)
    ok = len(z) <= 1 and len(g2) == len(z)
    return CenterFilter(len(z), len(g2), ok)
