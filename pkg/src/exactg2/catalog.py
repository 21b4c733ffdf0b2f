"""Built-in six-dimensional nilpotent Lie algebras, attached example structures and search primitives.

Every attached structure is re-validated when an entry is built, so a
corrupted entry fails loudly with the name of the broken invariant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .exterior import KForm, basis, contract, e, endo_action, parse_form, power, pullback, render, wedge
from .gstruct import (
    check_su3,
    lambda_invariant,
    reduction_check,
    validate_su3,
)
from .liealg import (
    Extension,
    LieAlgebra,
    NotationError,
    abelian,
    central_series,
    _quotient_trace,
    d_matrix,
    derivation_space,
    is_derivation,
    parse_notation,
    semidirect_extend,
)
from .scalars import QSqrt, is_zero, sign, to_scalar

F = Fraction


class CatalogError(ValueError):
    """An attached structure or catalog line violates an invariant."""

    def __init__(self, name: str, invariant: str, detail: str = ""):
        self.name = name
        self.invariant = invariant
        msg = f"{name}: invariant '{invariant}' violated"
        super().__init__(msg + (f" ({detail})" if detail else ""))


class UnknownAlgebraError(KeyError):
    pass


# ---------------------------------------------------------------------------
# attached structures


@dataclass(frozen=True)
class Attachment:
    """Known data on an algebra.  ``kind`` selects which invariants are re-checked.

    kinds: 'sl3c' (rho, nu: lambda < 0 and d nu = rho), 'half_flat' (SU(3),
    half-flat, nu primitive (1,1), d nu = rho) and 'exact_g2' (SU(3), f a
    derivation, d nu = rho and f.nu - d alpha = omega).
    """

    kind: str
    label: str
    omega: KForm | None = None
    rho: KForm | None = None
    nu: KForm | None = None
    f: tuple | None = None
    alpha: KForm | None = None
    note: str = ""


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    algebra: LieAlgebra
    attachments: tuple = ()
    provenance: str = ""

    def attachment(self, label: str) -> Attachment:
        for a in self.attachments:
            if a.label == label:
                return a
        raise KeyError(label)


def validate_attachment(name: str, L: LieAlgebra, a: Attachment) -> None:
    """Raise CatalogError naming the first invariant the attachment violates."""
    if not L.is_lie():
        raise CatalogError(name, "d_squared_zero")
    if a.rho is not None and not L.d(a.rho).is_zero() and a.kind in ("sl3c", "half_flat"):
        raise CatalogError(name, "d_rho_zero")
    if a.rho is not None and a.kind == "sl3c" and sign(lambda_invariant(a.rho)) >= 0:
        raise CatalogError(name, "lambda_negative")
    if a.nu is not None and a.rho is not None and L.d(a.nu) != a.rho:
        raise CatalogError(name, "dnu_eq_rho", render(L.d(a.nu) - a.rho))
    if a.omega is None:
        return
    rep = check_su3(a.omega, a.rho)
    if not rep.ok:
        raise CatalogError(name, "su3", ", ".join(rep.failures()))
    if a.kind == "half_flat":
        if not L.d(power(a.omega, 2)).is_zero():
            raise CatalogError(name, "half_flat")
        s = validate_su3(a.omega, a.rho)
        if a.nu is not None and (pullback(s.J, a.nu) != a.nu or not wedge(a.nu, power(a.omega, 2)).is_zero()):
            raise CatalogError(name, "nu_primitive_11")
    if a.f is not None:
        if not is_derivation(L, a.f):
            raise CatalogError(name, "derivation")
        if a.nu is not None:
            rep = reduction_check(L, a.f, a.omega, a.rho, a.nu, a.alpha)
            if not rep.eq3:
                raise CatalogError(name, "eq3", render(rep.residuals["eq3"]))


def make_entry(name: str, L: LieAlgebra, attachments: Sequence[Attachment] = (), provenance: str = "") -> CatalogEntry:
    for a in attachments:
        validate_attachment(name, L, a)
    return CatalogEntry(name, L, tuple(attachments), provenance)


# ---------------------------------------------------------------------------
# built-in data

TABLE1 = {
    "n1": "(0,0,12,13,14+23,34-25)",
    "n4": "(0,0,12,13,14+23,24+15)",
    "n9": "(0,0,0,12,14-23,15+34)",
    "n18": "(0,0,0,12,13+42,14+23)",
    "n28": "(0,0,0,0,13+42,14+23)",
}

# four-dimensional quotients h/z that occur in the classification argument
FOUR_DIM = {
    "r4": "(0,0,0,0)",
    "n3r": "(0,0,12,0)",
    "n4fil": "(0,0,12,13)",
}


@dataclass(frozen=True)
class BuilderData:
    """Input to the backward construction for an exact SL(3,C)-structure.

    ``v`` is a basis of one-forms (v1..v4) with omega1 = v12 + v34 and
    omega2 = v13 - v24; it yields the adapted coframe of the SU(3) candidate.
    """

    alpha1: str
    alpha2: str
    omega1: str
    omega2: str
    gamma: str | None
    v: tuple


BUILDER_DATA = {
    "n28": BuilderData("e5", "e6", "e13-e24", "e14+e23", None, ("e1", "e3", "e4", "e2")),
    "n18": BuilderData("e5", "e6", "e13-e24", "e14+e23", None, ("e1", "e3", "e4", "e2")),
    "n9": BuilderData("e5", "e6-e4", "e14-e23", "-e12+e34", "e1", ("e1", "e4", "-e2", "e3")),
    "n1": BuilderData("e5", "e6+e3", "e14+e23", "e12+e34", "-e2", ("e1", "e4", "e2", "e3")),
    "n4": BuilderData("e5", "e4-e6", "e14+e23", "e13-e24", "-e1", ("e1", "e4", "e3", "-e2")),
}


def _diag(*d) -> list[list]:
    return [[(to_scalar(d[i]) if i == j else F(0)) for j in range(len(d))] for i in range(len(d))]


def _n1_golden() -> Attachment:
    a = QSqrt(F(3, 2), F(1, 2), 5)
    p = lambda s: parse_form(s, 6)  # noqa: E731
    omega = -p("e13") - p("e16") * a + p("e24") - p("e35") * a + p("e56") * (1 + a * a)
    rho = p("-e125+e146+e236-e345")
    nu = p("e15+e24") * (2 - a * F(2, 3)) - p("e16+e35") * F(1, 2) + p("e56")
    f = _diag(-a / 4, -a / 2, -(a * a + 1) / 4, -a, -a * F(5, 4), -a * F(7, 4))
    f[5][0] = F(-1)
    return Attachment("exact_g2", "exact_g2", omega, rho, nu, _tup(f), p("e4"),
                      "golden-ratio example over Q(sqrt5), a = (3+sqrt5)/2")


def _tup(m) -> tuple:
    return tuple(tuple(r) for r in m)


def _builtin_attachments(name: str) -> list[Attachment]:
    p = lambda s: parse_form(s, 6)  # noqa: E731
    out: list[Attachment] = []
    if name in BUILDER_DATA:
        b = build_exact_sl3c(builtin_algebra(name), *builder_forms(name))
        out.append(Attachment("sl3c", "exact_sl3c", None, b.rho, b.nu, note=f"backward construction, case ({b.case})"))
    if name == "n9":
        out.append(Attachment("half_flat", "half_flat", p("e13+e24-e56"), p("e125+e146-e236-e345"),
                              p("e13+1/2*e26+1/2*e45+e56"), note="half-flat with exact rho"))
        out.append(Attachment("exact_g2", "exact_g2", p("e13+e24-e56"), p("e125+e146-e236-e345"),
                              p("-2/3*e13+e24+1/2*e26+1/2*e45+e56"),
                              _tup(_diag(F(1, 2), F(-3, 4), 1, F(-1, 4), F(1, 4), F(3, 4))),
                              KForm.zero(6, 1), "exact G2 on a diagonal extension"))
    if name == "n28":
        out.append(Attachment("half_flat", "half_flat", p("e12+e34-e56"), p("e136-e145-e235-e246"),
                              p("e12+e56"), note="half-flat with exact rho"))
        out.append(Attachment("sl3c", "model", None, N28_RHO0, e(6, 5, 6), note="model forms omega_0, rho_0 with d(e56) = rho_0"))
    if name == "n18":
        f = _diag(F(1, 6), F(1, 6), F(1, 3), F(1, 3), F(1, 2), F(1, 2))
        f[4][0] = F(-1)
        out.append(Attachment("exact_g2", "exact_g2", p("e12+e34-e56"), p("e136-e145-e235-e246"),
                              p("3/2*e16-3/2*e34+e56"), _tup(f), p("-e4"), "exact G2 on an extension"))
    if name == "n1":
        out.append(_n1_golden())
    return out


_ALG_CACHE: dict[str, LieAlgebra] = {}
_ENTRY_CACHE: dict[str, CatalogEntry] = {}


def builtin_names() -> list[str]:
    return list(TABLE1) + list(FOUR_DIM) + ["R6"]


def builtin_algebra(name: str) -> LieAlgebra:
    if name not in _ALG_CACHE:
        if name in TABLE1:
            _ALG_CACHE[name] = parse_notation(TABLE1[name], name)
        elif name in FOUR_DIM:
            _ALG_CACHE[name] = parse_notation(FOUR_DIM[name], name)
        elif name == "R6":
            _ALG_CACHE[name] = abelian(6, "R6")
        else:
            raise UnknownAlgebraError(f"unknown algebra '{name}'; known: {', '.join(builtin_names())}")
    return _ALG_CACHE[name]


def builtin(name: str) -> CatalogEntry:
    """Validated catalog entry for a built-in name."""
    if name not in _ENTRY_CACHE:
        L = builtin_algebra(name)
        prov = "nilpotent algebra with an exact SL(3,C)-structure" if name in TABLE1 else (
            "abelian" if name == "R6" else "four-dimensional quotient h/z")
        _ENTRY_CACHE[name] = make_entry(name, L, _builtin_attachments(name), prov)
    return _ENTRY_CACHE[name]


def resolve_algebra(spec: str, catalog: Mapping[str, CatalogEntry] | None = None) -> LieAlgebra:
    """Name from a user catalog, a built-in name, or inline Salamon notation."""
    if catalog and spec in catalog:
        return catalog[spec].algebra
    if spec.strip().startswith("("):
        return parse_notation(spec)
    return builtin_algebra(spec)


# ---------------------------------------------------------------------------
# exact and closed forms


@dataclass(frozen=True)
class FormSpaces:
    k: int
    exact: tuple
    closed: tuple

    @property
    def betti(self) -> int:
        return len(self.closed) - len(self.exact)


def _column_space(m: list[list]) -> list[list]:
    if not m or not m[0]:
        return []
    red, piv = linalg.rref(linalg.transpose(m))
    return [red[i] for i in range(len(piv))]


def form_spaces(L: LieAlgebra, k: int) -> FormSpaces:
    """Bases of exact k-forms, im(d on (k-1)-forms), and closed k-forms, ker(d on k-forms)."""
    n = L.n
    if not 0 <= k <= n:
        raise ValueError(f"degree {k} out of range for dimension {n}")
    exact = [] if k == 0 else _column_space(d_matrix(L, k - 1))
    if k == n:
        closed = [b.to_vector() for b in basis(n, k)]
    else:
        closed = linalg.nullspace(d_matrix(L, k), ncols=len(basis(n, k)))
    return FormSpaces(
        k,
        tuple(KForm.from_vector(n, k, v) for v in exact),
        tuple(KForm.from_vector(n, k, v) for v in closed),
    )


# ---------------------------------------------------------------------------
# obstruction to half-flat SU(3)-structures with exact rho


def jtilde_alpha(alpha: KForm, tau: KForm, sigma: KForm | None = None) -> KForm:
    """The one-form X -> coefficient of alpha ∧ (X ⌟ tau) ∧ (sigma or tau) against e^{123456}."""
    n = alpha.n
    other = tau if sigma is None else sigma
    coeffs = []
    for i in range(n):
        x = [F(int(j == i)) for j in range(n)]
        coeffs.append(wedge(wedge(alpha, contract(x, tau)), other).top_coeff())
    return KForm.from_vector(n, 1, coeffs)


def obstruction_halfflat_exact(h: LieAlgebra, alpha: KForm) -> bool:
    """True when alpha ∧ Jtilde_tau^* alpha ∧ sigma = 0 for all exact tau and closed 4-forms sigma.

    Jtilde is quadratic in tau, so it suffices to test the diagonal terms and
    the polarizations on a basis of exact 3-forms.
    """
    if h.n != 6:
        raise ValueError("obstruction is defined on six-dimensional algebras")
    if alpha.k != 1 or alpha.is_zero():
        raise ValueError("alpha must be a nonzero one-form")
    taus = form_spaces(h, 3).exact
    sigmas = form_spaces(h, 4).closed
    ones = []
    for i, ti in enumerate(taus):
        ones.append(jtilde_alpha(alpha, ti))
        for tj in taus[i + 1 :]:
            # bilinear part of Jtilde at (ti, tj)
            ones.append(jtilde_alpha(alpha, ti, tj) + jtilde_alpha(alpha, tj, ti))
    for j1 in ones:
        aj = wedge(alpha, j1)
        if aj.is_zero():
            continue
        for s in sigmas:
            if not wedge(aj, s).is_zero():
                return False
    return True


# ---------------------------------------------------------------------------
# backward construction of exact SL(3,C)-structures


class BuilderError(ValueError):
    def __init__(self, precondition: str, detail: str = ""):
        self.precondition = precondition
        super().__init__(f"precondition '{precondition}' failed" + (f": {detail}" if detail else ""))


@dataclass(frozen=True)
class SL3CBuild:
    rho: KForm
    nu: KForm
    case: str
    lam: object
    omega: KForm | None = None  # SU(3) candidate from the adapted coframe, when v is given


def _kernel_2form(w: KForm) -> list:
    from .gstruct import two_form_kernel

    return two_form_kernel(w)


def build_exact_sl3c(L: LieAlgebra, alpha1: KForm, alpha2: KForm, omega1: KForm, omega2: KForm,
                     gamma: KForm | None = None, v: Sequence[KForm] | None = None) -> SL3CBuild:
    """rho = alpha2 ∧ omega1 - alpha1 ∧ omega2 and nu = alpha1 ∧ alpha2, after checking every precondition."""
    n = L.n
    if n != 6:
        raise BuilderError("dimension", "algebra must be six-dimensional")
    if wedge(alpha1, alpha2).is_zero():
        raise BuilderError("alpha_independent")
    w11, w12, w22 = wedge(omega1, omega1), wedge(omega1, omega2), wedge(omega2, omega2)
    if w11.is_zero():
        raise BuilderError("omega1_squared_nonzero")
    if not w12.is_zero():
        raise BuilderError("omega1_wedge_omega2_zero", render(w12))
    if w22 != w11:
        raise BuilderError("omega_squares_equal", render(w22 - w11))
    k1, k2 = _kernel_2form(omega1), _kernel_2form(omega2)
    if len(k1) != 2 or linalg.rank(k1 + k2) != 2:
        raise BuilderError("kernels_equal")
    ann = linalg.nullspace([alpha1.to_vector(), alpha2.to_vector()])
    if linalg.rank(k1 + ann) != 6:
        raise BuilderError("kernel_complementary")
    if L.d(alpha1) != omega1:
        raise BuilderError("d_alpha1_eq_omega1", render(L.d(alpha1) - omega1))
    if gamma is None:
        if L.d(alpha2) != omega2:
            raise BuilderError("d_alpha2_eq_omega2", render(L.d(alpha2) - omega2))
        case = "b"
    else:
        if L.d(alpha2) != omega2 + wedge(gamma, alpha1):
            raise BuilderError("d_alpha2_eq_omega2_plus_gamma_alpha1",
                               render(L.d(alpha2) - omega2 - wedge(gamma, alpha1)))
        if not L.d(gamma).is_zero():
            raise BuilderError("gamma_closed")
        case = "a"
    rho = wedge(alpha2, omega1) - wedge(alpha1, omega2)
    nu = wedge(alpha1, alpha2)
    lam = lambda_invariant(rho)
    omega = None
    if v is not None:
        v1, v2, v3, v4 = v
        if wedge(v1, v2) + wedge(v3, v4) != omega1 or wedge(v1, v3) - wedge(v2, v4) != omega2:
            raise BuilderError("v_basis", "omega1 != v12+v34 or omega2 != v13-v24")
        th = (alpha1, alpha2, v3, v2, v1, -v4)
        omega = wedge(th[0], th[1]) + wedge(th[2], th[3]) + wedge(th[4], th[5])
    return SL3CBuild(rho, nu, case, lam, omega)


def builder_forms(name: str) -> tuple:
    """(alpha1, alpha2, omega1, omega2, gamma, v) for one of the five admissible algebras."""
    b = BUILDER_DATA[name]
    p = lambda s: parse_form(s, 6)  # noqa: E731
    return (p(b.alpha1), p(b.alpha2), p(b.omega1), p(b.omega2),
            p(b.gamma) if b.gamma else None, tuple(p(s) for s in b.v))


@dataclass(frozen=True)
class Admissibility:
    center_dim: int
    h2_dim: int
    case: str  # 'a', 'b' or 'neither'


def sl3c_admissibility(h: LieAlgebra) -> Admissibility:
    """Necessary dimension condition for an exact SL(3,C)-structure on a nilpotent h."""
    if h.n != 6:
        raise ValueError("algebra must be six-dimensional")
    ch = central_series(h)
    if not ch.is_nilpotent:
        raise ValueError("algebra is not nilpotent")
    z, h2 = len(ch.upper(1)), len(ch.upper(2))
    if z == 1 and h2 == 2:
        case = "a"
    elif z == 2:
        case = "b"
    else:
        case = "neither"
    return Admissibility(z, h2, case)


# ---------------------------------------------------------------------------
# derivation subspaces used by the searches


@dataclass(frozen=True)
class AffineDerivations:
    """Derivations particular + span(homogeneous); particular is None when empty."""

    particular: list | None
    homogeneous: list

    @property
    def empty(self) -> bool:
        return self.particular is None


def _combine(coeffs, mats, n) -> list[list]:
    out = [[F(0)] * n for _ in range(n)]
    for c, m in zip(coeffs, mats):
        if not is_zero(c):
            out = linalg.add(out, linalg.scale(c, m))
    return out


def strongly_unimodular_derivations(h: LieAlgebra) -> list[list[list]]:
    """Basis of derivations with zero trace on every quotient of the descending central series."""
    ders = derivation_space(h)
    ch = central_series(h)
    if not ch.is_nilpotent:
        raise ValueError("base algebra must be nilpotent")
    chain = ch.descending
    rows = []
    for i in range(len(chain) - 1):
        rows.append([_quotient_trace(D, chain[i], chain[i + 1]) for D in ders])
    if not rows:
        return ders
    return [_combine(v, ders, h.n) for v in linalg.nullspace(rows, ncols=len(ders))]


def closed_derivations(h: LieAlgebra, omega: KForm, rho: KForm,
                       within: Sequence | None = None) -> AffineDerivations:
    """Derivations f (inside span(within), default all of Der h) with f.rho = d omega.

    These are exactly the f for which omega ∧ e^7 + rho is closed on h ⋊_f R,
    given d rho = 0.
    """
    mats = list(within) if within is not None else derivation_space(h)
    target = h.d(omega).to_vector()
    cols = [endo_action(D, rho).to_vector() for D in mats]
    a = linalg.transpose(cols) if cols else [[] for _ in target]
    if not mats:
        return AffineDerivations(None if any(not is_zero(t) for t in target) else [[F(0)] * h.n for _ in range(h.n)], [])
    x = linalg.solve(a, target)
    if x is None:
        return AffineDerivations(None, [])
    hom = [_combine(v, mats, h.n) for v in linalg.nullspace(a, ncols=len(mats))]
    return AffineDerivations(_combine(x, mats, h.n), hom)


# ---------------------------------------------------------------------------
# parametrized derivations of n28

N28_OMEGA0 = parse_form("-e12-e34+e56", 6)
N28_RHO0 = parse_form("e136-e246-e145-e235", 6)
# J_0^* rho_0; the printed e135-e146-e236-e245 is closed, contradicting d rho_hat_0 = 4 e^{1234}
N28_RHO0_HAT = parse_form("e135+e146+e236-e245", 6)
N28_RHO0_HAT_PRINTED = parse_form("e135-e146-e236-e245", 6)
N28_J0 = [[F(0)] * 6 for _ in range(6)]
for _i, _j, _s in ((1, 0, 1), (0, 1, -1), (3, 2, 1), (2, 3, -1), (5, 4, -1), (4, 5, 1)):
    N28_J0[_i][_j] = F(_s)  # J0 e1 = e2, J0 e3 = e4, J0 e5 = -e6


def complex_block(x, y) -> list[list]:
    """Real 2x2 matrix of multiplication by x + iy on a pair (e_odd, e_even)."""
    return [[x, -y], [y, x]]


def realize_n28(A: Sequence[Sequence[tuple]], B: Sequence[Sequence] | None = None) -> list[list]:
    """Real 6x6 matrix of [[A, 0], [B, tr A]].

    A is a complex 2x2 matrix with entries given as (re, im) pairs, acting on
    the complex pairs (e1,e2), (e3,e4); B is a real 2x4 matrix mapping
    span(e1..e4) to span(e5,e6); the last block is multiplication by tr A.
    """
    m = [[F(0)] * 6 for _ in range(6)]

    def put(bi, bj, z):
        blk = complex_block(to_scalar(z[0]), to_scalar(z[1]))
        for r in range(2):
            for c in range(2):
                m[2 * bi + r][2 * bj + c] = blk[r][c]

    for i in range(2):
        for j in range(2):
            put(i, j, A[i][j])
    if B is not None:
        for r in range(2):
            for c in range(4):
                m[4 + r][c] = to_scalar(B[r][c])
    put(2, 2, (A[0][0][0] + A[1][1][0], A[0][0][1] + A[1][1][1]))
    return m


class ForbiddenParameterError(ValueError):
    def __init__(self, family: str, denominator: str):
        self.denominator = denominator
        super().__init__(f"family {family}: parameters lie on the forbidden locus {denominator} = 0")


@dataclass(frozen=True)
class FamilyInstance:
    family: str
    params: dict
    f: list
    extension: Extension
    omega: KForm
    rho: KForm
    nu: KForm
    alpha: KForm
    expected_tau: KForm | None = None  # closed-form torsion on the extension, when known


FAMILY_PARAMS = {
    "f": ("a", "b1", "b2"),
    "h_b": ("b",),
    "g": ("a", "b1", "b2", "c"),
    "h": ("a", "b1", "b2", "r"),
    "diag": ("x1", "y1", "x2", "y2"),
    "jordan": ("x", "y"),
}


def _need(family: str, value, label: str):
    if is_zero(value):
        raise ForbiddenParameterError(family, label)


def _h_matrix(a, b1, b2, r) -> list[list]:
    m = realize_n28([[(a, b1), (0, 0)], [(0, 0), (-F(1, 2) - a, b2)]])
    m[4][2] = r
    m[5][3] = -r
    return m


def g_family_e34(a, b1, b2, c, printed: bool = False):
    """e^{34} coefficient of nu for the g-family.

    The printed numerator 2c^2 - 4a(b1-b2)^2 + 1 fails f.nu = omega_0; the
    solved value has -a in place of +1 and reduces to the diagonal case at c = 0.
    """
    q = 4 * (b1 - b2) ** 2 + 1
    last = 1 if printed else -a
    return (2 * c * c - 4 * a * (b1 - b2) ** 2 + last) / (a * q * (2 * a + 1))


def param_family(family: str, params: Mapping[str, object]) -> FamilyInstance:
    """Derivation of n28 from a named family with its SU(3)-structure and potential nu."""
    if family not in FAMILY_PARAMS:
        raise ValueError(f"unknown family '{family}'; known: {', '.join(FAMILY_PARAMS)}")
    names = FAMILY_PARAMS[family]
    missing = [k for k in names if k not in params]
    extra = [k for k in params if k not in names]
    if missing or extra:
        raise ValueError(f"family {family} takes parameters {names}; missing {missing}, unexpected {extra}")
    P = {k: to_scalar(params[k]) for k in names}
    h = builtin_algebra("n28")
    p = lambda s: parse_form(s, 6)  # noqa: E731
    omega, rho = N28_OMEGA0, N28_RHO0
    tau = None
    if family in ("f", "g"):
        a, b1, b2 = P["a"], P["b1"], P["b2"]
        c = P.get("c", F(0))
        _need(family, a, "a")
        _need(family, 2 * a + 1, "2a+1")
        q = 4 * (b1 - b2) ** 2 + 1
        f = realize_n28([[(a, b1), (c, 0)], [(0, 0), (-F(1, 2) - a, b2)]])
        nu = (p("e12") * (1 / (2 * a))
              + p("e34") * g_family_e34(a, b1, b2, c)
              + p("e56")
              - p("e13+e24") * (2 * (b1 - b2) * c / (a * q))
              + p("e14-e23") * (c / (a * q)))
        tau = (p("e12") * (2 + 2 * a) - p("e34") * (2 * a - 1) + p("e14-e23") * c + p("e56") * 3).with_dim(7)
    elif family == "h":
        a, b1, b2, r = P["a"], P["b1"], P["b2"], P["r"]
        _need(family, a, "a")
        _need(family, 2 * a + 1, "2a+1")
        D = (a + 1) ** 2 + (b1 + 2 * b2) ** 2
        _need(family, D, "(a+1)^2+(b1+2b2)^2")
        f = _h_matrix(a, b1, b2, r)
        nu = (p("e12") * (1 / (2 * a))
              - p("e34") * (((b1 + 2 * b2) ** 2 + (2 * r * r + a + 1) * (a + 1)) / ((2 * a + 1) * D))
              + p("e56")
              + p("e35-e46") * (r * (b1 + 2 * b2) / D)
              + p("e36+e45") * (r * (1 + a) / D))
        tau = (p("e12") * (2 + 2 * a) - p("e34") * (2 * a - 1) - p("e36+e45") * r + p("e56") * 3).with_dim(7)
    elif family in ("h_b", "jordan"):
        x, y = (F(-1, 4), P["b"]) if family == "h_b" else (P["x"], P["y"])
        _need(family, x, "re w")
        lam = -1 / (4 * x)
        f = realize_n28([[(x, y), (1, 0)], [(0, 0), (x, y)]])
        omega, rho = N28_OMEGA0 * lam**2, N28_RHO0 * lam**3
        nu = (p("e12") * (-2 * lam**3) - p("e34") * (16 * lam**5 + 2 * lam**3)
              - p("e14-e23") * (4 * lam**4) + p("e56") * lam**3)
    else:  # diag
        x1, y1, x2, y2 = P["x1"], P["y1"], P["x2"], P["y2"]
        _need(family, x1, "re w1")
        _need(family, x2, "re w2")
        _need(family, x1 + x2, "re(w1+w2)")
        lam = -1 / (2 * (x1 + x2))
        f = realize_n28([[(x1, y1), (0, 0)], [(0, 0), (x2, y2)]])
        omega, rho = N28_OMEGA0 * lam**2, N28_RHO0 * lam**3
        nu = p("e12") * (lam**2 / (2 * x1)) + p("e34") * (lam**2 / (2 * x2)) + p("e56") * lam**3
    ext = semidirect_extend(h, f)
    return FamilyInstance(family, dict(P), f, ext, omega, rho, nu, KForm.zero(6, 1), tau)


def n28_derivation(A: Sequence[Sequence[tuple]], B: Sequence[Sequence]) -> list[list]:
    """General element of Der(n28) from complex A (2x2) and real B (2x4)."""
    return realize_n28(A, B)


def n9_derivation(p: Mapping[str, object]) -> list[list]:
    """General element of Der(n9) in the ten parameters f43, f44, f51, f53, f54, f55, f61..f64."""
    g = {k: to_scalar(p.get(k, 0)) for k in N9_DER_PARAMS}
    z = F(0)
    return [
        [g["f55"] - g["f44"], z, z, z, z, z],
        [g["f43"], -g["f55"] + 2 * g["f44"], z, z, z, z],
        [z, z, 2 * g["f55"] - 2 * g["f44"], z, z, z],
        [g["f53"], g["f54"], g["f43"], g["f44"], z, z],
        [g["f51"], g["f64"], g["f53"], g["f54"], g["f55"], z],
        [g["f61"], g["f62"], g["f63"], g["f64"], g["f54"], 2 * g["f55"] - g["f44"]],
    ]


N9_DER_PARAMS = ("f43", "f44", "f51", "f53", "f54", "f55", "f61", "f62", "f63", "f64")


# ---------------------------------------------------------------------------
# catalog files

_LINE_ALG = re.compile(r"^\s*([A-Za-z_][\w]*)\s*:=\s*(\(.*\))\s*$")
_LINE_ATT = re.compile(r"^\s*([A-Za-z_][\w]*)\.(omega|rho|nu|alpha|f)\s*:=\s*(.+?)\s*$")


def _parse_scalar(tok: str, sqrt_d: int | None):
    tok = tok.strip()
    if not tok:
        raise ValueError("empty matrix entry")
    form = parse_form(tok + "*e1", 1, sqrt_d=sqrt_d) if tok not in ("0", "-0") else None
    return F(0) if form is None else form.coeff((1,))


def parse_matrix(text: str, n: int, sqrt_d: int | None = None) -> list[list]:
    rows = [r for r in text.split(";")]
    if len(rows) != n:
        raise ValueError(f"expected {n} rows, got {len(rows)}")
    out = []
    for r in rows:
        toks = [t for t in re.split(r"[,\s]+", r.strip()) if t]
        if len(toks) != n:
            raise ValueError(f"expected {n} entries per row, got {len(toks)}")
        out.append([_parse_scalar(t, sqrt_d) for t in toks])
    return out


def load_catalog(text: str, sqrt_d: int | None = None, validate: bool = True) -> dict[str, CatalogEntry]:
    """Parse a catalog file: algebra lines ``name := (...)`` and attachment lines ``name.key := value``."""
    algs: dict[str, LieAlgebra] = {}
    atts: dict[str, dict] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE_ATT.match(line)
        if m:
            name, key, val = m.groups()
            if name not in algs:
                raise CatalogError(name, "declared_before_use", f"line {lineno}")
            n = algs[name].n
            try:
                atts.setdefault(name, {})[key] = (
                    parse_matrix(val, n, sqrt_d) if key == "f" else parse_form(val, n, sqrt_d))
            except ValueError as exc:
                raise CatalogError(name, "parse", f"line {lineno}: {exc}") from exc
            continue
        m = _LINE_ALG.match(line)
        if not m:
            raise CatalogError(f"line {lineno}", "syntax", raw.strip())
        name, notation = m.groups()
        try:
            algs[name] = parse_notation(notation, name)
        except NotationError as exc:
            raise CatalogError(name, "d_squared_zero" if "d(" in str(exc) or "d^2" in str(exc) else "notation",
                               str(exc)) from exc
    out = {}
    for name, L in algs.items():
        a = atts.get(name, {})
        attachments = []
        if a:
            f = a.get("f")
            if "omega" in a and "rho" in a and f is not None:
                kind = "exact_g2"
            elif "omega" in a and "rho" in a:
                kind = "su3"
            else:
                kind = "sl3c"
            attachments.append(Attachment(kind, "file", a.get("omega"), a.get("rho"), a.get("nu"),
                                          _tup(f) if f is not None else None, a.get("alpha")))
        if validate:
            out[name] = make_entry(name, L, attachments, "catalog file")
        else:
            out[name] = CatalogEntry(name, L, tuple(attachments), "catalog file")
    return out


def render_catalog(entries: Mapping[str, CatalogEntry]) -> str:
    """Inverse of load_catalog, using the canonical form rendering."""
    from .liealg import render_notation

    lines = []
    for name, ent in entries.items():
        lines.append(f"{name} := {render_notation(ent.algebra)}")
        for a in ent.attachments[:1]:
            for key in ("omega", "rho", "nu", "alpha"):
                v = getattr(a, key)
                if v is not None:
                    lines.append(f"{name}.{key} := {_plain(v)}")
            if a.f is not None:
                lines.append(f"{name}.f := " + " ; ".join(" ".join(str(x) for x in r) for r in a.f))
    return "\n".join(lines) + "\n"


def _plain(a: KForm) -> str:
    """Rendering accepted back by parse_form (e^{..} becomes e..)."""
    return re.sub(r"e\^\{(\d+)\}", r"e\1", render(a))
