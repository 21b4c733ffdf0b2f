"""SL(3,C), SU(3) and G2 linear algebra, torsion and the 7 -> 6 reduction.

Conventions (all checked against the model forms in the tests):

* ``K_rho(v) = kappa((v ⌟ rho) ∧ rho)`` against the reference volume e^{123456};
  ``lambda = tr(K^2) / 6``, so the model rho_0 has lambda = -4.
* ``J = s K / sqrt(-lambda)`` where s is the orientation sign (+1 when e^{123456}
  is positive).  For rho_0 this gives J e_1 = -e_2, J e_2 = e_1.
* ``rho_hat = J^* rho`` and a normalized SU(3)-structure has
  ``rho_hat ∧ rho = (2/3) omega^3``.
* ``phi = omega ∧ e^7 + rho`` and ``*phi = omega^2/2 + e^7 ∧ rho_hat``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .exterior import (
    Coframe,
    DimensionError,
    KForm,
    basis,
    contract,
    endo_action,
    evaluate,
    hodge_star_metric,
    inner_product,
    kappa_inv,
    power,
    pullback,
    render,
    unit,
    wedge,
)
from .liealg import (
    Extension,
    LieAlgebra,
    NotADerivationError,
    ce_differential,
    d_matrix,
    is_derivation,
)
from .scalars import FieldExtensionError, field_sqrt, is_zero, rational_root, sign

# ---------------------------------------------------------------------------
# quartic invariant


@dataclass(frozen=True)
class QuarticResult:
    """lambda(rho) = lam * (e^{123456})^{⊗2} and the matrix of K_rho."""

    lam: object
    K: tuple


def _check_rho(rho: KForm):
    if rho.n != 6 or rho.k != 3:
        raise DimensionError(f"need a 3-form on R^6, got a {rho.k}-form on R^{rho.n}")


def k_rho(rho: KForm) -> QuarticResult:
    _check_rho(rho)
    cols = [kappa_inv(wedge(contract(unit(6, j), rho), rho)) for j in range(1, 7)]
    K = linalg.transpose(cols)
    lam = linalg.trace(linalg.matmul(K, K)) / 6
    return QuarticResult(lam, tuple(tuple(r) for r in K))


def lambda_invariant(rho: KForm):
    return k_rho(rho).lam


def is_sl3c(rho: KForm) -> bool:
    return sign(lambda_invariant(rho)) < 0


def induced_J(rho: KForm, orientation: int = 1, numeric_fallback: bool = False) -> list[list]:
    """Almost complex structure of an SL(3,C) 3-form for the given orientation sign."""
    q = k_rho(rho)
    if sign(q.lam) >= 0:
        raise ValueError(f"lambda = {q.lam} is not negative: not an SL(3,C)-structure")
    try:
        root = field_sqrt(-q.lam)
    except FieldExtensionError as exc:
        if not numeric_fallback:
            raise FieldExtensionError(
                f"sqrt(-lambda) is not in the current field ({exc}); extend the field or use numeric"
            ) from None
        warnings.warn("sqrt(-lambda) not exact; falling back to floating point", stacklevel=2)
        root = float(-q.lam) ** 0.5
        return [[orientation * float(x) / root for x in r] for r in q.K]
    scale = orientation / root
    return [[x * scale for x in r] for r in q.K]


def rho_hat(rho: KForm, J: Sequence[Sequence]) -> KForm:
    return pullback(J, rho)


# ---------------------------------------------------------------------------
# SU(3)


def two_form_matrix(w: KForm) -> list[list]:
    n = w.n
    return [[w.coeff((i, j)) if i != j else Fraction(0) for j in range(1, n + 1)] for i in range(1, n + 1)]


def two_form_kernel(w: KForm) -> list:
    return linalg.nullspace(two_form_matrix(w))


def metric_from(omega: KForm, J: Sequence[Sequence]) -> list[list]:
    """g(e_i, e_j) = omega(J e_i, e_j)."""
    W = two_form_matrix(omega)
    # omega(Ju, v) = (Ju)^T W v, so g = J^T W
    return linalg.matmul(linalg.transpose(J), W)


@dataclass
class SU3Report:
    checks: dict
    lam: object = None
    J: list | None = None
    g: list | None = None
    rho_hat: KForm | None = None
    orientation: int = 0

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]


@dataclass(frozen=True)
class SU3Data:
    omega: KForm
    rho: KForm
    J: tuple
    rho_hat: KForm
    g: tuple
    orientation: int
    lam: object

    @property
    def vol_coeff(self):
        """Coefficient of the metric volume form omega^3/6 against e^{123456}."""
        return power(self.omega, 3).top_coeff() / 6

    @property
    def ginv(self) -> list[list]:
        return linalg.inverse(self.g)


class SU3ValidationError(ValueError):
    def __init__(self, report: SU3Report):
        super().__init__("not a normalized SU(3)-structure: failed " + ", ".join(report.failures()))
        self.report = report


def check_su3(omega: KForm, rho: KForm) -> SU3Report:
    """Evaluate every SU(3) condition separately."""
    _check_rho(rho)
    if omega.n != 6 or omega.k != 2:
        raise DimensionError("omega must be a 2-form on R^6")
    checks = {
        "sl3c": False,
        "nondegenerate": False,
        "compatible": False,
        "metric_symmetric": False,
        "metric_positive": False,
        "normalized": False,
    }
    rep = SU3Report(checks)
    w3 = power(omega, 3).top_coeff()
    checks["nondegenerate"] = not is_zero(w3)
    checks["compatible"] = wedge(omega, rho).is_zero()
    lam = lambda_invariant(rho)
    rep.lam = lam
    checks["sl3c"] = sign(lam) < 0
    if not (checks["sl3c"] and checks["nondegenerate"]):
        return rep
    orient = sign(w3)
    rep.orientation = orient
    J = induced_J(rho, orient)
    rep.J = J
    g = metric_from(omega, J)
    rep.g = g
    checks["metric_symmetric"] = linalg.is_symmetric(g)
    checks["metric_positive"] = checks["metric_symmetric"] and linalg.is_positive_definite(g)
    rh = rho_hat(rho, J)
    rep.rho_hat = rh
    checks["normalized"] = wedge(rh, rho) == power(omega, 3) * Fraction(2, 3)
    return rep


def validate_su3(omega: KForm, rho: KForm) -> SU3Data:
    rep = check_su3(omega, rho)
    if not rep.ok:
        raise SU3ValidationError(rep)
    return SU3Data(
        omega,
        rho,
        tuple(tuple(r) for r in rep.J),
        rep.rho_hat,
        tuple(tuple(r) for r in rep.g),
        rep.orientation,
        rep.lam,
    )


# ---------------------------------------------------------------------------
# G2


@dataclass(frozen=True)
class G2Data:
    """A G2 3-form with metric data; ``vol = vol_coeff * e^{1..7}``."""

    phi: KForm
    star_phi: KForm
    g: tuple
    vol_coeff: object
    coframe: Coframe | None = None
    tau: KForm | None = None
    mu: object = None
    numeric: bool = False
    _ginv: list = field(default=None, repr=False, compare=False)

    @property
    def ginv(self) -> list[list]:
        if self._ginv is None:
            object.__setattr__(self, "_ginv", linalg.inverse(self.g))
        return self._ginv

    @property
    def vol(self) -> KForm:
        return KForm(7, 7, {tuple(range(1, 8)): self.vol_coeff})

    def star(self, a: KForm) -> KForm:
        return hodge_star_metric(a, self.ginv, self.vol_coeff)

    def norm2(self, a: KForm):
        return inner_product(a, a, self.ginv)


def _block_g7(g6) -> tuple:
    g7 = [list(r) + [Fraction(0)] for r in g6]
    g7.append([Fraction(0)] * 6 + [Fraction(1)])
    return tuple(tuple(r) for r in g7)


def su3_to_g2(s: SU3Data) -> G2Data:
    """phi = omega ∧ e^7 + rho with metric g + (e^7)^2 and volume omega^3/6 ∧ e^7."""
    e7 = KForm.monomial(7, (7,))
    om7, rho7, rh7 = s.omega.with_dim(7), s.rho.with_dim(7), s.rho_hat.with_dim(7)
    phi = wedge(om7, e7) + rho7
    star_phi = power(om7, 2) * Fraction(1, 2) + wedge(e7, rh7)
    cof = None
    if linalg.is_zero_matrix(linalg.sub(s.g, linalg.identity(6))) and s.orientation > 0:
        cof = Coframe.standard(7)
    return G2Data(phi, star_phi, _block_g7(s.g), s.vol_coeff, cof)


def g2_bilinear(phi: KForm) -> list[list]:
    """B(v, w) = (v ⌟ phi) ∧ (w ⌟ phi) ∧ phi as coefficients against e^{1..7}."""
    if phi.n != 7 or phi.k != 3:
        raise DimensionError("need a 3-form on R^7")
    cs = [contract(unit(7, i), phi) for i in range(1, 8)]
    B = [[Fraction(0)] * 7 for _ in range(7)]
    for i in range(7):
        for j in range(i, 7):
            v = wedge(wedge(cs[i], cs[j]), phi).top_coeff()
            B[i][j] = B[j][i] = v
    return B


def is_g2(phi: KForm) -> bool:
    B = g2_bilinear(phi)
    return linalg.is_positive_definite(B) or linalg.is_positive_definite(linalg.scale(-1, B))


def g2_from_phi(phi: KForm, numeric_fallback: bool = True) -> G2Data:
    """Metric and volume of a G2 3-form from B = 6 g vol.

    sqrt(det g) = (det B' / 6^7)^(1/9) with B' = +-B positive definite.  The
    ninth root is taken exactly when it is rational; otherwise the floating
    path is used (with a warning) unless ``numeric_fallback`` is False.
    """
    B = g2_bilinear(phi)
    if linalg.is_positive_definite(B):
        s = 1
    elif linalg.is_positive_definite(linalg.scale(-1, B)):
        s = -1
        B = linalg.scale(-1, B)
    else:
        raise ValueError("B_phi is not definite: not a G2-structure")
    detB = linalg.det(B)
    root = None
    numeric = False
    if isinstance(detB, Fraction):
        root = rational_root(detB / 6**7, 9)
    if root is None:
        if not numeric_fallback:
            raise FieldExtensionError("det(g) has no exact ninth root; use the numeric path")
        warnings.warn("G2 metric needs an inexact ninth root; using floating point", stacklevel=2)
        numeric = True
        root = (float(detB) / 6**7) ** (1.0 / 9.0)
        B = [[float(x) for x in r] for r in B]
        phi = phi.map_coeffs(float)
    g = tuple(tuple(x / (6 * root) for x in r) for r in B)
    vol_c = s * root
    ginv = linalg.inverse(g)
    star_phi = hodge_star_metric(phi, ginv, vol_c)
    cof = Coframe.standard(7) if not numeric and g == tuple(tuple(r) for r in linalg.identity(7)) and s > 0 else None
    return G2Data(phi, star_phi, g, vol_c, cof, numeric=numeric)


def lambda2_14_member(nu: KForm, data: G2Data) -> bool:
    return wedge(nu, data.phi) == -data.star(nu)


def lambda2_7_member(nu: KForm, data: G2Data) -> bool:
    return wedge(nu, data.phi) == data.star(nu) * 2


def split_two_form(nu: KForm, data: G2Data) -> tuple[KForm, KForm]:
    """(nu_7, nu_14) using T = *(. ∧ phi), which is 2 on Lambda^2_7 and -1 on Lambda^2_14."""
    t = data.star(wedge(nu, data.phi))
    return (t + nu) * Fraction(1, 3), (nu * 2 - t) * Fraction(1, 3)


# ---------------------------------------------------------------------------
# torsion


class NotClosedError(ValueError):
    pass


class TorsionCheckError(AssertionError):
    pass


def torsion_two_form(g: LieAlgebra | Extension, data: G2Data) -> KForm:
    """tau = -*d*phi for a closed G2-structure, with the defining identities re-checked."""
    alg = g.algebra if isinstance(g, Extension) else g
    if not ce_differential(alg, data.phi).is_zero():
        raise NotClosedError("phi is not closed")
    dstar = ce_differential(alg, data.star_phi)
    tau = -data.star(dstar)
    if wedge(tau, data.phi) != dstar:
        raise TorsionCheckError("tau ∧ phi != d*phi")
    if not lambda2_14_member(tau, data):
        raise TorsionCheckError("tau is not in Lambda^2_14")
    return tau


def torsion_type(tau: KForm, data: G2Data) -> str:
    """'zero', 'positive' (tau^3 = 0), 'negative' (|tau^3|^2 = 2/3 |tau|^6) or 'generic'."""
    if tau.is_zero():
        return "zero"
    t3 = power(tau, 3)
    if t3.is_zero():
        return "positive"
    n2 = data.norm2(tau)
    if is_zero(data.norm2(t3) - Fraction(2, 3) * n2**3):
        return "negative"
    return "generic"


@dataclass(frozen=True)
class EigenformParts:
    """dtau = c1 phi + (Lambda^3_7 part) + (Lambda^3_27 part)."""

    dtau: KForm
    seven_part_zero: bool
    c1: object
    expected_c1: object

    @property
    def law_holds(self) -> bool:
        return self.seven_part_zero and is_zero(self.c1 - self.expected_c1)


def eigenform_parts(g: LieAlgebra | Extension, data: G2Data, tau: KForm | None = None) -> EigenformParts:
    alg = g.algebra if isinstance(g, Extension) else g
    if tau is None:
        tau = torsion_two_form(alg, data)
    dtau = ce_differential(alg, tau)
    seven_zero = wedge(dtau, data.phi).is_zero()
    c1 = wedge(dtau, data.star_phi).top_coeff() / (7 * data.vol_coeff)
    return EigenformParts(dtau, seven_zero, c1, data.norm2(tau) / 7)


def eigenform_check(g: LieAlgebra | Extension, data: G2Data):
    """mu != 0 with dtau = mu phi, else None (mu = 0 is not an eigenform)."""
    alg = g.algebra if isinstance(g, Extension) else g
    tau = torsion_two_form(alg, data)
    dtau = ce_differential(alg, tau)
    idx, c = next(iter(data.phi.terms.items()))
    mu = dtau.coeff(idx) / c
    if is_zero(mu) or dtau != data.phi * mu:
        return None
    if not is_zero(mu - data.norm2(tau) / 7):
        raise TorsionCheckError(f"eigenvalue {mu} differs from |tau|^2/7")
    return mu


# ---------------------------------------------------------------------------
# exactness and the reduction equations


def solve_exactness(g: LieAlgebra | Extension, phi: KForm) -> KForm | None:
    """Some 2-form chi with d chi = phi, or None."""
    alg = g.algebra if isinstance(g, Extension) else g
    m = d_matrix(alg, 2)
    x = linalg.solve(m, phi.to_vector())
    if x is None:
        return None
    return KForm.from_vector(alg.n, 2, x)


def solve_eq3(h: LieAlgebra, f, omega: KForm, rho: KForm) -> tuple[KForm, KForm] | None:
    """Find (nu, alpha) on h with d nu = rho and f.nu - d alpha = omega, or None."""
    n = h.n
    twos, ones = basis(n, 2), basis(n, 1)
    d_two = [h.d(b).to_vector() for b in twos]  # 3-form vectors
    f_two = [endo_action(f, b).to_vector() for b in twos]
    d_one = [h.d(b).to_vector() for b in ones]
    n2, n1 = len(twos), len(ones)
    rows = []
    rhs = []
    for r, target in enumerate(rho.to_vector()):
        rows.append([d_two[c][r] for c in range(n2)] + [Fraction(0)] * n1)
        rhs.append(target)
    for r, target in enumerate(omega.to_vector()):
        rows.append([f_two[c][r] for c in range(n2)] + [-d_one[c][r] for c in range(n1)])
        rhs.append(target)
    x = linalg.solve(rows, rhs)
    if x is None:
        return None
    return KForm.from_vector(n, 2, x[:n2]), KForm.from_vector(n, 1, x[n2:])


def exact_potential(nu: KForm, alpha: KForm) -> KForm:
    """chi = nu + e^7 ∧ alpha, which satisfies d chi = omega ∧ e^7 + rho under eq3."""
    e7 = KForm.monomial(7, (7,))
    return nu.with_dim(7) + wedge(e7, alpha.with_dim(7))


@dataclass
class ReductionReport:
    half_flat: bool
    nu_primitive_11: bool
    dnu_eq_rho: bool
    eq1: bool
    eq2: bool
    eq3: bool
    residuals: dict

    @property
    def eigenform_case(self) -> bool:
        return self.half_flat and self.nu_primitive_11 and self.dnu_eq_rho and self.eq1 and self.eq2

    @property
    def exact_case(self) -> bool:
        return self.dnu_eq_rho and self.eq3

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in ("half_flat", "nu_primitive_11", "dnu_eq_rho", "eq1", "eq2", "eq3")}
        d["residuals"] = {k: render(v) for k, v in self.residuals.items()}
        return d


def reduction_check(h: LieAlgebra, f, omega: KForm, rho: KForm, nu: KForm,
                    alpha: KForm | None = None, su3: SU3Data | None = None) -> ReductionReport:
    if not is_derivation(h, f):
        raise NotADerivationError("f is not a derivation of h")
    s = su3 or validate_su3(omega, rho)
    if alpha is None:
        alpha = KForm.zero(h.n, 1)
    res = {}
    res["d_rho"] = h.d(rho)
    res["d_omega2"] = h.d(power(omega, 2))
    res["nu_J"] = pullback(s.J, nu) - nu
    res["nu_omega2"] = wedge(nu, power(omega, 2))
    res["dnu_rho"] = h.d(nu) - rho
    fnu = endo_action(f, nu)
    res["eq1"] = fnu - omega
    res["eq2"] = wedge(omega, endo_action(f, omega)) - h.d(s.rho_hat) - wedge(omega, nu)
    res["eq3"] = fnu - h.d(alpha) - omega
    z = {k: v.is_zero() for k, v in res.items()}
    return ReductionReport(
        half_flat=z["d_rho"] and z["d_omega2"],
        nu_primitive_11=z["nu_J"] and z["nu_omega2"],
        dnu_eq_rho=z["dnu_rho"],
        eq1=z["eq1"],
        eq2=z["eq2"],
        eq3=z["eq3"],
        residuals={k: v for k, v in res.items() if not v.is_zero()},
    )


def closed_g2_from_extension(ext: Extension, s: SU3Data) -> G2Data:
    """G2 data of phi = omega ∧ e^7 + rho on h ⋊_f R; raises if phi is not closed."""
    data = su3_to_g2(s)
    if not ce_differential(ext.algebra, data.phi).is_zero():
        raise NotClosedError("omega ∧ e^7 + rho is not closed on the extension")
    return data


def closedness_conditions(ext: Extension, omega: KForm, rho: KForm) -> dict:
    """d phi = 0 iff d_h rho = 0 and f.rho = d_h omega."""
    h = ext.base
    return {
        "d_rho": h.d(rho),
        "f_rho_minus_d_omega": endo_action(ext.f, rho) - h.d(omega),
    }
