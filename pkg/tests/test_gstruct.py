import itertools
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from exactg2 import linalg
from exactg2.catalog import builtin, builtin_algebra, param_family
from exactg2.exterior import KForm, e, parse_form, power, pullback, wedge
from exactg2.gstruct import (
    NotClosedError,
    SU3ValidationError,
    check_su3,
    closed_g2_from_extension,
    eigenform_check,
    eigenform_parts,
    g2_bilinear,
    g2_from_phi,
    induced_J,
    is_g2,
    k_rho,
    lambda2_7_member,
    lambda2_14_member,
    lambda_invariant,
    reduction_check,
    solve_eq3,
    solve_exactness,
    split_two_form,
    su3_to_g2,
    torsion_two_form,
    torsion_type,
    validate_su3,
)
from exactg2.liealg import NotADerivationError, semidirect_extend

from conftest import forms, matrices

F = Fraction
OMEGA0 = parse_form("e12+e34+e56", 6)
RHO0 = parse_form("e135-e146-e236-e245", 6)


def _levi_civita(n):
    eps = np.zeros((n,) * n)
    for p in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        eps[p] = -1.0 if inv % 2 else 1.0
    return eps


EPS6 = _levi_civita(6)


def lambda_oracle(rho: KForm) -> float:
    """Independent tensor computation of tr(K^2)/6 with K^i_j = eps^{i a..e} rho_{j a b} rho_{c d e} / 12."""
    t = np.zeros((6, 6, 6))
    for (i, j, k), c in rho.terms.items():
        for p in itertools.permutations((0, 1, 2)):
            idx = [(i, j, k)[q] - 1 for q in p]
            inv = sum(1 for a in range(3) for b in range(a + 1, 3) if p[a] > p[b])
            t[tuple(idx)] = float(c) * (-1 if inv % 2 else 1)
    K = np.einsum("iabcde,jab,cde->ij", EPS6, t, t) / 12.0
    return float(np.trace(K @ K)) / 6.0


def test_model_lambda_pinned_by_oracle():
    assert lambda_invariant(RHO0) == -4
    assert lambda_oracle(RHO0) == pytest.approx(-4.0)


@given(forms(6, k=3))
def test_lambda_matches_tensor_oracle(rho):
    assert float(lambda_invariant(rho)) == pytest.approx(lambda_oracle(rho), rel=1e-9, abs=1e-9)


@given(forms(6, k=3), matrices(6, bound=2))
def test_lambda_det_equivariance(rho, A):
    assert lambda_invariant(pullback(A, rho)) == linalg.det(A) ** 2 * lambda_invariant(rho)


def test_model_J_and_rho_hat_frozen():
    J = induced_J(RHO0)
    assert J[1][0] == -1 and J[0][1] == 1  # J e_1 = -e_2
    assert linalg.matmul(J, J) == linalg.scale(-1, linalg.identity(6))
    s = validate_su3(OMEGA0, RHO0)
    assert s.rho_hat == parse_form("-e136-e145-e235+e246", 6)
    assert [list(r) for r in s.g] == linalg.identity(6)
    # normalization in the form rho_hat ∧ rho = 2/3 omega^3
    assert wedge(s.rho_hat, RHO0) == power(OMEGA0, 3) * F(2, 3)


@settings(max_examples=15)
@given(matrices(6, bound=1), st.sampled_from(list(itertools.combinations(range(1, 7), 3))),
       st.integers(1, 3))
def test_J_squares_to_minus_one_over_extension_fields(A, idx, c):
    # the extra term usually makes sqrt(-lambda) irrational
    assume(linalg.det(A) != 0)
    rho = pullback(A, RHO0) + e(6, *idx) * c
    assume(lambda_invariant(rho) < 0)
    J = induced_J(rho)
    assert linalg.matmul(J, J) == linalg.scale(-1, linalg.identity(6))


def test_su3_failure_modes():
    assert check_su3(OMEGA0, RHO0 * 2).failures() == ["normalized"]
    assert "sl3c" in check_su3(OMEGA0, e(6, 1, 2, 3)).failures()
    assert "compatible" in check_su3(parse_form("e14+e23+e56", 6), RHO0).failures()
    assert check_su3(parse_form("e12+e34-e56", 6), RHO0).failures() == ["metric_positive"]
    with pytest.raises(SU3ValidationError):
        validate_su3(OMEGA0, RHO0 * 2)


def test_phi0_metric_and_star():
    s = validate_su3(OMEGA0, RHO0)
    data = su3_to_g2(s)
    assert g2_bilinear(data.phi) == linalg.scale(6, linalg.identity(7))
    exact = g2_from_phi(data.phi)
    assert [list(r) for r in exact.g] == linalg.identity(7) and exact.vol_coeff == 1
    assert exact.star_phi == data.star_phi
    assert data.star_phi == power(OMEGA0, 2).with_dim(7) * F(1, 2) + wedge(e(7, 7), s.rho_hat.with_dim(7))
    assert wedge(data.phi, data.star_phi) == e(7, 1, 2, 3, 4, 5, 6, 7) * 7


def test_non_g2_form_rejected():
    assert not is_g2(e(7, 1, 2, 3))
    with pytest.raises(ValueError):
        g2_from_phi(e(7, 1, 2, 3) + e(7, 4, 5, 6))


def test_numeric_fallback_warns():
    phi = su3_to_g2(validate_su3(OMEGA0, RHO0)).phi * 2
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        data = g2_from_phi(phi)
    assert data.numeric and w
    assert data.g[0][0] == pytest.approx(2 ** (2 / 3), rel=1e-9)


@given(forms(7, k=2))
def test_two_form_splitting(nu):
    data = su3_to_g2(validate_su3(OMEGA0, RHO0))
    n7, n14 = split_two_form(nu, data)
    assert n7 + n14 == nu
    assert lambda2_7_member(n7, data) and lambda2_14_member(n14, data)


def _g_instance():
    return param_family("g", {"a": F(1), "b1": F(1, 2), "b2": F(-1), "c": F(3)})


def test_torsion_identities_on_family():
    inst = _g_instance()
    data = closed_g2_from_extension(inst.extension, validate_su3(inst.omega, inst.rho))
    tau = torsion_two_form(inst.extension, data)
    assert tau == inst.expected_tau
    assert wedge(tau, data.star_phi).is_zero()  # tau ∧ *phi = 0 on Lambda^2_14
    parts = eigenform_parts(inst.extension, data)
    assert parts.law_holds
    assert eigenform_check(inst.extension, data) is None
    assert torsion_type(tau, data) == "generic"


def test_exactness_solver_and_potential():
    inst = _g_instance()
    data = closed_g2_from_extension(inst.extension, validate_su3(inst.omega, inst.rho))
    chi = solve_exactness(inst.extension, data.phi)
    assert chi is not None and inst.extension.algebra.d(chi) == data.phi


def test_not_closed_raises():
    L = builtin_algebra("n28")
    f = [[F(int(i == j)) for j in range(6)] for i in range(6)]
    for i in (4, 5):
        f[i][i] = F(2)
    ext = semidirect_extend(L, f)
    with pytest.raises(NotClosedError):
        closed_g2_from_extension(ext, validate_su3(OMEGA0, RHO0))


def test_solve_eq3_recovers_n9_structure():
    a = builtin("n9").attachment("exact_g2")
    h = builtin_algebra("n9")
    sol = solve_eq3(h, a.f, a.omega, a.rho)
    assert sol is not None
    nu, alpha = sol
    rep = reduction_check(h, a.f, a.omega, a.rho, nu, alpha)
    assert rep.exact_case


def test_reduction_check_rejects_non_derivation():
    a = builtin("n9").attachment("exact_g2")
    bad = [[F(1) if (i, j) == (0, 5) else F(0) for j in range(6)] for i in range(6)]
    with pytest.raises(NotADerivationError):
        reduction_check(builtin_algebra("n9"), bad, a.omega, a.rho, a.nu)


def test_k_rho_dimension_error():
    with pytest.raises(ValueError):
        k_rho(e(7, 1, 2, 3))
