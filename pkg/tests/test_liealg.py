from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from exactg2 import linalg
from exactg2.catalog import TABLE1, builtin_algebra
from exactg2.exterior import KForm, e, endo_action, parse_form, wedge
from exactg2.liealg import (
    JacobiError,
    MalformedTokenError,
    NotADerivationError,
    RepeatedIndexError,
    abelian,
    center,
    central_series,
    d_matrix,
    derivation_equations,
    derivation_space,
    exact_g2_center_filter,
    exp_nilpotent,
    is_automorphism,
    is_derivation,
    parse_notation,
    render_notation,
    semidirect_extend,
    unimodularity,
)

from conftest import forms, fractions, vectors

F = Fraction
NAMES = list(TABLE1)
algebras = st.sampled_from(NAMES).map(builtin_algebra)


def test_salamon_convention_42():
    L = parse_notation("(0,0,0,0,13+42,14+23)")
    assert L.diffs[4] == e(6, 1, 3) - e(6, 2, 4)
    assert render_notation(L) == "(0,0,0,0,13-24,14+23)"


@pytest.mark.parametrize("name", NAMES)
def test_render_roundtrip(name):
    L = builtin_algebra(name)
    assert parse_notation(render_notation(L)) == L


@pytest.mark.parametrize("text,exc", [
    ("", MalformedTokenError),
    ("(0,0,1a)", MalformedTokenError),
    ("(0,0,123)", MalformedTokenError),
    ("(0,0,14)", MalformedTokenError),
    ("(0,0,11)", RepeatedIndexError),
    ("0,0,12", MalformedTokenError),
])
def test_notation_errors(text, exc):
    with pytest.raises(exc):
        parse_notation(text)


def test_jacobi_failure_reports_residual():
    with pytest.raises(JacobiError) as info:
        parse_notation("(0,0,12,34)")
    assert info.value.residuals[4] == e(4, 1, 2, 4)


@given(algebras, forms(6, kmax=4))
def test_d_squared_zero(L, a):
    assert L.d(L.d(a)).is_zero()


@given(algebras, forms(6, kmax=3), forms(6, kmax=3))
def test_d_leibniz(L, a, b):
    assert L.d(wedge(a, b)) == wedge(L.d(a), b) + wedge(a, L.d(b)) * ((-1) ** a.k)


@given(algebras, vectors(6), vectors(6), vectors(6))
def test_bracket_jacobi_and_duality(L, x, y, z):
    br = L.bracket
    jac = [a + b + c for a, b, c in zip(br(x, br(y, z)), br(y, br(z, x)), br(z, br(x, y)))]
    assert all(t == 0 for t in jac)
    # d alpha (X, Y) = -alpha([X, Y]) on one-forms
    for k in range(6):
        dk = L.diffs[k]
        val = sum(c * (x[i - 1] * y[j - 1] - x[j - 1] * y[i - 1]) for (i, j), c in dk.terms.items())
        assert val == -br(x, y)[k]


def test_d_matrix_columns():
    L = builtin_algebra("n9")
    m = d_matrix(L, 1)
    for j in range(6):
        assert KForm.from_vector(6, 2, [r[j] for r in m]) == L.diffs[j]


def test_central_series_frozen():
    ch9, ch28 = central_series(builtin_algebra("n9")), central_series(builtin_algebra("n28"))
    assert ch9.descending_dims() == [6, 3, 2, 1, 0] and ch9.ascending_dims() == [0, 1, 2, 4, 6]
    assert ch28.descending_dims() == [6, 2, 0] and ch28.ascending_dims() == [0, 2, 6]
    assert ch9.step == 4 and ch28.step == 2
    assert len(center(abelian(6))) == 6


@pytest.mark.parametrize("name", NAMES)
def test_derivation_dimension_against_sympy(name):
    L = builtin_algebra(name)
    eqs = derivation_equations(L)
    rank = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in eqs]).rank()
    ders = derivation_space(L)
    assert len(ders) == 36 - rank
    assert all(is_derivation(L, D) for D in ders)


def test_derivation_dims_frozen():
    assert len(derivation_space(builtin_algebra("n9"))) == 10
    assert len(derivation_space(builtin_algebra("n28"))) == 16


@given(algebras, st.data())
def test_exp_of_nilpotent_inner_derivation_is_automorphism(L, data):
    x = data.draw(vectors(6))
    A = exp_nilpotent(L.ad(x))
    assert is_automorphism(L, A)


@given(algebras, st.data())
def test_extension_differentials(L, data):
    ders = derivation_space(L)
    coeffs = data.draw(st.lists(fractions(), min_size=len(ders), max_size=len(ders)))
    f = linalg.zeros(6, 6)
    for c, D in zip(coeffs, ders):
        f = linalg.add(f, linalg.scale(c, D))
    ext = semidirect_extend(L, f)
    assert ext.algebra.is_lie()
    e7 = e(7, 7)
    for i in range(6):
        a = e(6, i + 1)
        assert ext.algebra.d(a.with_dim(7)) == L.d(a).with_dim(7) + wedge(e7, endo_action(f, a).with_dim(7))


def test_extension_rejects_non_derivation():
    L = builtin_algebra("n28")
    f = linalg.zeros(6, 6)
    f[0][0] = F(1)
    with pytest.raises(NotADerivationError):
        semidirect_extend(L, f)


def test_unimodularity_of_diagonal_n9_extension():
    f = [[F(0)] * 6 for _ in range(6)]
    for i, v in enumerate((F(1, 2), F(-3, 4), F(1), F(-1, 4), F(1, 4), F(3, 4))):
        f[i][i] = v
    rep = unimodularity(semidirect_extend(builtin_algebra("n9"), f))
    assert not rep.unimodular and not rep.strongly_unimodular
    assert rep.quotient_traces[-1] == (F(3, 4), F(-1, 4), F(1, 4), F(3, 4))


def test_nilpotent_extension_is_strongly_unimodular_and_fails_center_filter():
    ext = semidirect_extend(builtin_algebra("n28"), linalg.zeros(6, 6))
    rep = unimodularity(ext)
    assert rep.unimodular and rep.strongly_unimodular
    flt = exact_g2_center_filter(ext.algebra)
    assert flt.center_dim == 3 and not flt.passes
