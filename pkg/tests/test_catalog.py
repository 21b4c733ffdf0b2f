from dataclasses import replace
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from exactg2.catalog import (
    BUILDER_DATA,
    N28_J0,
    N28_OMEGA0,
    N28_RHO0,
    N28_RHO0_HAT,
    N28_RHO0_HAT_PRINTED,
    TABLE1,
    BuilderError,
    CatalogError,
    ForbiddenParameterError,
    _h_matrix,
    build_exact_sl3c,
    builder_forms,
    builtin,
    builtin_algebra,
    builtin_names,
    closed_derivations,
    form_spaces,
    g_family_e34,
    load_catalog,
    make_entry,
    n9_derivation,
    n28_derivation,
    obstruction_halfflat_exact,
    param_family,
    render_catalog,
    resolve_algebra,
    sl3c_admissibility,
    strongly_unimodular_derivations,
)
from exactg2.exterior import basis, e, endo_action, parse_form, pullback
from exactg2.gstruct import check_su3, lambda_invariant, reduction_check, validate_su3
from exactg2.liealg import is_derivation
from exactg2.suite import n9_exact_rho
from test_gstruct import lambda_oracle

from conftest import fractions

F = Fraction


def test_builtins_load_and_validate():
    names = builtin_names()
    for n in (*TABLE1, "R6", "r4", "n3r", "n4fil"):
        assert n in names
        assert builtin(n).algebra.is_lie()
    assert builtin("n9").attachment("exact_g2").kind == "exact_g2"
    with pytest.raises(KeyError):
        builtin_algebra("n99")


def test_resolve_algebra_inline_notation():
    L = resolve_algebra("(0,0,12)")
    assert L.n == 3 and L.d(e(3, 3)) == e(3, 1, 2)


_NOT_DER = tuple(tuple(F(int(i == 0 and j == 5)) for j in range(6)) for i in range(6))


@pytest.mark.parametrize("field,bad,invariant", [
    ("nu", e(6, 1, 2), "dnu_eq_rho"),
    ("f", _NOT_DER, "derivation"),
    ("omega", parse_form("e14+e23+e56", 6), "su3"),
])
def test_corrupted_attachment_names_invariant(field, bad, invariant):
    ent = builtin("n9")
    a = ent.attachment("exact_g2")
    with pytest.raises(CatalogError) as exc:
        make_entry("n9", ent.algebra, [replace(a, **{field: bad})])
    assert exc.value.invariant == invariant and exc.value.name == "n9"


def test_corrupted_potential_fails_eq3():
    ent = builtin("n9")
    a = ent.attachment("exact_g2")
    # adding a closed 2-form keeps d nu = rho but breaks f.nu - d alpha = omega
    closed = next(c for c in form_spaces(ent.algebra, 2).closed if not endo_action(a.f, c).is_zero())
    with pytest.raises(CatalogError) as exc:
        make_entry("n9", ent.algebra, [replace(a, nu=a.nu + closed)])
    assert exc.value.invariant == "eq3"


@pytest.mark.parametrize("name", sorted(TABLE1))
def test_builder_reproduces_table(name):
    a1, a2, w1, w2, g, v = builder_forms(name)
    b = build_exact_sl3c(builtin_algebra(name), a1, a2, w1, w2, g, v)
    assert b.lam == -4
    assert builtin_algebra(name).d(b.nu) == b.rho
    assert check_su3(b.omega, b.rho).ok
    assert b.case == ("a" if BUILDER_DATA[name].gamma else "b")
    assert b.case == sl3c_admissibility(builtin_algebra(name)).case


def test_builder_preconditions():
    L = builtin_algebra("n28")
    a1, a2, w1, w2, _, v = builder_forms("n28")
    with pytest.raises(BuilderError) as exc:
        build_exact_sl3c(L, a1, a2, w1, w1)
    assert exc.value.precondition == "omega1_wedge_omega2_zero"
    with pytest.raises(BuilderError) as exc:
        build_exact_sl3c(L, a1, a1, w1, w2)
    assert exc.value.precondition == "alpha_independent"
    with pytest.raises(BuilderError) as exc:
        build_exact_sl3c(L, a2, a1, w1, w2)
    assert exc.value.precondition == "d_alpha1_eq_omega1"
    with pytest.raises(BuilderError) as exc:
        build_exact_sl3c(L, a1, a2, w1, w2, v=(v[1], v[0], v[2], v[3]))
    assert exc.value.precondition == "v_basis"


def test_admissibility_rejects():
    assert sl3c_admissibility(builtin_algebra("R6")).case == "neither"
    with pytest.raises(ValueError):
        sl3c_admissibility(builtin_algebra("r4"))
    with pytest.raises(ValueError):
        sl3c_admissibility(resolve_algebra("(0,13,-12,0,0,0)"))


def _sympy_rank(forms):
    if not forms:
        return 0
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in f.to_vector()] for f in forms]).rank()


def _sympy_d_rank(L, k):
    return _sympy_rank([L.d(b) for b in basis(L.n, k)])


@pytest.mark.parametrize("name", ["R6", "n28", "n9", "n1"])
@pytest.mark.parametrize("k", [2, 3, 4])
def test_form_spaces_against_sympy(name, k):
    L = builtin_algebra(name)
    fs = form_spaces(L, k)
    n_k = len(basis(6, k))
    assert len(fs.exact) == _sympy_d_rank(L, k - 1)
    assert len(fs.closed) == n_k - _sympy_d_rank(L, k)
    assert all(L.d(c).is_zero() for c in fs.closed)
    assert fs.betti == form_spaces(L, k).betti


def test_form_spaces_examples():
    R6 = builtin_algebra("R6")
    assert len(form_spaces(R6, 3).exact) == 0 and len(form_spaces(R6, 3).closed) == 20
    ex = form_spaces(builtin_algebra("n28"), 3).exact
    assert _sympy_rank(list(ex) + [N28_RHO0]) == len(ex)


def test_n28_model_constants():
    L = builtin_algebra("n28")
    assert L.d(e(6, 5, 6)) == N28_RHO0
    s = validate_su3(N28_OMEGA0, N28_RHO0)
    assert s.rho_hat == N28_RHO0_HAT
    assert L.d(N28_RHO0_HAT) == e(6, 1, 2, 3, 4) * 4
    # the printed constant is closed, so it cannot be the model rho_hat
    assert L.d(N28_RHO0_HAT_PRINTED).is_zero()
    assert [list(r) for r in s.J] == [list(r) for r in N28_J0]


def test_h_display_matrix():
    m = _h_matrix(F(2), F(3), F(5), F(7))
    assert m == [
        [2, -3, 0, 0, 0, 0],
        [3, 2, 0, 0, 0, 0],
        [0, 0, F(-5, 2), -5, 0, 0],
        [0, 0, 5, F(-5, 2), 0, 0],
        [0, 0, 7, 0, F(-1, 2), -8],
        [0, 0, 0, -7, 8, F(-1, 2)],
    ]
    assert is_derivation(builtin_algebra("n28"), m)


@pytest.mark.parametrize("family,params,label", [
    ("f", {"a": 0, "b1": 1, "b2": 2}, "a"),
    ("g", {"a": F(-1, 2), "b1": 0, "b2": 0, "c": 1}, "2a+1"),
    ("h", {"a": -1, "b1": 2, "b2": -1, "r": 1}, "(a+1)^2+(b1+2b2)^2"),
    ("diag", {"x1": 1, "y1": 0, "x2": -1, "y2": 0}, "re(w1+w2)"),
    ("jordan", {"x": 0, "y": 1}, "re w"),
])
def test_forbidden_loci(family, params, label):
    with pytest.raises(ForbiddenParameterError) as exc:
        param_family(family, params)
    assert exc.value.denominator == label


def test_family_parameter_validation():
    with pytest.raises(ValueError):
        param_family("g", {"a": 1})
    with pytest.raises(ValueError):
        param_family("nope", {})


@given(fractions().filter(lambda a: a not in (0, F(-1, 2))), fractions(), fractions(), fractions())
def test_g_family_satisfies_eq3(a, b1, b2, c):
    inst = param_family("g", {"a": a, "b1": b1, "b2": b2, "c": c})
    h = builtin_algebra("n28")
    assert is_derivation(h, inst.f)
    rep = reduction_check(h, inst.f, inst.omega, inst.rho, inst.nu, inst.alpha)
    assert rep.eq3 and rep.dnu_eq_rho


def test_printed_g_coefficient_fails_eq3():
    a, b1, b2, c = F(1), F(0), F(0), F(1)
    assert g_family_e34(a, b1, b2, c) != g_family_e34(a, b1, b2, c, printed=True)
    inst = param_family("g", {"a": a, "b1": b1, "b2": b2, "c": c})
    wrong = inst.nu + e(6, 3, 4) * (g_family_e34(a, b1, b2, c, printed=True) - g_family_e34(a, b1, b2, c))
    rep = reduction_check(builtin_algebra("n28"), inst.f, inst.omega, inst.rho, wrong, inst.alpha)
    assert not rep.eq3


@given(st.sampled_from(["f", "h_b", "jordan"]), fractions(), fractions(), fractions())
def test_some_families_commute_with_J0(family, x, y, z):
    params = {"f": {"a": x or 1, "b1": y, "b2": z}, "h_b": {"b": y}, "jordan": {"x": x or 1, "y": y}}[family]
    if family == "f" and params["a"] == F(-1, 2):
        params["a"] = 1
    f = param_family(family, params).f
    n = 6
    fj = [[sum(f[i][k] * N28_J0[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    jf = [[sum(N28_J0[i][k] * f[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert fj == jf


def test_obstruction_examples():
    n4 = builtin_algebra("n4")
    assert obstruction_halfflat_exact(n4, e(6, 1))
    assert obstruction_halfflat_exact(n4, e(6, 2))
    assert not obstruction_halfflat_exact(n4, e(6, 3))
    n28 = builtin_algebra("n28")
    for i in range(1, 7):
        assert not obstruction_halfflat_exact(n28, e(6, i))


def test_derivation_parametrizations_are_derivations():
    n9, n28 = builtin_algebra("n9"), builtin_algebra("n28")
    p = {k: F(i + 1, 3) for i, k in enumerate(("f43", "f44", "f51", "f53", "f54", "f55", "f61", "f62", "f63", "f64"))}
    assert is_derivation(n9, n9_derivation(p))
    assert is_derivation(n28, n28_derivation([[(1, 2), (3, 4)], [(5, 6), (7, 8)]], [[1, 2, 3, 4], [5, 6, 7, 8]]))


def test_strongly_unimodular_derivations_trace_free():
    h = builtin_algebra("n28")
    for D in strongly_unimodular_derivations(h):
        assert sum(D[i][i] for i in range(6)) == 0


def test_closed_derivations_solve_linear_condition():
    h = builtin_algebra("n28")
    aff = closed_derivations(h, N28_OMEGA0, N28_RHO0)
    assert not aff.empty
    assert endo_action(aff.particular, N28_RHO0) == h.d(N28_OMEGA0)
    for D in aff.homogeneous:
        assert endo_action(D, N28_RHO0).is_zero()


@pytest.mark.parametrize("c", [
    {1: 1, 2: 0, 3: 2, 4: 1, 5: 0, 6: 0, 7: 1, 8: 0},
    {1: 0, 2: 1, 3: -1, 4: 2, 5: 3, 6: -2, 7: F(1, 2), 8: 5},
    {1: 2, 2: -1, 3: 3, 4: 0, 5: 1, 6: 1, 7: -2, 8: 1},
])
def test_n9_exact_rho_lambda_uses_six_form_volume(c):
    # lambda is measured against e^{123456}; the tensor oracle fixes the scale
    c = {k: F(v) for k, v in c.items()}
    rho = n9_exact_rho(c)
    L = builtin_algebra("n9")
    ex = form_spaces(L, 3).exact
    assert _sympy_rank(list(ex) + [rho]) == len(ex)
    want = -4 * c[7] ** 2 * (c[3] * c[7] - c[4] ** 2)
    assert lambda_invariant(rho) == want
    assert lambda_oracle(rho) == pytest.approx(float(want), abs=1e-9)


CATALOG_TEXT = """
# comment line
n9 := (0,0,0,12,14-23,15+34)
n9.omega := {omega}
n9.rho := {rho}
n9.nu := {nu}
n9.f := {f}
ab := (0,0,0)
"""


def _n9_text():
    from exactg2.catalog import _plain
    a = builtin("n9").attachment("exact_g2")
    f = " ; ".join(" ".join(str(x) for x in r) for r in a.f)
    return CATALOG_TEXT.format(omega=_plain(a.omega), rho=_plain(a.rho), nu=_plain(a.nu), f=f)


def test_load_and_render_roundtrip():
    cat = load_catalog(_n9_text())
    assert set(cat) == {"n9", "ab"}
    assert cat["n9"].attachments[0].kind == "exact_g2"
    again = load_catalog(render_catalog(cat))
    assert render_catalog(again) == render_catalog(cat)
    assert again["n9"].attachments[0].nu == cat["n9"].attachments[0].nu


def test_load_catalog_errors():
    with pytest.raises(CatalogError) as exc:
        load_catalog("x.rho := e123\n")
    assert exc.value.invariant == "declared_before_use"
    with pytest.raises(CatalogError) as exc:
        load_catalog("bad := (0,0,12,34)\n")
    assert exc.value.invariant == "d_squared_zero"
    with pytest.raises(CatalogError):
        load_catalog("garbage line\n")
    text = _n9_text().replace("n9.nu := ", "n9.nu := e12+")
    with pytest.raises(CatalogError) as exc:
        load_catalog(text)
    assert exc.value.invariant in ("dnu_eq_rho", "eq3")
