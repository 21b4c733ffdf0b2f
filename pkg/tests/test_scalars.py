import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from exactg2.scalars import (
    FieldExtensionError,
    QSqrt,
    field_sqrt,
    format_scalar,
    is_zero,
    rational_root,
    rational_sqrt,
    sign,
    squarefree_part,
)

from conftest import fractions

qsqrt5 = st.builds(lambda a, b: QSqrt(a, b, 5), fractions(), fractions())


def test_squarefree_part():
    assert squarefree_part(12) == (2, 3)
    assert squarefree_part(5) == (1, 5)
    assert squarefree_part(49) == (7, 1)


def test_rational_sqrt_and_roots():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None
    assert rational_root(Fraction(-27, 8), 3) == Fraction(-3, 2)
    assert rational_root(Fraction(512), 9) == 2
    assert rational_root(Fraction(3), 9) is None


def test_golden_number():
    a = QSqrt(Fraction(3, 2), Fraction(1, 2), 5)
    assert a * a == 3 * a - 1
    assert a.sign() == 1 and (1 - a).sign() == -1
    assert format_scalar(a) == "(3/2+1/2*sqrt5)"


@given(qsqrt5, qsqrt5, qsqrt5)
def test_field_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    if x:
        assert x * x.inverse() == 1
        assert (y / x) * x == y


@given(qsqrt5)
def test_sign_matches_float(x):
    if x.a == 0 and x.b == 0:
        assert sign(x) == 0 and is_zero(x)
    else:
        assert sign(x) == (1 if float(x) > 0 else -1)


@given(fractions())
def test_hash_consistent_with_fraction(q):
    assert QSqrt(q, 0, 5) == q
    assert hash(QSqrt(q, 0, 5)) == hash(q)


def test_field_sqrt_extends_and_stays_exact():
    assert field_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    r = field_sqrt(Fraction(5, 4))
    assert isinstance(r, QSqrt) and r * r == Fraction(5, 4)
    r8 = field_sqrt(Fraction(8))
    assert r8 * r8 == 8 and r8.d == 2
    with pytest.raises(FieldExtensionError):
        field_sqrt(Fraction(2), allow_extension=False)
    s = field_sqrt(QSqrt(Fraction(3, 2), Fraction(1, 2), 5))  # the golden number squared is a
    assert s * s == QSqrt(Fraction(3, 2), Fraction(1, 2), 5)


def test_field_sqrt_float():
    assert math.isclose(field_sqrt(2.0), math.sqrt(2))


def test_squarefree_part_large_cofactor_is_fast():
    p, q = 1_000_000_007, 998_244_353
    s, m = squarefree_part(4 * p * q)
    assert (s, m) == (2, p * q)
    assert squarefree_part(9 * p * p) == (3 * p, 1)
