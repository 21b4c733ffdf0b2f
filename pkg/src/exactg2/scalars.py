"""Exact scalar fields: rationals and real quadratic extensions Q(sqrt d).

Everything in the package works with plain ``fractions.Fraction`` by default.
``QSqrt`` realizes a + b*sqrt(d) with rational a, b and a fixed square-free d;
it mixes freely with ints and Fractions.  Floats are tolerated as a numeric
fallback and compared against ``FLOAT_TOL``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

FLOAT_TOL = 1e-9


class FieldExtensionError(ArithmeticError):
    """Raised when an exact operation leaves the current scalar field."""


def squarefree_part(n: int, trial_bound: int = 1 << 14) -> tuple[int, int]:
    """Split a nonzero integer as ``n = s**2 * m``; return (s, m).

    Prime squares are stripped by trial division up to ``trial_bound`` and a
    square cofactor is detected exactly.  A larger repeated prime factor may
    survive in m, which is still a valid radicand since m is never a square.
    """
    if n == 0:
        raise ValueError("zero has no square-free part")
    sign = -1 if n < 0 else 1
    n = abs(n)
    s, m = 1, 1
    p = 2
    while p * p <= n and p <= trial_bound:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            m *= p
        p += 1 if p == 2 else 2
    r = math.isqrt(n)
    if r * r == n:
        s *= r
    else:
        m *= n
    return s, sign * m


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a rational, or None if it is not a square."""
    q = Fraction(q)
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def rational_root(q: Fraction, k: int) -> Fraction | None:
    """Exact real k-th root of a rational, or None."""
    q = Fraction(q)
    if q < 0:
        if k % 2 == 0:
            return None
        r = rational_root(-q, k)
        return None if r is None else -r

    def iroot(n: int) -> int | None:
        r = round(n ** (1.0 / k)) if n < 2**1000 else int(math.exp(math.log(n) / k))
        for c in (r - 1, r, r + 1):
            if c >= 0 and c**k == n:
                return c
        lo, hi = 0, 1 << (n.bit_length() // k + 1)
        while lo <= hi:
            mid = (lo + hi) // 2
            p = mid**k
            if p == n:
                return mid
            if p < n:
                lo = mid + 1
            else:
                hi = mid - 1
        return None

    rn, rd = iroot(q.numerator), iroot(q.denominator)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


class QSqrt:
    """Element a + b*sqrt(d) of the real field Q(sqrt d)."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 5):
        s, m = squarefree_part(d)
        if s != 1 or m < 2:
            raise ValueError(f"d must be a square-free integer >= 2, got {d}")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    @classmethod
    def sqrt(cls, d: int) -> QSqrt:
        return cls(0, 1, d)

    def _coerce(self, other) -> QSqrt | None:
        if isinstance(other, QSqrt):
            if other.d != self.d:
                if other.b == 0:
                    return QSqrt(other.a, 0, self.d)
                if self.b == 0:
                    return None
                raise FieldExtensionError(
                    f"cannot mix Q(sqrt {self.d}) and Q(sqrt {other.d})"
                )
            return other
        if isinstance(other, (int, Rational)):
            return QSqrt(other, 0, self.d)
        return None

    def __add__(self, other):
        if isinstance(other, QSqrt) and other.d != self.d and self.b == 0:
            return other + self.a
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QSqrt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSqrt) and other.d != self.d and self.b == 0:
            return other * self.a
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QSqrt(
            self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d
        )

    __rmul__ = __mul__

    def conjugate(self) -> QSqrt:
        return QSqrt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> QSqrt:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        return QSqrt(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, QSqrt) and other.d != self.d and self.b == 0:
            return other.inverse() * self.a
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        acc = QSqrt(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def sign(self) -> int:
        """Exact sign of the real number a + b*sqrt(d)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with d*b^2
        diff = self.a * self.a - self.d * self.b * self.b
        return sa if diff > 0 else (sb if diff < 0 else 0)

    def __eq__(self, other):
        if isinstance(other, QSqrt):
            if other.d != self.d:
                return self.b == 0 and other.b == 0 and self.a == other.a
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Rational)):
            return self.b == 0 and self.a == other
        if isinstance(other, float):
            return abs(float(self) - other) <= FLOAT_TOL
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        return f"QSqrt({self.a!s}, {self.b!s}, {self.d})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[int, Fraction, QSqrt, float]


def is_zero(x) -> bool:
    if isinstance(x, float):
        return abs(x) <= FLOAT_TOL
    return x == 0


def sign(x) -> int:
    """Exact sign for rationals and Q(sqrt d); tolerance-based for floats."""
    if isinstance(x, QSqrt):
        return x.sign()
    if isinstance(x, float) and abs(x) <= FLOAT_TOL:
        return 0
    return (x > 0) - (x < 0)


def to_scalar(x):
    """Normalize ints (and decimal strings) to Fraction; leave other field elements alone."""
    if isinstance(x, (QSqrt, float, Fraction)):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x)
    raise TypeError(f"not a supported scalar: {x!r}")


def field_sqrt(x, allow_extension: bool = True):
    """Exact square root of a nonnegative field element.

    For a rational that is not a square, the result lives in Q(sqrt m) where m is
    the square-free part; for an element of Q(sqrt d) the root must stay in that
    field.  Raises ``FieldExtensionError`` when no exact root is available.
    """
    if isinstance(x, float):
        if x < -FLOAT_TOL:
            raise FieldExtensionError("square root of a negative number")
        return math.sqrt(max(x, 0.0))
    if isinstance(x, QSqrt):
        if x.b == 0:
            r = field_sqrt(x.a, allow_extension)
            if isinstance(r, QSqrt) and r.d != x.d:
                raise FieldExtensionError(
                    f"sqrt({x.a}) needs Q(sqrt {r.d}), current field is Q(sqrt {x.d})"
                )
            return r if isinstance(r, QSqrt) else QSqrt(r, 0, x.d)
        if x.sign() < 0:
            raise FieldExtensionError("square root of a negative number")
        # (p + q sqrt d)^2 = x  <=>  p^2 + d q^2 = a,  2pq = b
        disc = rational_sqrt(x.a * x.a - x.d * x.b * x.b)
        if disc is not None:
            for t in ((x.a + disc) / 2, (x.a - disc) / 2):
                p = rational_sqrt(t)
                if p:
                    q = x.b / (2 * p)
                    r = QSqrt(p, q, x.d)
                    if r * r == x:
                        return r if r.sign() >= 0 else -r
        raise FieldExtensionError(f"{x} has no square root in Q(sqrt {x.d})")
    q = Fraction(x)
    if q < 0:
        raise FieldExtensionError(f"square root of negative rational {q}")
    r = rational_sqrt(q)
    if r is not None:
        return r
    if not allow_extension:
        raise FieldExtensionError(f"{q} is not a rational square")
    num = q.numerator * q.denominator
    s, m = squarefree_part(num)
    return QSqrt(0, Fraction(s, q.denominator), m)


def format_scalar(x) -> str:
    if isinstance(x, QSqrt):
        if x.b == 0:
            return str(x.a)
        bpart = "" if x.b == 1 else ("-" if x.b == -1 else f"{x.b}*")
        rad = f"{bpart}sqrt{x.d}"
        if x.a == 0:
            return rad
        if rad.startswith("-"):
            return f"({x.a}{rad})"
        return f"({x.a}+{rad})"
    if isinstance(x, float):
        return repr(x)
    return str(Fraction(x))
