"""Exact scalars: rationals (``fractions.Fraction``) and the field Q(sqrt 2).

Rationals are plain :class:`fractions.Fraction` values; they are always in
lowest terms with a positive denominator.  :class:`QuadExt` holds numbers
``a + b*sqrt(2)`` with ``b != 0``; any arithmetic result whose irrational
part vanishes collapses back to a ``Fraction`` so that structural equality
coincides with numeric equality.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from ..errors import ParseError

Rational = Fraction

# Interval endpoints only; never the result of arithmetic.
INF = float("inf")


def Q(x) -> Fraction:
    """Coerce ``x`` (int, Fraction or ``"p/q"`` string) to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot make an exact rational from {x!r}")


def _sign_of_sum(a: Fraction, b: Fraction) -> int:
    """Sign of a + b*sqrt(2), decided with integer arithmetic only."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with 2 b^2
    lhs = a * a
    rhs = 2 * b * b
    if lhs > rhs:
        return sa
    if lhs < rhs:
        return sb
    return 0  # unreachable for b != 0, sqrt(2) is irrational


class QuadExt:
    """An element ``a + b*sqrt(2)`` of Q(sqrt 2) with ``b != 0``.

    Build values with :func:`quad`, which returns a Fraction when ``b == 0``.
    """

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        a = Q(a)
        b = Q(b)
        if b == 0:
            raise ValueError("QuadExt requires a nonzero sqrt(2) coefficient; use quad()")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _parts(x):
        if isinstance(x, QuadExt):
            return x.a, x.b
        if isinstance(x, (int, Fraction)):
            return Fraction(x), Fraction(0)
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return quad(self.a + p[0], self.b + p[1])

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b)

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return quad(self.a - p[0], self.b - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return quad(p[0] - self.a, p[1] - self.b)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        c, d = p
        return quad(self.a * c + 2 * self.b * d, self.a * d + self.b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        c, d = p
        norm = c * c - 2 * d * d
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 2)")
        # (a + b r)(c - d r) / norm
        return quad((self.a * c - 2 * self.b * d) / norm, (self.b * c - self.a * d) / norm)

    def __rtruediv__(self, other):
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return _div_rational_by_quad(Fraction(other), self)

    # -- order --------------------------------------------------------------
    def _cmp(self, other):
        if isinstance(other, float) and other in (INF, -INF):
            return -1 if other > 0 else 1
        p = self._parts(other)
        if p is None:
            return None
        return _sign_of_sum(self.a - p[0], self.b - p[1])

    def __lt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s < 0

    def __le__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s <= 0

    def __gt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s > 0

    def __ge__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s >= 0

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.a == other.a and self.b == other.b
        return False if isinstance(other, (int, Fraction)) else NotImplemented

    def __hash__(self):
        return hash(("QuadExt", self.a, self.b))

    def sign(self) -> int:
        return _sign_of_sum(self.a, self.b)

    def is_rational(self) -> bool:
        return False

    def __float__(self):
        return float(self.a) + float(self.b) * 2 ** 0.5

    def __repr__(self):
        return f"QuadExt({format_rational(self.a)!r}, {format_rational(self.b)!r})"

    def __str__(self):
        return format_scalar(self)


def _div_rational_by_quad(r: Fraction, x: QuadExt):
    norm = x.a * x.a - 2 * x.b * x.b
    return quad(r * x.a / norm, -r * x.b / norm)


Scalar = Union[Fraction, QuadExt]


def quad(a, b) -> Scalar:
    """Return ``a + b*sqrt(2)``, as a Fraction when ``b == 0``."""
    b = Q(b)
    if b == 0:
        return Q(a)
    return QuadExt(a, b)


SQRT2 = QuadExt(0, 1)


def is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


def sign(x) -> int:
    if isinstance(x, QuadExt):
        return x.sign()
    return (x > 0) - (x < 0)


def rational_between(lo: Scalar, hi: Scalar) -> Fraction:
    """A rational strictly between ``lo < hi`` (either may be irrational)."""
    if not lo < hi:
        raise ValueError("rational_between needs lo < hi")
    if is_rational(lo) and is_rational(hi):
        return (Fraction(lo) + Fraction(hi)) / 2
    # bracket with rationals, then bisect until the midpoint lands inside
    left = Fraction(lo) if is_rational(lo) else _rational_floor(lo)
    right = Fraction(hi) if is_rational(hi) else _rational_floor(hi) + 1
    while True:
        mid = (left + right) / 2
        if lo < mid < hi:
            return mid
        if mid <= lo:
            left = mid
        else:
            right = mid


def _rational_floor(x: QuadExt) -> Fraction:
    """An integer n with n <= x < n + 1."""
    n = Fraction(int(float(x)) - 2)
    while n + 1 <= x:
        n += 1
    return n


# -- text forms -------------------------------------------------------------

_RAT_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")
_QUAD_RE = re.compile(
    r"^\s*([+-]?\d+(?:/\d+)?)\s*([+-])\s*(\d+(?:/\d+)?)\s*\*\s*sqrt2\s*$"
)


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    m = _RAT_RE.match(text)
    if not m:
        raise ParseError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_scalar(x: Scalar) -> str:
    """``p/q`` for rationals, ``p/q + r/s*sqrt2`` for Q(sqrt 2)."""
    if isinstance(x, QuadExt):
        op = "+" if x.b > 0 else "-"
        return f"{format_rational(x.a)} {op} {format_rational(abs(x.b))}*sqrt2"
    return format_rational(x)


def parse_scalar(text: str) -> Scalar:
    m = _QUAD_RE.match(text)
    if m:
        a = parse_rational(m.group(1))
        b = parse_rational(m.group(3))
        if m.group(2) == "-":
            b = -b
        return quad(a, b)
    return parse_rational(text)
