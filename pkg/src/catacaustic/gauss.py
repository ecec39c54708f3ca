"""Exact scalars: rationals and Gaussian rationals.

Rationals are stdlib Fractions (always reduced, positive denominator).
GaussRat carries real and imaginary Fractions so that points like (1, i, 0)
and conic factorizations over Q(i) stay exact. Arithmetic mixes freely with
int/Fraction; mixing with floats or complex degrades to complex, which is the
intended handoff to the numeric paths.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

Rat = Fraction


class GaussRat:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- constructors -------------------------------------------------

    @staticmethod
    def of(value):
        if isinstance(value, GaussRat):
            return value
        return GaussRat(value)

    # -- predicates ----------------------------------------------------

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    @property
    def is_real(self):
        return not self.im

    def demote(self):
        """Return a plain Fraction when the imaginary part is zero."""
        return self.re if not self.im else self

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, GaussRat):
            return GaussRat(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return GaussRat(self.re + other, self.im)
        if isinstance(other, (float, complex)):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GaussRat):
            return GaussRat(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (int, Fraction)):
            return GaussRat(self.re * other, self.im * other)
        if isinstance(other, (float, complex)):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self):
        return GaussRat(self.re, -self.im)

    def norm(self):
        """Field norm a^2 + b^2 (a Fraction)."""
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        if isinstance(other, GaussRat):
            n = other.norm()
            if not n:
                raise ZeroDivisionError("division by zero GaussRat")
            num = self * other.conjugate()
            return GaussRat(num.re / n, num.im / n)
        if isinstance(other, (int, Fraction)):
            return GaussRat(self.re / other, self.im / other)
        if isinstance(other, (float, complex)):
            return complex(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        return GaussRat.of(other) / self

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = GaussRat(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparisons / conversions ------------------------------------

    def __eq__(self, other):
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return f"{self.re}"
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


I = GaussRat(0, 1)


def is_exact(value) -> bool:
    return isinstance(value, (int, Fraction, GaussRat))


def to_complex(value) -> complex:
    if isinstance(value, GaussRat):
        return complex(value)
    return complex(value)


def exactify(value):
    """Normalize an exact scalar: ints become Fractions, real GaussRats demote."""
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, GaussRat):
        return value.demote()
    return value


def rat_sqrt(q: Fraction):
    """Exact square root of a nonnegative rational, or None."""
    q = Fraction(q)
    if q < 0:
        return None
    if not q:
        return Fraction(0)
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def gauss_sqrt(value):
    """Exact square root inside Q(i), or None if it does not exist there.

    For z = a + bi a root exists iff norm(z) is a rational square r^2 and the
    half-sum (a + r)/2 is again a rational square.
    """
    z = value if isinstance(value, GaussRat) else GaussRat(value)
    if not z:
        return GaussRat(0)
    if not z.im:
        a = z.re
        r = rat_sqrt(a if a > 0 else -a)
        if r is None:
            return None
        return GaussRat(r) if a > 0 else GaussRat(0, r)
    r = rat_sqrt(z.norm())
    if r is None:
        return None
    c2 = (z.re + r) / 2
    c = rat_sqrt(c2)
    if c is None or not c:
        return None
    d = z.im / (2 * c)
    return GaussRat(c, d)
