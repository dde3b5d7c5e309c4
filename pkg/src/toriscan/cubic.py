"""Exact arithmetic in real cubic fields.

Elements are a + b*theta + c*theta^2 with rational a, b, c, where theta is
the real root of a monic integer cubic x^3 - k x^2 - l x - m isolated by a
rational interval.  All arithmetic is exact; floor and float conversion
refine the isolating interval on demand.  This is what lets multidimensional
continued-fraction expansions detect periodicity by exact state equality,
where doubles would lose roughly a digit per step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor as _floor


class CubicField:
    """The field Q[theta] for theta^3 = k theta^2 + l theta + m.

    The isolating interval (lo, hi) brackets exactly one real root and only
    ever narrows; it is shared by all elements of the field.
    """

    def __init__(self, k: int, l: int, m: int, lo, hi, name: str = ""):
        self.k = int(k)
        self.l = int(l)
        self.m = int(m)
        self.name = name or f"cubic(k={k},l={l},m={m})"
        self._lo = Fraction(lo)
        self._hi = Fraction(hi)
        plo, phi = self.poly(self._lo), self.poly(self._hi)
        if not (plo < 0 < phi):
            raise ValueError("interval does not bracket a root with sign change")

    def poly(self, x: Fraction) -> Fraction:
        return x * x * x - self.k * x * x - self.l * x - self.m

    @property
    def discriminant(self) -> int:
        k, l, m = self.k, self.l, self.m
        return k * k * l * l - 4 * k ** 3 * m + 4 * l ** 3 - 18 * k * l * m - 27 * m * m

    def refine(self) -> None:
        mid = (self._lo + self._hi) / 2
        if self.poly(mid) < 0:
            self._lo = mid
        else:
            self._hi = mid

    def interval(self) -> tuple[Fraction, Fraction]:
        return self._lo, self._hi

    def one(self) -> "CubicElement":
        return CubicElement(self, Fraction(1), Fraction(0), Fraction(0))

    def theta(self) -> "CubicElement":
        return CubicElement(self, Fraction(0), Fraction(1), Fraction(0))

    def element(self, a, b=0, c=0) -> "CubicElement":
        return CubicElement(self, Fraction(a), Fraction(b), Fraction(c))

    def __repr__(self):
        return f"CubicField({self.name}, D={self.discriminant})"


@dataclass(frozen=True)
class CubicElement:
    """a + b*theta + c*theta^2 with exact rational coefficients."""

    field: CubicField = field(repr=False)
    a: Fraction
    b: Fraction
    c: Fraction

    def coeffs(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0

    def is_rational(self) -> bool:
        return self.b == 0 and self.c == 0

    def _check_field(self, other: "CubicElement") -> None:
        if other.field is not self.field:
            raise ValueError("elements from different fields")

    def __add__(self, other):
        if isinstance(other, CubicElement):
            self._check_field(other)
            return CubicElement(self.field, self.a + other.a,
                                self.b + other.b, self.c + other.c)
        return CubicElement(self.field, self.a + Fraction(other), self.b, self.c)

    __radd__ = __add__

    def __neg__(self):
        return CubicElement(self.field, -self.a, -self.b, -self.c)

    def __sub__(self, other):
        return self + (-other if isinstance(other, CubicElement)
                       else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + Fraction(other)

    def __mul__(self, other):
        if not isinstance(other, CubicElement):
            q = Fraction(other)
            return CubicElement(self.field, self.a * q, self.b * q, self.c * q)
        self._check_field(other)
        k, l, m = self.field.k, self.field.l, self.field.m
        a1, b1, c1 = self.a, self.b, self.c
        a2, b2, c2 = other.a, other.b, other.c
        # raw product coefficients of 1, t, t^2, t^3, t^4
        p0 = a1 * a2
        p1 = a1 * b2 + b1 * a2
        p2 = a1 * c2 + b1 * b2 + c1 * a2
        p3 = b1 * c2 + c1 * b2
        p4 = c1 * c2
        # t^3 = k t^2 + l t + m;  t^4 = (k^2+l) t^2 + (kl+m) t + km
        a = p0 + m * p3 + k * m * p4
        b = p1 + l * p3 + (k * l + m) * p4
        c = p2 + k * p3 + (k * k + l) * p4
        return CubicElement(self.field, a, b, c)

    __rmul__ = __mul__

    def _times_theta(self, coeffs):
        a, b, c = coeffs
        k, l, m = self.field.k, self.field.l, self.field.m
        return (c * m, a + c * l, b + c * k)

    def inverse(self) -> "CubicElement":
        """Multiplicative inverse via Cramer's rule on the basis (1, t, t^2)."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        col0 = self.coeffs()
        col1 = self._times_theta(col0)
        col2 = self._times_theta(col1)
        # solve M v = e1 where M has columns col0, col1, col2
        def det3(c0, c1, c2):
            return (c0[0] * (c1[1] * c2[2] - c1[2] * c2[1])
                    - c1[0] * (c0[1] * c2[2] - c0[2] * c2[1])
                    + c2[0] * (c0[1] * c1[2] - c0[2] * c1[1]))

        d = det3(col0, col1, col2)
        if d == 0:
            raise ZeroDivisionError("singular multiplication matrix")
        e1 = (Fraction(1), Fraction(0), Fraction(0))
        v0 = det3(e1, col1, col2) / d
        v1 = det3(col0, e1, col2) / d
        v2 = det3(col0, col1, e1) / d
        return CubicElement(self.field, v0, v1, v2)

    def __truediv__(self, other):
        if isinstance(other, CubicElement):
            return self * other.inverse()
        return self * (Fraction(1) / Fraction(other))

    def _value_interval(self) -> tuple[Fraction, Fraction]:
        tlo, thi = self.field.interval()
        if tlo < 0:
            raise ValueError("interval arithmetic assumes a positive root")
        lo = hi = self.a
        if self.b >= 0:
            lo, hi = lo + self.b * tlo, hi + self.b * thi
        else:
            lo, hi = lo + self.b * thi, hi + self.b * tlo
        sqlo, sqhi = tlo * tlo, thi * thi
        if self.c >= 0:
            lo, hi = lo + self.c * sqlo, hi + self.c * sqhi
        else:
            lo, hi = lo + self.c * sqhi, hi + self.c * sqlo
        return lo, hi

    def floor(self) -> int:
        if self.is_rational():
            return _floor(self.a)
        lo, hi = self._value_interval()
        # irrational values are never integers, so this terminates
        while _floor(lo) != _floor(hi):
            self.field.refine()
            lo, hi = self._value_interval()
        return _floor(lo)

    def __float__(self) -> float:
        if self.is_rational():
            return float(self.a)
        # relative width 2^-60 keeps the midpoint within an ulp of the value
        # even for elements that are themselves tiny (irrational, so nonzero)
        lo, hi = self._value_interval()
        while hi - lo > max(abs(lo), abs(hi)) / (1 << 60):
            self.field.refine()
            lo, hi = self._value_interval()
        return float((lo + hi) / 2)

    def __eq__(self, other):
        if not isinstance(other, CubicElement):
            return self.is_rational() and self.a == other
        return self.field is other.field and self.coeffs() == other.coeffs()

    def __hash__(self):
        return hash((id(self.field), self.a, self.b, self.c))

    def __repr__(self):
        return f"({self.a}) + ({self.b})t + ({self.c})t^2 [{self.field.name}]"


def make_standard_fields() -> dict[str, CubicField]:
    """The four cubic fields with |discriminant| < 50 used throughout.

    spiral: t^3 = t + 1 (D = -23, the smallest Pisot root)
    d31:    t^3 = t^2 + 1
    d44:    t^3 = t^2 + t + 1
    d49:    t^3 = -t^2 + 2t + 1, root 2*cos(2*pi/7), totally real
    """
    return {
        "spiral": CubicField(0, 1, 1, 1, 2, name="spiral"),
        "d31": CubicField(1, 0, 1, 1, 2, name="d31"),
        "d44": CubicField(1, 1, 1, 1, 2, name="d44"),
        "d49": CubicField(-1, 2, 1, 1, 2, name="d49"),
    }
