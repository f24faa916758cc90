"""Exact arithmetic in the cyclotomic field Q(zeta), zeta = exp(2 pi i / 12).

Elements are ``(c0 + c1 z + c2 z^2 + c3 z^3) / den`` with integer ``c``
and a positive ``den``, reduced modulo the minimal polynomial
``z^4 - z^2 + 1``.  The field holds every constant needed for the lines on
the quartic: cube roots of unity, ``i`` and ``sqrt(3)``.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterable


def _reduce(c: list[int]) -> list[int]:
    # z^p = z^(p-2) - z^(p-4) for p >= 4
    for p in range(len(c) - 1, 3, -1):
        v = c[p]
        if v:
            c[p - 2] += v
            c[p - 4] -= v
    return c[:4]


class CyclotomicNumber:
    __slots__ = ("_c", "_den")

    def __init__(self, coeffs: Iterable = (0,), den: int = 1):
        fr = [Fraction(x) for x in coeffs]
        fr = _reduce_fractions(fr)
        common = 1
        for f in fr:
            common = common * f.denominator // gcd(common, f.denominator)
        nums = [int(f * common) for f in fr]
        self._set(nums, common * den)

    @classmethod
    def _raw(cls, nums: list[int], den: int) -> "CyclotomicNumber":
        obj = cls.__new__(cls)
        obj._set(nums, den)
        return obj

    def _set(self, nums: list[int], den: int) -> None:
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            nums = [-x for x in nums]
            den = -den
        g = den
        for x in nums:
            g = gcd(g, x)
        if g > 1:
            nums = [x // g for x in nums]
            den //= g
        self._c = tuple(nums)
        self._den = den

    @classmethod
    def coerce(cls, x) -> "CyclotomicNumber":
        if isinstance(x, CyclotomicNumber):
            return x
        if isinstance(x, (int, Rational)):
            f = Fraction(x)
            return cls._raw([f.numerator, 0, 0, 0], f.denominator)
        raise TypeError(f"cannot coerce {type(x).__name__} to CyclotomicNumber")

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self._den) for x in self._c)

    def is_zero(self) -> bool:
        return not any(self._c)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        try:
            o = CyclotomicNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self._c == o._c and self._den == o._den

    def __hash__(self) -> int:
        return hash((self._c, self._den))

    def __neg__(self) -> "CyclotomicNumber":
        return CyclotomicNumber._raw([-x for x in self._c], self._den)

    def __add__(self, other) -> "CyclotomicNumber":
        try:
            o = CyclotomicNumber.coerce(other)
        except TypeError:
            return NotImplemented
        d1, d2 = self._den, o._den
        return CyclotomicNumber._raw([a * d2 + b * d1 for a, b in zip(self._c, o._c)], d1 * d2)

    __radd__ = __add__

    def __sub__(self, other) -> "CyclotomicNumber":
        try:
            o = CyclotomicNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "CyclotomicNumber":
        return CyclotomicNumber.coerce(other) - self

    def __mul__(self, other) -> "CyclotomicNumber":
        try:
            o = CyclotomicNumber.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self._c, o._c
        prod = [0] * 7
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return CyclotomicNumber._raw(_reduce(prod), self._den * o._den)

    __rmul__ = __mul__

    def conjugate_under(self, a: int) -> "CyclotomicNumber":
        """Image under the Galois automorphism z -> z^a, gcd(a, 12) = 1."""
        if gcd(a, 12) != 1:
            raise ValueError(f"z -> z^{a} is not an automorphism")
        acc = [0] * 4
        for j, x in enumerate(self._c):
            if x:
                p = ZETA_POWERS[(a * j) % 12]
                for t in range(4):
                    acc[t] += x * p[t]
        return CyclotomicNumber._raw(acc, self._den)

    def conjugate(self) -> "CyclotomicNumber":
        """Complex conjugate (z -> z^-1)."""
        return self.conjugate_under(11)

    def norm(self) -> Fraction:
        """Field norm down to Q: product of the four Galois conjugates."""
        prod = self
        for a in (5, 7, 11):
            prod = prod * self.conjugate_under(a)
        c = prod.coefficients
        assert c[1] == c[2] == c[3] == 0
        return c[0]

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        others = self.conjugate_under(5) * self.conjugate_under(7) * self.conjugate_under(11)
        nrm = (self * others).coefficients[0]
        return others * CyclotomicNumber.coerce(1 / nrm)

    def __truediv__(self, other) -> "CyclotomicNumber":
        return self * CyclotomicNumber.coerce(other).inverse()

    def __rtruediv__(self, other) -> "CyclotomicNumber":
        return CyclotomicNumber.coerce(other) * self.inverse()

    def __pow__(self, e: int) -> "CyclotomicNumber":
        if e < 0:
            return self.inverse() ** (-e)
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / 12)
        return sum(x * z**j for j, x in enumerate(self._c)) / self._den

    def __repr__(self) -> str:
        terms = []
        for j, x in enumerate(self.coefficients):
            if x:
                terms.append(f"{x}" + ("" if j == 0 else ("*z" if j == 1 else f"*z^{j}")))
        return "Cyc(" + (" + ".join(terms) if terms else "0") + ")"


def _reduce_fractions(c: list[Fraction]) -> list[Fraction]:
    c = list(c) + [Fraction(0)] * max(0, 4 - len(c))
    for p in range(len(c) - 1, 3, -1):
        v = c[p]
        if v:
            c[p - 2] += v
            c[p - 4] -= v
    return c[:4]


def _zeta_powers() -> list[tuple[int, int, int, int]]:
    out = []
    cur = [1, 0, 0, 0]
    for _ in range(12):
        out.append(tuple(cur))
        cur = _reduce([0] + cur)
    return out


ZETA_POWERS = _zeta_powers()

ZERO = CyclotomicNumber._raw([0, 0, 0, 0], 1)
ONE = CyclotomicNumber._raw([1, 0, 0, 0], 1)
ZETA = CyclotomicNumber._raw([0, 1, 0, 0], 1)
XI = CyclotomicNumber._raw(list(ZETA_POWERS[4]), 1)  # exp(2 pi i / 3)
I = CyclotomicNumber._raw(list(ZETA_POWERS[3]), 1)
SQRT3 = ZETA + ZETA.conjugate()
ETA = SQRT3 / 3


def xi_pow(e: int) -> CyclotomicNumber:
    return CyclotomicNumber._raw(list(ZETA_POWERS[(4 * e) % 12]), 1)


def i_pow(e: int) -> CyclotomicNumber:
    return CyclotomicNumber._raw(list(ZETA_POWERS[(3 * e) % 12]), 1)
