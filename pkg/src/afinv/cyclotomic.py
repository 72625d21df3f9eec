"""Exact arithmetic in cyclotomic fields Q(zeta_e), as Q[x] mod Phi_e(x).

Numbers are vectors of Fractions of length phi(e) (the degree of the e-th
cyclotomic polynomial); the representation is unique, so equality is
coefficient equality after lifting to a common order.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidInputError

__all__ = ["CyclotomicNumber", "cyclotomic_polynomial", "root_of_unity", "as_integer"]


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (ascending coefficients)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        q, r = divmod(num[i + len(den) - 1], den[-1])
        if r != 0:
            raise ArithmeticError("polynomial division was not exact")
        out[i] = q
        for j, d in enumerate(den):
            num[i + j] -= q * d
    if any(num):
        raise ArithmeticError("polynomial division left a remainder")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(e: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the e-th cyclotomic polynomial.

    >>> cyclotomic_polynomial(4)
    (1, 0, 1)
    >>> cyclotomic_polynomial(1)
    (-1, 1)
    """
    if e < 1:
        raise InvalidInputError(f"cyclotomic order must be >= 1, got {e}")
    poly = [0] * (e + 1)
    poly[0], poly[e] = -1, 1  # x^e - 1
    for d in _divisors(e):
        if d < e:
            poly = _poly_div_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _monomial_table(e: int) -> tuple[tuple[int, ...], ...]:
    """x^j mod Phi_e for j = 0 .. 2e, as integer coefficient tuples."""
    phi = cyclotomic_polynomial(e)
    deg = len(phi) - 1
    table = []
    current = [0] * deg
    if deg > 0:
        current[0] = 1
    for _ in range(2 * e + 1):
        table.append(tuple(current))
        lead = current[-1] if deg > 0 else 0
        current = [0] + current[:-1]
        if deg > 0:
            # subtract lead * (Phi_e - x^deg) shifted appropriately: x^deg = -lower(Phi)
            for i in range(deg):
                current[i] -= lead * phi[i]
    return tuple(table)


class CyclotomicNumber:
    """An element of Q(zeta_e) in the reduced power basis 1, x, ..., x^(phi(e)-1)."""

    __slots__ = ("order", "coeffs")
    __hash__ = None  # equality lifts orders, so hashing would be unsound

    def __init__(self, order: int, coeffs) -> None:
        deg = len(cyclotomic_polynomial(order)) - 1
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != deg:
            raise InvalidInputError(
                f"need {deg} coefficients for order {order}, got {len(coeffs)}"
            )
        self.order = order
        self.coeffs = coeffs

    @classmethod
    def zero(cls, order: int) -> "CyclotomicNumber":
        return cls.from_rational(0, order)

    @classmethod
    def from_rational(cls, value, order: int) -> "CyclotomicNumber":
        deg = len(cyclotomic_polynomial(order)) - 1  # phi(order) >= 1 always
        coeffs = [Fraction(0)] * deg
        coeffs[0] = Fraction(value)
        return cls(order, coeffs)

    def lift(self, new_order: int) -> "CyclotomicNumber":
        """Re-express in Q(zeta_m) for a multiple m of the current order."""
        if new_order == self.order:
            return self
        if new_order % self.order != 0:
            raise InvalidInputError(
                f"cannot lift from order {self.order} to non-multiple {new_order}"
            )
        step = new_order // self.order
        table = _monomial_table(new_order)
        deg = len(table[0])
        out = [Fraction(0)] * deg
        for j, c in enumerate(self.coeffs):
            if c:
                for i, m in enumerate(table[j * step]):
                    out[i] += c * m
        return CyclotomicNumber(new_order, out)

    def _pair(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_rational(other, self.order)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented, NotImplemented
        e = math.lcm(self.order, other.order)
        return self.lift(e), other.lift(e)

    def __add__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return CyclotomicNumber(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.order, tuple(c * other for c in self.coeffs))
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        deg = len(a.coeffs)
        conv = [Fraction(0)] * (2 * deg - 1 if deg else 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        conv[i + j] += x * y
        table = _monomial_table(a.order)
        out = list(conv[:deg]) + [Fraction(0)] * max(0, deg - len(conv))
        for j in range(deg, len(conv)):
            c = conv[j]
            if c:
                for i, m in enumerate(table[j]):
                    out[i] += c * m
        return CyclotomicNumber(a.order, out[:deg])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                raise ZeroDivisionError("division of cyclotomic number by zero")
            return self * Fraction(q.denominator, q.numerator)
        return NotImplemented

    def __eq__(self, other) -> bool:
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return a.coeffs == b.coeffs

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def complex_value(self) -> complex:
        return sum(
            (complex(c) * cmath.exp(2j * cmath.pi * j / self.order)
             for j, c in enumerate(self.coeffs)),
            start=0j,
        )

    def __repr__(self) -> str:
        return f"CyclotomicNumber(order={self.order}, coeffs={self.coeffs})"


def root_of_unity(theta, e: int) -> CyclotomicNumber:
    """zeta_e ** (theta * e) for a rational theta whose denominator divides e.

    >>> root_of_unity(Fraction(1, 2), 4).coeffs
    (Fraction(-1, 1), Fraction(0, 1))
    """
    theta = Fraction(theta) % 1
    k = theta * e
    if k.denominator != 1:
        raise InvalidInputError(f"denominator of {theta} does not divide {e}")
    table = _monomial_table(e)
    return CyclotomicNumber(e, tuple(Fraction(c) for c in table[int(k) % e]))


def as_integer(z: CyclotomicNumber) -> int | None:
    """The value of z as a Python int if z is a rational integer, else None."""
    if any(c != 0 for c in z.coeffs[1:]):
        return None
    c = z.coeffs[0]
    return int(c) if c.denominator == 1 else None
