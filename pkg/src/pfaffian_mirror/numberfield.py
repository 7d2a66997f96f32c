"""Arithmetic in Q or a quadratic extension Q[x]/(m(x))."""
from __future__ import annotations

from fractions import Fraction

__all__ = ["NumberFieldElement", "NumberFieldError", "numberfield_arith"]


class NumberFieldError(ValueError):
    pass


def _monic(min_poly) -> tuple[Fraction, ...]:
    c = [Fraction(a) for a in min_poly]
    while c and c[-1] == 0:
        c.pop()
    if len(c) < 2 or len(c) > 3:
        raise NumberFieldError("minimal polynomial must have degree 1 or 2")
    lead = c[-1]
    c = [a / lead for a in c]
    if len(c) == 3:
        b, a0 = c[1], c[0]
        disc = b * b - 4 * a0
        if disc >= 0 and _is_rational_square(disc):
            raise NumberFieldError("quadratic minimal polynomial is reducible over Q")
    return tuple(c)


def _is_rational_square(q: Fraction) -> bool:
    from math import isqrt

    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


class NumberFieldElement:
    """Element ``c0 + c1*alpha`` where ``alpha`` is a root of ``min_poly``.

    ``min_poly`` is given low-degree first, e.g. ``(-1, 349, 256)`` for
    ``256x^2 + 349x - 1``; it is stored monic.
    """

    __slots__ = ("min_poly", "coords")

    def __init__(self, min_poly, coords):
        self.min_poly = _monic(min_poly)
        deg = len(self.min_poly) - 1
        c = [Fraction(a) for a in coords]
        if len(c) > deg:
            c = self._reduce(c)
        c.extend([Fraction(0)] * (deg - len(c)))
        self.coords = tuple(c)

    @classmethod
    def generator(cls, min_poly) -> "NumberFieldElement":
        m = _monic(min_poly)
        if len(m) == 2:
            return cls(m, [-m[0]])
        return cls(m, [0, 1])

    @classmethod
    def rational(cls, min_poly, value) -> "NumberFieldElement":
        return cls(min_poly, [value])

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    def _reduce(self, c: list[Fraction]) -> list[Fraction]:
        m = self.min_poly
        d = len(m) - 1
        c = list(c)
        for k in range(len(c) - 1, d - 1, -1):
            lead = c[k]
            if lead:
                for i in range(d):
                    c[k - d + i] -= lead * m[i]
            c[k] = Fraction(0)
        return c[:d]

    def _check(self, other) -> "NumberFieldElement":
        if not isinstance(other, NumberFieldElement):
            return NumberFieldElement(self.min_poly, [other])
        if other.min_poly != self.min_poly:
            raise NumberFieldError("elements belong to different fields")
        return other

    def __add__(self, other):
        o = self._check(other)
        return NumberFieldElement(self.min_poly, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElement(self.min_poly, [-a for a in self.coords])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._check(other)
        a, b = self.coords, o.coords
        prod = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] += x * y
        return NumberFieldElement(self.min_poly, prod)

    __rmul__ = __mul__

    def conjugate(self) -> "NumberFieldElement":
        if self.degree == 1:
            return self
        # alpha' = -b - alpha for x^2 + b x + c
        b = self.min_poly[1]
        c0, c1 = self.coords
        return NumberFieldElement(self.min_poly, [c0 - c1 * b, -c1])

    def norm(self) -> Fraction:
        if self.degree == 1:
            return self.coords[0]
        n = self * self.conjugate()
        return n.coords[0]

    def inverse(self) -> "NumberFieldElement":
        if self.is_zero():
            raise NumberFieldError("division by zero element")
        if self.degree == 1:
            return NumberFieldElement(self.min_poly, [1 / self.coords[0]])
        conj = self.conjugate()
        n = self.norm()
        return NumberFieldElement(self.min_poly, [a / n for a in conj.coords])

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __rtruediv__(self, other):
        return self._check(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = NumberFieldElement(self.min_poly, [1])
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            base = base * base
        return result

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __eq__(self, other):
        if isinstance(other, NumberFieldElement):
            return self.min_poly == other.min_poly and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self):
        return hash((self.min_poly, self.coords))

    def __repr__(self):
        if self.degree == 1:
            return f"NumberFieldElement({self.coords[0]})"
        return f"NumberFieldElement({self.coords[0]} + {self.coords[1]}*a)"


def numberfield_arith(x: NumberFieldElement, y: NumberFieldElement, kind: str) -> NumberFieldElement:
    if kind == "add":
        return x + y
    if kind == "mul":
        return x * y
    if kind == "div":
        return x / y
    raise ValueError(f"unknown kind {kind!r}")
