"""Truncated power series with exact rational coefficients.

A :class:`Series` stores ``coeffs[n]`` = coefficient of ``x**n`` for
``0 <= n <= order``.  Everything above ``order`` is unknown, so every
operation returns the smallest order its inputs justify.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

__all__ = ["Series", "SeriesError", "series_arith", "series_calculus", "series_reversion"]


class SeriesError(ValueError):
    """Raised when a series operation's precondition is violated."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class Series:
    """Immutable truncated power series ``sum c_n x^n + O(x^(order+1))``."""

    __slots__ = ("_c", "_order")

    def __init__(self, coeffs: Iterable, order: int | None = None):
        c = [_frac(a) for a in coeffs]
        if order is None:
            order = len(c) - 1
        if order < 0:
            raise SeriesError("truncation order must be non-negative")
        if len(c) < order + 1:
            c.extend([Fraction(0)] * (order + 1 - len(c)))
        self._c = tuple(c[: order + 1])
        self._order = order

    # construction helpers -------------------------------------------------
    @classmethod
    def constant(cls, value, order: int) -> "Series":
        return cls([value], order)

    @classmethod
    def monomial(cls, power: int, order: int, coeff=1) -> "Series":
        c = [Fraction(0)] * (order + 1)
        if power <= order:
            c[power] = _frac(coeff)
        return cls(c, order)

    @classmethod
    def from_function(cls, f, order: int) -> "Series":
        return cls([f(n) for n in range(order + 1)], order)

    # basic protocol ------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def order(self) -> int:
        return self._order

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            return Fraction(0)
        if n > self._order:
            raise IndexError(f"coefficient {n} beyond truncation order {self._order}")
        return self._c[n]

    def __len__(self) -> int:
        return self._order + 1

    def __iter__(self):
        return iter(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, Series):
            return self._order == other._order and self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash((self._c, self._order))

    def __repr__(self) -> str:
        terms = []
        for n, a in enumerate(self._c):
            if a:
                terms.append(f"{a}" if n == 0 else f"{a}*x^{n}")
        body = " + ".join(terms) if terms else "0"
        return f"Series({body} + O(x^{self._order + 1}))"

    def truncate(self, order: int) -> "Series":
        if order > self._order:
            raise SeriesError("cannot raise truncation order")
        return Series(self._c[: order + 1], order)

    def valuation(self) -> int | None:
        for n, a in enumerate(self._c):
            if a:
                return n
        return None

    def is_zero(self) -> bool:
        return not any(self._c)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self._c)

    # arithmetic ----------------------------------------------------------
    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            return other
        return Series([_frac(other)], self._order)

    def __add__(self, other):
        if not isinstance(other, Series):
            c = list(self._c)
            c[0] += _frac(other)
            return Series(c, self._order)
        n = min(self._order, other._order)
        return Series([self._c[k] + other._c[k] for k in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return Series([-a for a in self._c], self._order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Series):
            s = _frac(other)
            return Series([a * s for a in self._c], self._order)
        n = min(self._order, other._order)
        a, b = self._c, other._c
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if not ai:
                continue
            for j in range(n + 1 - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return Series(out, n)

    __rmul__ = __mul__

    def reciprocal(self) -> "Series":
        a = self._c
        if not a[0]:
            raise SeriesError("division by a series with zero constant term")
        inv0 = 1 / a[0]
        b = [Fraction(0)] * (self._order + 1)
        b[0] = inv0
        for m in range(1, self._order + 1):
            s = Fraction(0)
            for k in range(1, m + 1):
                if a[k]:
                    s += a[k] * b[m - k]
            b[m] = -s * inv0
        return Series(b, self._order)

    def __truediv__(self, other):
        if not isinstance(other, Series):
            s = _frac(other)
            if not s:
                raise SeriesError("division by zero")
            return Series([a / s for a in self._c], self._order)
        n = min(self._order, other._order)
        return self.truncate(n) * other.truncate(n).reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers; use power() for rational exponents")
        if k < 0:
            return self.reciprocal() ** (-k)
        result = Series.constant(1, self._order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, k: int) -> "Series":
        """Multiply by ``x**k`` (k may be negative if the low terms vanish)."""
        if k >= 0:
            return Series([Fraction(0)] * k + list(self._c), self._order + k)
        if any(self._c[:-k]):
            raise SeriesError("shift would drop nonzero coefficients")
        return Series(self._c[-k:], self._order + k)

    # calculus ------------------------------------------------------------
    def theta(self) -> "Series":
        return Series([n * a for n, a in enumerate(self._c)], self._order)

    def integrate_theta(self) -> "Series":
        if self._c[0]:
            raise SeriesError("integrate_theta needs a zero constant term")
        return Series([Fraction(0)] + [a / n for n, a in enumerate(self._c) if n], self._order)

    def derivative(self) -> "Series":
        if self._order == 0:
            return Series([0], 0)
        return Series([n * a for n, a in enumerate(self._c) if n], self._order - 1)

    def exp(self) -> "Series":
        if self._c[0]:
            raise SeriesError("exp needs a zero constant term")
        # theta(E) = theta(s) * E
        ds = [n * a for n, a in enumerate(self._c)]
        e = [Fraction(0)] * (self._order + 1)
        e[0] = Fraction(1)
        for m in range(1, self._order + 1):
            s = Fraction(0)
            for k in range(1, m + 1):
                if ds[k]:
                    s += ds[k] * e[m - k]
            e[m] = s / m
        return Series(e, self._order)

    def log(self) -> "Series":
        if self._c[0] != 1:
            raise SeriesError("log needs constant term 1")
        return (self.theta() / self).integrate_theta()

    def power(self, r) -> "Series":
        """``self ** r`` for rational ``r``; the constant term must be 1."""
        r = _frac(r)
        if r.denominator == 1 and r >= 0:
            return self ** int(r)
        return (self.log() * r).exp()

    def compose(self, inner: "Series") -> "Series":
        """``self(inner(x))`` by Horner's rule; ``inner`` needs zero constant term."""
        if inner._c[0]:
            raise SeriesError("composition needs an inner series with zero constant term")
        n = min(self._order, inner._order)
        inner = inner.truncate(n)
        acc = Series.constant(self._c[n], n)
        for k in range(n - 1, -1, -1):
            acc = acc * inner + self._c[k]
        return acc

    def reversion(self) -> "Series":
        """Compositional inverse ``b`` with ``self(b(x)) = x``."""
        a = self._c
        if a[0]:
            raise SeriesError("reversion needs a zero constant term")
        if self._order < 1 or not a[1]:
            raise SeriesError("reversion needs a nonzero linear coefficient")
        n = self._order
        # Newton-free fixed point: b = (x - (a(b) - a1*b)) / a1, one new coefficient per pass
        inv1 = 1 / a[1]
        b = Series([0, inv1], n)
        x = Series.monomial(1, n)
        for _ in range(n):
            b = (x - (self.compose(b) - b * a[1])) * inv1
        return b


def series_arith(a: Series, b: Series, kind: str) -> Series:
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def series_calculus(a: Series, kind: str) -> Series:
    try:
        return {
            "exp": Series.exp,
            "log": Series.log,
            "theta": Series.theta,
            "integrate_theta": Series.integrate_theta,
        }[kind](a)
    except KeyError:
        raise ValueError(f"unknown calculus kind {kind!r}") from None


def series_reversion(a: Series) -> Series:
    return a.reversion()


def series_from_ints(values: Sequence[int], order: int | None = None) -> Series:
    return Series(values, order)
