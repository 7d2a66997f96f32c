"""Pfaffians, graded resolutions and line-bundle cohomology on weighted projective 6-space."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .polynomial import normalize, poly_divmod, poly_eval, poly_gcd, poly_mul, poly_pow

__all__ = [
    "GeometryError",
    "Poly",
    "SkewPolyMatrix",
    "pfaffian",
    "sub_pfaffians",
    "determinant",
    "WeightedSpace",
    "GradedResolution",
    "HilbertSeries",
    "pfaffian_resolution",
    "hilbert_series",
    "degree_from_hilbert",
    "weighted_h0",
    "c2h",
    "hodge_h12",
]


class GeometryError(ValueError):
    pass


# ---------------------------------------------------------------------------
# sparse multivariate polynomials


class Poly:
    """Sparse polynomial over Q in a fixed tuple of variable names."""

    __slots__ = ("vars", "terms")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None, variables: Sequence[str] = ()):
        self.vars = tuple(variables)
        clean: dict[tuple[int, ...], Fraction] = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                if len(mono) != len(self.vars):
                    raise GeometryError("exponent vector length does not match variables")
                clean[tuple(mono)] = clean.get(tuple(mono), Fraction(0)) + c
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def var(cls, name: str, variables: Sequence[str]) -> "Poly":
        variables = tuple(variables)
        mono = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise GeometryError(f"unknown variable {name!r}")
        return cls({mono: 1}, variables)

    @classmethod
    def const(cls, c, variables: Sequence[str]) -> "Poly":
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def from_terms(cls, terms: Iterable, variables: Sequence[str]) -> "Poly":
        """From a term list ``[[coefficient, [exponents...]], ...]``."""
        return cls._accumulate(((tuple(int(e) for e in exps), Fraction(c)) for c, exps in terms), variables)

    @classmethod
    def _accumulate(cls, pairs, variables) -> "Poly":
        acc: dict[tuple[int, ...], Fraction] = {}
        for m, c in pairs:
            acc[m] = acc.get(m, Fraction(0)) + c
        return cls(acc, variables)

    def to_terms(self) -> list:
        return [[str(self.terms[m]), list(m)] for m in sorted(self.terms, reverse=True)]

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise GeometryError("polynomials live in different rings")
            return other
        return Poly.const(other, self.vars)

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return Poly(out, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return Poly(out, self.vars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(1, self.vars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other, self.vars)
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def weighted_degrees(self, weights: Mapping[str, int]) -> set[int]:
        w = [weights.get(v, 0) for v in self.vars]
        return {sum(a * b for a, b in zip(m, w)) for m in self.terms}

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(self.vars, m) if e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# skew matrices and pfaffians


class SkewPolyMatrix:
    """Skew-symmetric matrix whose entries are :class:`Poly` (or plain numbers)."""

    def __init__(self, rows: Sequence[Sequence]):
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise GeometryError("matrix must be square")
        for i in range(n):
            if rows[i][i] != 0:
                raise GeometryError("diagonal of a skew matrix must vanish")
            for j in range(i + 1, n):
                if rows[i][j] + rows[j][i] != 0:
                    raise GeometryError(f"entry ({i},{j}) is not skew")
        self.rows = tuple(tuple(r) for r in rows)

    @property
    def size(self) -> int:
        return len(self.rows)

    @classmethod
    def from_upper(cls, upper: Mapping[tuple[int, int], object], size: int, zero=0) -> "SkewPolyMatrix":
        rows = [[zero] * size for _ in range(size)]
        for (i, j), v in upper.items():
            if i >= j:
                raise GeometryError("upper-triangular entries need i < j")
            rows[i][j] = v
            rows[j][i] = -v
        return cls(rows)

    @classmethod
    def from_json(cls, doc, variables: Sequence[str]) -> "SkewPolyMatrix":
        """``doc[i][j]`` is a term list; the full matrix is read and checked for skewness."""
        return cls([[Poly.from_terms(e, variables) for e in row] for row in doc])

    def to_json(self) -> list:
        return [[e.to_terms() for e in row] for row in self.rows]

    def minor(self, drop: Iterable[int]) -> "SkewPolyMatrix":
        keep = [i for i in range(self.size) if i not in set(drop)]
        return SkewPolyMatrix([[self.rows[i][j] for j in keep] for i in keep])


def pfaffian(M: SkewPolyMatrix | Sequence[Sequence]):
    """Pfaffian by first-row expansion, memoized on the surviving index set."""
    if not isinstance(M, SkewPolyMatrix):
        M = SkewPolyMatrix(M)
    rows = M.rows
    n = M.size
    zero = rows[0][0] * 0 if n else 0

    @lru_cache(maxsize=None)
    def pf(idx: tuple[int, ...]):
        if not idx:
            return zero + 1
        if len(idx) % 2:
            return zero
        i0 = idx[0]
        acc = zero
        for pos in range(1, len(idx)):
            a = rows[i0][idx[pos]]
            if a == 0:
                continue
            rest = idx[1:pos] + idx[pos + 1 :]
            term = a * pf(rest)
            acc = acc + term if pos % 2 else acc - term
        return acc

    return pf(tuple(range(n)))


def sub_pfaffians(M: SkewPolyMatrix) -> list:
    """``P_i = (-1)^(i+1) Pf(M with row/column i removed)``, i counted from 1."""
    out = []
    for i in range(M.size):
        p = pfaffian(M.minor([i]))
        out.append(p if i % 2 == 0 else -p)
    return out


def determinant(rows: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a numeric matrix by fraction-preserving elimination."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return det


# ---------------------------------------------------------------------------
# weighted projective space and graded resolutions


@dataclass(frozen=True)
class WeightedSpace:
    weights: tuple[int, ...]

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        if not w or any(x <= 0 for x in w):
            raise GeometryError("weights must be positive integers")
        object.__setattr__(self, "weights", w)

    @property
    def dimension(self) -> int:
        return len(self.weights) - 1

    @property
    def total(self) -> int:
        return sum(self.weights)


@dataclass(frozen=True)
class GradedResolution:
    """Sheaves ``F_p = sum O(twist)^mult``; position p enters the Euler characteristic with sign (-1)^p."""

    positions: tuple[tuple[tuple[int, int], ...], ...]

    def __post_init__(self):
        pos = tuple(tuple((int(k), int(m)) for k, m in p) for p in self.positions)
        if not pos:
            raise GeometryError("a resolution needs at least one position")
        if any(m <= 0 for p in pos for _, m in p):
            raise GeometryError("multiplicities must be positive")
        object.__setattr__(self, "positions", pos)

    @classmethod
    def from_json(cls, doc) -> "GradedResolution":
        return cls(tuple(tuple((k, m) for k, m in p) for p in doc))

    def to_json(self) -> list:
        return [[[k, m] for k, m in p] for p in self.positions]


def _merge(twists: Iterable[int]) -> tuple[tuple[int, int], ...]:
    counts: dict[int, int] = {}
    for k in twists:
        counts[k] = counts.get(k, 0) + 1
    return tuple(sorted(counts.items(), reverse=True))


def pfaffian_resolution(bundle_twists: Sequence[int], t: int, weights: Sequence[int] | None = None) -> GradedResolution:
    """``O <- E(-s) <- E^v(-t-s) <- O(-t-2s)`` with ``s = c1(E) + r t`` for rank ``2r+1``."""
    rank = len(bundle_twists)
    if rank % 2 == 0:
        raise GeometryError("the bundle must have odd rank")
    r = (rank - 1) // 2
    s = sum(bundle_twists) + r * t
    if weights is not None and t + 2 * s != sum(weights):
        raise GeometryError(f"t + 2s = {t + 2 * s} differs from |w| = {sum(weights)}: not Calabi-Yau")
    return GradedResolution(
        (
            ((0, 1),),
            _merge(a - s for a in bundle_twists),
            _merge(-a - t - s for a in bundle_twists),
            ((-t - 2 * s, 1),),
        )
    )


@dataclass(frozen=True)
class HilbertSeries:
    """``numerator / denominator`` in lowest terms, both with integer coefficients, low degree first."""

    numerator: tuple[Fraction, ...]
    denominator: tuple[Fraction, ...]

    @property
    def pole_order(self) -> int:
        d = list(self.denominator)
        k = 0
        while len(d) > 1 and poly_eval(d, 1) == 0:
            d = poly_divmod(d, [-1, 1])[0]
            k += 1
        return k

    def numerator_ints(self) -> list[int]:
        return [int(a) for a in self.numerator]

    def is_palindromic(self) -> bool:
        n = list(self.numerator)
        return n == n[::-1]

    def coefficients(self, count: int) -> list[Fraction]:
        """First ``count`` coefficients of the series expansion."""
        num, den = list(self.numerator), list(self.denominator)
        out = []
        for k in range(count):
            s = (num[k] if k < len(num) else 0) - sum(
                (den[i] * out[k - i] for i in range(1, min(k, len(den) - 1) + 1)), Fraction(0)
            )
            out.append(Fraction(s) / den[0])
        return out


def hilbert_series(res: GradedResolution, w: WeightedSpace) -> HilbertSeries:
    """Alternating sum of ``t^(-k) / prod(1 - t^w_i)`` over the resolution, reduced.

    When the reduced denominator is ``(1-t)^m`` times a unit the result is
    returned over exactly ``(1-t)^m``.
    """
    top = max(-k for p in res.positions for k, _ in p)
    num = [Fraction(0)] * (top + 1)
    for p, sheaves in enumerate(res.positions):
        sign = -1 if p % 2 else 1
        for k, m in sheaves:
            if -k < 0:
                raise GeometryError("positive twists are not supported in the resolution")
            num[-k] += sign * m
    num = normalize(num)
    den = [Fraction(1)]
    for wi in w.weights:
        den = poly_mul(den, [Fraction(1)] + [Fraction(0)] * (wi - 1) + [Fraction(-1)])
    if not num:
        return HilbertSeries((), (Fraction(1),))
    g = poly_gcd(num, den)
    num = poly_divmod(num, g)[0]
    den = poly_divmod(den, g)[0]
    # fix the scalar so that den(0) == 1
    c = den[0]
    num = [a / c for a in num]
    den = [a / c for a in den]
    return HilbertSeries(tuple(num), tuple(den))


def degree_from_hilbert(H: HilbertSeries, dim: int = 3) -> Fraction:
    """``dim!`` times the leading Hilbert-polynomial coefficient, i.e. numerator(1) over the unit part."""
    m = H.pole_order
    if m != dim + 1:
        raise GeometryError(f"pole order {m} at t=1, expected {dim + 1}")
    unit = poly_divmod(list(H.denominator), poly_pow([Fraction(1), Fraction(-1)], m))[0]
    deg = poly_eval(list(H.numerator), 1) / poly_eval(unit, 1)
    return int(deg) if deg.denominator == 1 else deg


def weighted_h0(w: WeightedSpace | Sequence[int], k: int) -> int:
    """Number of monomials of weighted degree ``k``."""
    weights = w.weights if isinstance(w, WeightedSpace) else tuple(w)
    if k < 0:
        return 0
    ways = [1] + [0] * k
    for wi in weights:
        for d in range(wi, k + 1):
            ways[d] += ways[d - wi]
    return ways[k]


def c2h(deg, h0_of_H) -> int:
    """``c2.H = 12 h0(H) - 2 deg`` from Riemann-Roch and Kodaira vanishing."""
    v = 12 * Fraction(h0_of_H) - 2 * Fraction(deg)
    if v.denominator != 1:
        raise GeometryError(f"c2.H = {v} is not an integer; inputs are inconsistent")
    return int(v)


def _h6(w: WeightedSpace, k: int) -> int:
    # Serre duality with dualizing sheaf O(-|w|)
    return weighted_h0(w, -w.total - k)


def hodge_h12(spec=None, *, weights: Sequence[int] | None = None, i2_resolution=None) -> int:
    """``h^{1,2} = sum_i (-1)^(i+1) h^6(F_i) - sum_i h^0(O(w_i))``.

    ``i2_resolution`` lists ``F_1, F_2, F_3`` starting from the ``S_2 E`` end.
    Accepts a family record (anything with ``weights`` and ``i2_resolution``)
    or the two pieces as keywords.
    """
    if spec is not None:
        weights = spec.weights
        i2_resolution = spec.i2_resolution
    if i2_resolution is None:
        raise GeometryError("no resolution of the squared ideal is available")
    if not isinstance(i2_resolution, GradedResolution):
        i2_resolution = GradedResolution.from_json(i2_resolution)
    w = WeightedSpace(tuple(weights))
    total = 0
    for i, sheaves in enumerate(i2_resolution.positions):
        h = sum(m * _h6(w, k) for k, m in sheaves)
        total += h if i % 2 == 0 else -h
    return total - sum(weighted_h0(w, wi) for wi in w.weights)
