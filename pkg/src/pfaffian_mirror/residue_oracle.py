"""Brute-force period coefficients from the residue integrand.

The integrand is ``prod_rows 1 / (1 - sum_j a_{row,j})`` with Laurent monomials
``a_{row,j}`` in x1..x6 and t.  Expanding each geometric factor gives a sum over
``n_{row,j} >= 0`` weighted by row multinomials; the torus integral keeps the
x-free terms only.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

__all__ = [
    "Monomial",
    "LaurentMonomialSystem",
    "x13_system",
    "constant_term_coefficient",
    "oracle_series",
    "BasisReport",
    "solution_basis_check",
    "lattice_rank",
]


@dataclass(frozen=True)
class Monomial:
    x: tuple[int, ...]
    t: int

    def to_json(self) -> dict:
        return {"x": list(self.x), "t": self.t}


@dataclass(frozen=True)
class LaurentMonomialSystem:
    rows: tuple[tuple[Monomial, ...], ...]

    def __post_init__(self):
        n = {len(m.x) for row in self.rows for m in row}
        if len(n) > 1:
            raise ValueError("all monomials need the same number of x variables")
        if any(m.t <= 0 for row in self.rows for m in row):
            raise ValueError("t-exponents must be positive")

    @property
    def monomials(self) -> list[Monomial]:
        return [m for row in self.rows for m in row]

    @property
    def nvars(self) -> int:
        ms = self.monomials
        return len(ms[0].x) if ms else 0

    def exponent_matrix(self) -> list[list[int]]:
        """Rows are x-variables, columns are monomials."""
        ms = self.monomials
        return [[m.x[v] for m in ms] for v in range(self.nvars)]

    def to_json(self) -> list:
        return [[m.to_json() for m in row] for row in self.rows]

    @classmethod
    def from_json(cls, doc) -> "LaurentMonomialSystem":
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls(tuple(tuple(Monomial(tuple(m["x"]), int(m["t"])) for m in row) for row in doc))


def _mono(t: int, **powers: int) -> Monomial:
    return Monomial(tuple(powers.get(f"x{i}", 0) for i in range(1, 7)), t)


def x13_system() -> LaurentMonomialSystem:
    """The 3x3 array of monomials for the degree-13 mirror family (chart x0 = 1)."""
    return LaurentMonomialSystem(
        (
            (
                _mono(1, x5=2, x6=1, x3=-1, x4=-1),
                _mono(1, x5=1, x6=2, x3=-1, x4=-1),
                _mono(2, x1=1, x2=2, x3=-1, x4=-1),
            ),
            (
                _mono(1, x1=-1, x5=-1, x6=-1),
                _mono(2, x2=2, x3=1, x1=-1, x5=-1, x6=-1),
                _mono(2, x2=2, x4=1, x1=-1, x5=-1, x6=-1),
            ),
            (
                _mono(1, x3=2, x4=1, x2=-1, x5=-1, x6=-1),
                _mono(1, x3=1, x4=2, x2=-1, x5=-1, x6=-1),
                _mono(2, x1=1, x2=-1, x5=-1, x6=-1),
            ),
        )
    )


def _multinomial(parts: Sequence[int]) -> int:
    out = factorial(sum(parts))
    for p in parts:
        out //= factorial(p)
    return out


def _weight(sys: LaurentMonomialSystem, n: Sequence[int]) -> int:
    out, pos = 1, 0
    for row in sys.rows:
        out *= _multinomial(n[pos : pos + len(row)])
        pos += len(row)
    return out


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    a = [list(r) for r in rows]
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        lead = a[r][c]
        a[r] = [v / lead for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [u - f * v for u, v in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def _lattice_walk(sys: LaurentMonomialSystem, t_power: int):
    """Yield every admissible exponent vector by walking the free coordinates of the
    linear system (x-exponents = 0, t-degree = t_power) and solving for the rest."""
    ms = sys.monomials
    k = len(ms)
    aug = [[Fraction(v) for v in row] + [Fraction(0)] for row in sys.exponent_matrix()]
    aug.append([Fraction(m.t) for m in ms] + [Fraction(t_power)])
    red, pivots = _rref(aug)
    if k in pivots:
        return
    free = [c for c in range(k) if c not in pivots]
    bounds = [t_power // ms[c].t for c in free]
    for values in itertools.product(*(range(b + 1) for b in bounds)):
        n = [Fraction(0)] * k
        for c, v in zip(free, values):
            n[c] = Fraction(v)
        ok = True
        for row, pc in zip(red, pivots):
            val = row[-1] - sum((row[c] * n[c] for c in free), Fraction(0))
            if val < 0 or val.denominator != 1:
                ok = False
                break
            n[pc] = val
        if ok:
            yield [int(v) for v in n]


def _naive_walk(sys: LaurentMonomialSystem, t_power: int):
    ms = sys.monomials
    k = len(ms)
    mat = sys.exponent_matrix()

    def rec(i: int, left: int, acc: list[int]):
        if i == k:
            if left == 0 and all(sum(r[j] * acc[j] for j in range(k)) == 0 for r in mat):
                yield list(acc)
            return
        for v in range(left // ms[i].t + 1):
            acc.append(v)
            yield from rec(i + 1, left - v * ms[i].t, acc)
            acc.pop()

    yield from rec(0, t_power, [])


def constant_term_coefficient(sys: LaurentMonomialSystem, t_power: int, method: str = "lattice") -> int:
    """Coefficient of ``t^t_power`` in the x-free part of the expanded integrand."""
    if t_power < 0:
        return 0
    if method == "lattice":
        walk = _lattice_walk(sys, t_power)
    elif method == "naive":
        if t_power > 14:
            raise ValueError("the naive loop is only meant for t_power <= 14")
        walk = _naive_walk(sys, t_power)
    else:
        raise ValueError(f"unknown method {method!r}")
    return sum(_weight(sys, n) for n in walk)


def oracle_series(sys: LaurentMonomialSystem, max_t_power: int, method: str = "lattice") -> list[int]:
    return [constant_term_coefficient(sys, k, method) for k in range(max_t_power + 1)]


# ---------------------------------------------------------------------------
# the lattice of x-free products


def _int_rank(vectors: Sequence[Sequence[int]]) -> int:
    rows = [[Fraction(v) for v in vec] for vec in vectors if any(vec)]
    if not rows:
        return 0
    return len(_rref(rows)[1])


def lattice_rank(vectors: Sequence[Sequence[int]]) -> int:
    """Rank of the lattice generated by ``vectors`` (duplicates do not count)."""
    return _int_rank(vectors)


@dataclass(frozen=True)
class BasisReport:
    rank: int
    generators: tuple[tuple[int, ...], ...]
    t_degrees: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "generators": [list(g) for g in self.generators],
            "t_degrees": list(self.t_degrees),
        }


def _reducible(v: tuple[int, ...], smaller: list[tuple[int, ...]]) -> bool:
    return any(all(a <= b for a, b in zip(g, v)) for g in smaller)


def solution_basis_check(sys: LaurentMonomialSystem, max_t_power: int | None = None) -> BasisReport:
    """Rank of the x-null lattice and the irreducible nonnegative x-free products.

    Generators are searched up to ``max_t_power`` (default: twice the sum of all
    t-exponents, enough for every minimal product of the shipped system).
    """
    ms = sys.monomials
    if not ms:
        return BasisReport(0, (), ())
    mat = sys.exponent_matrix()
    k = len(ms)
    nullity = k - (_int_rank(mat) if mat else 0)
    bound = max_t_power if max_t_power is not None else 2 * sum(m.t for m in ms)
    gens: list[tuple[int, ...]] = []
    for T in range(1, bound + 1):
        for n in _lattice_walk(sys, T):
            v = tuple(n)
            if not _reducible(v, gens):
                gens.append(v)
    degrees = tuple(sum(m.t * c for m, c in zip(ms, g)) for g in gens)
    return BasisReport(nullity, tuple(gens), degrees)
