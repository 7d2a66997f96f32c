"""Differential operators in the Euler derivation ``Θ = x d/dx``.

An operator ``L = sum_{i,j} c[i][j] x^j Θ^i`` is stored as an
``(order+1) x (degree+1)`` matrix of rationals (row = power of Θ,
column = power of x).  Operators are immutable.  Equality ignores overall
rational scaling: two operators are equal when their canonical forms agree.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import comb, gcd, lcm
from typing import Sequence, Union

from .numberfield import NumberFieldElement
from .polynomial import (
    factor_integer_poly,
    normalize,
    poly_gcd,
    poly_to_str,
    rational_roots,
)
from .exact_series import Series

__all__ = [
    "ThetaOperator",
    "OperatorError",
    "ResonanceError",
    "AmbiguousFitError",
    "PScheme",
    "INFINITY",
    "recurrence_solve",
    "fit_operator",
    "indicial_exponents",
    "riemann_scheme",
    "leading_coefficient_factor",
    "operator_equal",
]


class OperatorError(ValueError):
    pass


class ResonanceError(OperatorError):
    """The recurrence hits ``P_0(n) = 0`` for some ``n >= 1``."""


class AmbiguousFitError(OperatorError):
    """The fitting system has a nullspace of dimension > 1."""


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "oo"


INFINITY = _Infinity()

Location = Union[Fraction, NumberFieldElement, _Infinity]


class ThetaOperator:
    """``sum c[i][j] x^j Θ^i`` with exact rational coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Sequence[Sequence]):
        rows = [[Fraction(a) for a in row] for row in coeffs]
        if not rows:
            raise OperatorError("operator needs at least one row")
        width = max(len(r) for r in rows)
        rows = [r + [Fraction(0)] * (width - len(r)) for r in rows]
        # trim zero top rows and zero trailing columns
        while len(rows) > 1 and not any(rows[-1]):
            rows.pop()
        while width > 1 and not any(r[width - 1] for r in rows):
            width -= 1
            rows = [r[:width] for r in rows]
        if not any(any(r) for r in rows):
            raise OperatorError("zero operator")
        self._c = tuple(tuple(r) for r in rows)

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_blocks(cls, blocks: dict[int, Sequence]) -> "ThetaOperator":
        """Build from ``{x_power: theta_poly}`` with theta polys low-degree first."""
        order = max(len(p) for p in blocks.values()) - 1
        deg = max(blocks)
        c = [[Fraction(0)] * (deg + 1) for _ in range(order + 1)]
        for j, p in blocks.items():
            for i, a in enumerate(p):
                c[i][j] += Fraction(a)
        return cls(c)

    # -- shape ------------------------------------------------------------
    @property
    def coeffs(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._c

    @property
    def order(self) -> int:
        return len(self._c) - 1

    @property
    def phi_degree(self) -> int:
        return len(self._c[0]) - 1

    def C(self, i: int) -> list[Fraction]:
        """Coefficient polynomial of ``Θ^i`` as a polynomial in x."""
        return list(self._c[i]) if i <= self.order else []

    def P(self, j: int) -> list[Fraction]:
        """Coefficient polynomial of ``x^j`` as a polynomial in Θ."""
        if j > self.phi_degree:
            return []
        return [self._c[i][j] for i in range(self.order + 1)]

    # -- canonical form ---------------------------------------------------
    def canonical(self) -> "ThetaOperator":
        flat = [a for row in self._c for a in row]
        den = reduce(lcm, (a.denominator for a in flat), 1)
        num = reduce(gcd, (int(a * den) for a in flat), 0)
        scale = Fraction(den, num)
        lead = self._c[-1]
        ref = next(a for a in lead if a) if any(lead) else next(a for a in flat if a)
        if ref < 0:
            scale = -scale
        return ThetaOperator([[a * scale for a in row] for row in self._c])

    @property
    def is_canonical(self) -> bool:
        return self._c == self.canonical()._c

    def integer_coeffs(self) -> list[list[int]]:
        c = self.canonical()._c if not self.is_canonical else self._c
        return [[int(a) for a in row] for row in c]

    def __eq__(self, other):
        if not isinstance(other, ThetaOperator):
            return NotImplemented
        return self.canonical()._c == other.canonical()._c

    def __hash__(self):
        return hash(self.canonical()._c)

    def scaled(self, factor) -> "ThetaOperator":
        f = Fraction(factor)
        return ThetaOperator([[a * f for a in row] for row in self._c])

    # -- action on series -------------------------------------------------
    def apply(self, s: Series) -> Series:
        """``L(s)``; coefficient n of the result only involves s_0..s_n."""
        N = s.order
        out = [Fraction(0)] * (N + 1)
        polys = [self.P(j) for j in range(self.phi_degree + 1)]
        for n in range(N + 1):
            acc = Fraction(0)
            for j, p in enumerate(polys):
                m = n - j
                if m < 0:
                    break
                sm = s[m]
                if sm:
                    acc += _eval(p, m) * sm
            out[n] = acc
        return Series(out, N)

    def apply_log(self, strata: Sequence[Series]) -> list[Series]:
        """Apply to ``sum_k log(x)^k * strata[k]``; returns the strata of the result."""
        N = min(s.order for s in strata)
        cur = [s.truncate(N) for s in strata]
        K = len(cur)
        result = [Series.constant(0, N) for _ in range(K)]
        for i in range(self.order + 1):
            for j in range(self.phi_degree + 1):
                c = self._c[i][j]
                if c:
                    for k in range(K):
                        result[k] = result[k] + (cur[k] * c).shift(j).truncate(N)
            # cur <- Θ(cur)
            cur = [
                cur[k].theta() + (cur[k + 1] * (k + 1) if k + 1 < K else 0)
                for k in range(K)
            ]
        return result

    # -- transforms -------------------------------------------------------
    def invert(self) -> "ThetaOperator":
        """Substitute x -> 1/x (so Θ -> -Θ) and clear the negative powers."""
        d = self.phi_degree
        c = [[Fraction(0)] * (d + 1) for _ in range(self.order + 1)]
        for i, row in enumerate(self._c):
            sign = -1 if i % 2 else 1
            for j, a in enumerate(row):
                c[i][d - j] = sign * a
        return ThetaOperator(c).canonical()

    def rescale(self, factor) -> "ThetaOperator":
        """Substitute ``x = factor * x_new``."""
        f = Fraction(factor)
        if not f:
            raise OperatorError("rescale by zero")
        c = [[a * f**j for j, a in enumerate(row)] for row in self._c]
        return ThetaOperator(c).canonical()

    def negate(self) -> "ThetaOperator":
        return self.rescale(-1)

    def gauge(self, shift) -> "ThetaOperator":
        """Conjugate by ``x^shift``: every Θ becomes ``Θ + shift``."""
        s = Fraction(shift)
        c = [[Fraction(0)] * (self.phi_degree + 1) for _ in range(self.order + 1)]
        for i, row in enumerate(self._c):
            for j, a in enumerate(row):
                if a:
                    for k in range(i + 1):
                        c[k][j] += a * comb(i, k) * s ** (i - k)
        return ThetaOperator(c).canonical()

    def transform(self, kind: str, value=None) -> "ThetaOperator":
        if kind == "invert":
            return self.invert()
        if kind == "negate":
            return self.negate()
        if kind == "rescale":
            return self.rescale(value)
        if kind == "gauge":
            return self.gauge(value)
        raise OperatorError(f"unknown transform {kind!r}")

    def transform_chain(self, steps: Sequence) -> "ThetaOperator":
        """Apply ``[(kind, value), ...]`` left to right."""
        op = self
        for step in steps:
            if isinstance(step, str):
                op = op.transform(step)
            else:
                op = op.transform(*step)
        return op

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        c = self.integer_coeffs()
        return {"order": self.order, "coeffs": [[str(a) for a in row] for row in c]}

    @classmethod
    def from_json(cls, doc) -> "ThetaOperator":
        if isinstance(doc, str):
            doc = json.loads(doc)
        op = cls([[Fraction(a) for a in row] for row in doc["coeffs"]])
        if "order" in doc and int(doc["order"]) != op.order:
            raise OperatorError("declared order does not match coefficient rows")
        return op

    def __repr__(self):
        return f"ThetaOperator({self.pretty()})"

    def pretty(self, var: str = "x") -> str:
        parts = []
        for j in range(self.phi_degree + 1):
            p = self.P(j)
            if not any(p):
                continue
            body = poly_to_str(p, "T")
            xs = "" if j == 0 else (f"{var}*" if j == 1 else f"{var}^{j}*")
            parts.append(f"{xs}({body})")
        return " + ".join(parts)


def _eval(p, x):
    acc = 0
    for a in reversed(p):
        acc = acc * x + a
    return acc


def operator_equal(a: ThetaOperator, b: ThetaOperator) -> bool:
    return a == b


# ---------------------------------------------------------------------------
# recurrences and fitting


def recurrence_solve(L: ThetaOperator, a0=1, order: int = 30) -> Series:
    """The power-series solution with constant term ``a0``.

    ``a_n = -(sum_{j>=1} P_j(n-j) a_{n-j}) / P_0(n)``.
    """
    P = [L.P(j) for j in range(L.phi_degree + 1)]
    if P[0][0]:
        raise OperatorError("0 is not an indicial root at x = 0; no power-series solution")
    a = [Fraction(0)] * (order + 1)
    a[0] = Fraction(a0)
    for n in range(1, order + 1):
        p0 = _eval(P[0], n)
        if not p0:
            raise ResonanceError(f"P_0({n}) = 0")
        acc = Fraction(0)
        for j in range(1, min(n, L.phi_degree) + 1):
            if a[n - j]:
                acc += _eval(P[j], n - j) * a[n - j]
        a[n] = -acc / p0
    return Series(a, order)


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    den = reduce(lcm, (a.denominator for a in row), 1)
    return [int(a * den) for a in row]


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Exact nullspace basis by fraction-free (integer) row reduction."""
    M = [_integer_row(r) for r in rows]
    M = [r for r in M if any(r)]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((k for k in range(r, len(M)) if M[k][col]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        prow = M[r]
        p = prow[col]
        for k in range(len(M)):
            if k != r and M[k][col]:
                f = M[k][col]
                new = [p * x - f * y for x, y in zip(M[k], prow)]
                g = reduce(gcd, new, 0)
                M[k] = [x // g for x in new] if g > 1 else new
        g = reduce(gcd, M[r], 0)
        if g > 1:
            M[r] = [x // g for x in M[r]]
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for k, pc in enumerate(pivots):
            v[pc] = Fraction(-M[k][fcol], M[k][pc])
        basis.append(v)
    return basis


def fit_operator(s: Series, order: int, phi_degree: int, margin: int = 10) -> ThetaOperator | None:
    """Find the operator of the given shape annihilating ``s``.

    Returns ``None`` when no such operator exists; raises
    :class:`AmbiguousFitError` when the data cannot pin it down.
    """
    unknowns = (order + 1) * (phi_degree + 1)
    if s.order < unknowns + margin - 1:
        raise OperatorError(
            f"series order {s.order} too small: need at least {unknowns + margin - 1}"
        )
    idx = [(i, j) for j in range(phi_degree + 1) for i in range(order + 1)]
    rows = []
    for n in range(s.order + 1):
        row = []
        for i, j in idx:
            m = n - j
            row.append(Fraction(m) ** i * s[m] if m >= 0 else Fraction(0))
        rows.append(row)
    basis = _nullspace(rows, unknowns)
    if not basis:
        return None
    if len(basis) > 1:
        raise AmbiguousFitError(
            f"nullspace has dimension {len(basis)}; increase the series order or reduce the operator shape"
        )
    v = basis[0]
    c = [[Fraction(0)] * (phi_degree + 1) for _ in range(order + 1)]
    for (i, j), a in zip(idx, v):
        c[i][j] = a
    return ThetaOperator(c).canonical()


# ---------------------------------------------------------------------------
# local exponents


def leading_coefficient_factor(L: ThetaOperator):
    """Factor ``C_order(x)`` over Z.

    Returns ``(unit, [(factor, multiplicity), ...], remainder)`` with integer
    factors low degree first; ``remainder`` is ``[1]`` when fully factored.
    """
    lead = L.canonical().C(L.order)
    return factor_integer_poly(lead)


def _field_zero(loc):
    return NumberFieldElement(loc.min_poly, [0]) if isinstance(loc, NumberFieldElement) else Fraction(0)


def _upoly_mul(p, q, zero):
    if not p or not q:
        return []
    out = [zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def _upoly_add(p, q, zero):
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else zero) + (q[i] if i < len(q) else zero) for i in range(n)]


def _is_zero(a) -> bool:
    return a.is_zero() if isinstance(a, NumberFieldElement) else a == 0


def _indicial_at_point(L: ThetaOperator, loc) -> list:
    """Indicial polynomial (in rho, low first) at a finite point, coefficients in the field of ``loc``."""
    zero = _field_zero(loc)
    one = zero + 1
    u_plus = [loc + 0, one]  # u + loc, i.e. x in terms of u = x - loc
    # an operator in the Weyl algebra: {m: poly in u}, meaning sum A_m(u) D^m
    theta_pow = {0: [one]}
    total: dict[int, list] = {}
    x_pows = [[one]]
    for _ in range(L.phi_degree):
        x_pows.append(_upoly_mul(x_pows[-1], u_plus, zero))
    for i in range(L.order + 1):
        Ci = L.C(i)
        if any(Ci):
            cpoly = [zero] * 1
            for j, a in enumerate(Ci):
                if a:
                    cpoly = _upoly_add(cpoly, [a * t for t in x_pows[j]], zero)
            for m, A in theta_pow.items():
                total[m] = _upoly_add(total.get(m, []), _upoly_mul(cpoly, A, zero), zero)
        # theta_pow <- Θ ∘ theta_pow, Θ = (u + loc) D
        nxt: dict[int, list] = {}
        for m, A in theta_pow.items():
            dA = [A[k] * k for k in range(1, len(A))]
            if dA:
                nxt[m] = _upoly_add(nxt.get(m, []), _upoly_mul(u_plus, dA, zero), zero)
            nxt[m + 1] = _upoly_add(nxt.get(m + 1, []), _upoly_mul(u_plus, A, zero), zero)
        theta_pow = nxt
    # lowest power of u in sum_m A_m(u) [rho]_m u^(rho - m)
    best = None
    terms = []
    for m, A in total.items():
        v = next((k for k, a in enumerate(A) if not _is_zero(a)), None)
        if v is None:
            continue
        key = v - m
        if best is None or key < best:
            best, terms = key, [(m, A[v])]
        elif key == best:
            terms.append((m, A[v]))
    poly = [zero]
    for m, lead in terms:
        fall = [one]
        for r in range(m):
            fall = _upoly_mul(fall, [zero - r, one], zero)
        poly = _upoly_add(poly, [lead * f for f in fall], zero)
    return poly


def _split_field_poly(poly) -> list[list[Fraction]]:
    """Write a polynomial over Q(alpha) as rational polynomials in each coordinate."""
    if not poly or not isinstance(poly[0], NumberFieldElement):
        return [normalize(poly)]
    deg = poly[0].degree
    return [normalize([a.coords[k] for a in poly]) for k in range(deg)]


@dataclass(frozen=True)
class Exponents:
    """Local exponents at one point; ``unresolved`` holds an irreducible leftover factor."""

    values: tuple[Fraction, ...]
    unresolved: tuple[Fraction, ...] = ()

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def as_strings(self) -> list[str]:
        out = [str(v) for v in self.values]
        if self.unresolved:
            out.append(f"roots of {poly_to_str(list(self.unresolved), 'rho')}")
        return out


def _exponents_from_poly(parts: list[list[Fraction]]) -> Exponents:
    parts = [p for p in parts if p]
    g = parts[0]
    for p in parts[1:]:
        g = poly_gcd(g, p)
    roots, rest = rational_roots(g)
    rest = normalize(rest)
    return Exponents(tuple(roots), tuple(rest) if len(rest) > 1 else ())


def singular_points(L: ThetaOperator) -> list:
    """Finite roots of the leading coefficient, rational ones as Fractions and
    quadratic-irrational ones as field elements (both conjugates)."""
    unit, factors, remainder = leading_coefficient_factor(L)
    pts = []
    for f, _mult in factors:
        if len(f) == 2:
            pts.append(Fraction(-f[0], f[1]))
        else:
            alpha = NumberFieldElement.generator(f)
            pts.extend([alpha, alpha.conjugate()])
    if len(remainder) > 1:
        raise OperatorError(f"leading coefficient has an unsupported factor {remainder}")
    return pts


def _is_point_singular(L: ThetaOperator, loc) -> bool:
    lead = L.C(L.order)
    val = 0
    for a in reversed(lead):
        val = val * loc + a
    return _is_zero(val) if isinstance(val, NumberFieldElement) else val == 0


def indicial_exponents(L: ThetaOperator, at) -> Exponents:
    """The four (or ``order``) local exponents of ``L`` at ``at``."""
    if at is INFINITY or (isinstance(at, str) and at in ("oo", "inf", "infinity")):
        return indicial_exponents(L.invert(), Fraction(0))
    if not isinstance(at, NumberFieldElement):
        at = Fraction(at)
    if isinstance(at, Fraction) and at == 0:
        return _exponents_from_poly([normalize(L.P(0))])
    if not _is_point_singular(L, at):
        raise OperatorError(f"{at} is not a singular point")
    return _exponents_from_poly(_split_field_poly(_indicial_at_point(L, at)))


@dataclass(frozen=True)
class PScheme:
    points: tuple  # ((location, Exponents), ...)

    def exponents_at(self, loc) -> Exponents:
        for p, e in self.points:
            if p == loc or (p is INFINITY and loc is INFINITY):
                return e
        raise KeyError(loc)

    def fuchs_sum(self) -> Fraction:
        return sum((sum(e.values, Fraction(0)) for _, e in self.points), Fraction(0))

    def to_json(self) -> list[dict]:
        out = []
        for loc, e in self.points:
            out.append({"point": location_str(loc), "exponents": e.as_strings()})
        return out


def location_str(loc) -> str:
    if loc is INFINITY:
        return "oo"
    if isinstance(loc, NumberFieldElement):
        m = [Fraction(a) for a in loc.min_poly]
        prim = _integer_row(m)
        g = reduce(gcd, prim, 0)
        prim = [a // g for a in prim]
        which = "a1" if loc.coords[1] > 0 else "a2"
        return f"{which} (root of {poly_to_str(prim, 'x')})"
    return str(loc)


def riemann_scheme(L: ThetaOperator) -> PScheme:
    pts = [Fraction(0)] + singular_points(L)
    pts = [p for i, p in enumerate(pts) if not (isinstance(p, Fraction) and p == 0 and i > 0)]
    rows = [(p, indicial_exponents(L, p)) for p in pts]
    rows.append((INFINITY, indicial_exponents(L, INFINITY)))
    return PScheme(tuple(rows))
