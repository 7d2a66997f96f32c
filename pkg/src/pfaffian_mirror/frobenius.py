"""Frobenius solutions at a point of maximally unipotent monodromy, and the mirror map."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .theta_operator import OperatorError, ResonanceError, ThetaOperator
from .exact_series import Series, SeriesError

__all__ = ["FrobeniusBasis", "frobenius_basis", "mirror_map", "inverse_mirror_map", "is_mum"]


@dataclass(frozen=True)
class FrobeniusBasis:
    """Solutions near 0 of a MUM operator.

    ``phi0`` is the holomorphic solution (constant term 1) and
    ``log(x)*phi0 + psi`` the single-log one.  ``log2``/``log3`` are the
    holomorphic parts of the double/triple-log solutions, i.e. the
    coefficients of eps^2, eps^3 of ``sum a_n(eps) x^n``.
    """

    phi0: Series
    psi: Series
    log2: Series | None = None
    log3: Series | None = None

    @property
    def order(self) -> int:
        return self.phi0.order

    def residuals(self, L: ThetaOperator) -> list[Series]:
        """Log-strata of ``L(log(x)*phi0 + psi)``; all vanish for a genuine solution."""
        return L.apply_log([self.psi, self.phi0])


def is_mum(L: ThetaOperator) -> bool:
    p0 = L.P(0)
    return bool(p0[-1]) and not any(p0[:-1])


def _tmul(a: list[Fraction], b: list[Fraction], k: int) -> list[Fraction]:
    out = [Fraction(0)] * k
    for i, x in enumerate(a):
        if x:
            for j in range(k - i):
                out[i + j] += x * b[j]
    return out


def _tinv(a: list[Fraction], k: int) -> list[Fraction]:
    out = [Fraction(0)] * k
    out[0] = 1 / a[0]
    for m in range(1, k):
        s = sum((a[i] * out[m - i] for i in range(1, m + 1)), Fraction(0))
        out[m] = -s / a[0]
    return out


def _poly_at_shift(p: list[Fraction], n: int, k: int) -> list[Fraction]:
    """Coefficients in eps of ``p(n + eps)`` modulo eps^k."""
    out = [Fraction(0)] * k
    # Horner over truncated polynomials in eps
    for a in reversed(p):
        out = _tmul(out, [Fraction(n), Fraction(1)] + [Fraction(0)] * (k - 2), k) if k > 1 else [out[0] * n]
        out[0] += a
    return out


def frobenius_basis(L: ThetaOperator, order: int = 30, depth: int = 1) -> FrobeniusBasis:
    if depth not in (1, 2, 3):
        raise ValueError("depth must be 1, 2 or 3")
    if not is_mum(L):
        raise OperatorError("operator is not maximally unipotent at 0")
    k = depth + 1
    P = [L.P(j) for j in range(L.phi_degree + 1)]
    a: list[list[Fraction]] = [[Fraction(1)] + [Fraction(0)] * (k - 1)]
    for n in range(1, order + 1):
        p0 = _poly_at_shift(P[0], n, k)
        if not p0[0]:
            raise ResonanceError(f"P_0({n}) = 0")
        acc = [Fraction(0)] * k
        for j in range(1, min(n, L.phi_degree) + 1):
            term = _tmul(_poly_at_shift(P[j], n - j, k), a[n - j], k)
            acc = [x + y for x, y in zip(acc, term)]
        a.append([-x for x in _tmul(acc, _tinv(p0, k), k)])
    strata = [Series([a[n][e] for n in range(order + 1)], order) for e in range(k)]
    return FrobeniusBasis(
        phi0=strata[0],
        psi=strata[1],
        log2=strata[2] if depth >= 2 else None,
        log3=strata[3] if depth >= 3 else None,
    )


def mirror_map(basis: FrobeniusBasis, order: int | None = None) -> Series:
    """``q(x) = x * exp(psi/phi0)``."""
    n = basis.order if order is None else order
    ratio = (basis.psi / basis.phi0).truncate(n)
    return ratio.exp().shift(1).truncate(n)


def inverse_mirror_map(q_of_phi: Series) -> Series:
    if q_of_phi.order < 1 or q_of_phi[0] != 0 or q_of_phi[1] != 1:
        raise SeriesError("mirror map must be x + O(x^2)")
    return q_of_phi.reversion()
