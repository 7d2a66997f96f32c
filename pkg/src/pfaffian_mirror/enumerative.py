"""Yukawa couplings and Gopakumar-Vafa (BPS) invariants in genus 0 and 1."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .frobenius import FrobeniusBasis, frobenius_basis, inverse_mirror_map, mirror_map
from .numberfield import NumberFieldElement
from .theta_operator import OperatorError, ThetaOperator, indicial_exponents, leading_coefficient_factor
from .polynomial import poly_mul
from .exact_series import Series, SeriesError

__all__ = [
    "EnumerativeInputs",
    "GVTable",
    "MirrorData",
    "mirror_data",
    "yukawa_phi",
    "yukawa_q",
    "yukawa_from_table",
    "gv_genus0",
    "bcov_genus1",
    "gw_bps_convert",
    "virtual_invariants",
    "conifold_discriminant",
]


@dataclass(frozen=True)
class EnumerativeInputs:
    deg: Fraction
    c2H: Fraction
    chi: Fraction
    h11: int = 1

    def __post_init__(self):
        for name in ("deg", "c2H", "chi"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def from_hodge(cls, deg, c2H, h11: int, h12: int) -> "EnumerativeInputs":
        return cls(deg, c2H, 2 * (h11 - h12), h11)


@dataclass
class GVTable:
    genus: int
    entries: dict[int, Fraction]
    family: str = ""
    assumptions: dict = field(default_factory=dict)

    def __getitem__(self, d: int) -> Fraction:
        return self.entries[d]

    @property
    def max_degree(self) -> int:
        return max(self.entries) if self.entries else 0

    def values(self) -> list[Fraction]:
        return [self.entries[d] for d in sorted(self.entries)]

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.entries.values())

    def scaled(self, factor) -> "GVTable":
        f = Fraction(factor)
        return GVTable(self.genus, {d: v * f for d, v in self.entries.items()}, self.family, dict(self.assumptions))

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "genus": self.genus,
            "invariants": {str(d): str(self.entries[d]) for d in sorted(self.entries)},
            "assumptions": {k: _jsonable(v) for k, v in sorted(self.assumptions.items())},
        }

    @classmethod
    def from_json(cls, doc) -> "GVTable":
        if isinstance(doc, str):
            doc = json.loads(doc)
        entries = {int(d): Fraction(v) for d, v in doc["invariants"].items()}
        return cls(int(doc["genus"]), entries, doc.get("family", ""), dict(doc.get("assumptions", {})))


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


def _poly_series(p: Sequence, order: int) -> Series:
    c = [Fraction(a) for a in p][: order + 1]
    return Series(c, order)


@dataclass(frozen=True)
class MirrorData:
    """Everything downstream of the Frobenius basis, expressed in q."""

    basis: FrobeniusBasis
    q_of_phi: Series
    phi_of_q: Series

    @property
    def order(self) -> int:
        return self.phi_of_q.order

    @property
    def phi_over_q(self) -> Series:
        return self.phi_of_q.shift(-1)

    def jacobian(self) -> Series:
        """``q dphi/dq / phi`` as a q-series."""
        u = self.phi_over_q
        return 1 + u.theta() / u

    def pullback(self, s: Series) -> Series:
        """``s(phi(q))``."""
        n = self.phi_over_q.order
        return s.truncate(min(n, s.order)).compose(self.phi_of_q.truncate(min(n, s.order)))


def mirror_data(L: ThetaOperator, order: int) -> MirrorData:
    # one extra term because phi(q)/q loses one order
    basis = frobenius_basis(L, order + 1)
    q = mirror_map(basis, order + 1)
    return MirrorData(basis, q, inverse_mirror_map(q))


def yukawa_phi(L: ThetaOperator, deg=1, order: int = 30) -> Series:
    """``E(x) = exp(-1/2 * int C_3/C_4 dx/x)``; the coupling is ``deg * x^-3 * E``.

    ``deg`` does not enter ``E``; it is accepted for symmetry with :func:`yukawa_q`.
    """
    top = L.order
    c_sub = L.C(top - 1)
    if c_sub and c_sub[0]:
        raise OperatorError("C_3(0) != 0: the Yukawa integrand is not regular at 0")
    c3 = _poly_series(c_sub, order)
    c4 = _poly_series(L.C(top), order)
    return (c3 / c4 * Fraction(-1, 2)).integrate_theta().exp()


def yukawa_q(L: ThetaOperator, deg=1, order: int = 30, data: MirrorData | None = None) -> Series:
    """``K_ttt(q) = deg * J^3 * E(phi(q)) / Phi_0(phi(q))^2`` with ``J = q phi'/phi``."""
    data = data or mirror_data(L, order)
    E = yukawa_phi(L, deg, data.order)
    J = data.jacobian()
    K = J**3 * data.pullback(E) / data.pullback(data.basis.phi0) ** 2
    return (K * Fraction(deg)).truncate(order)


def gv_genus0(K: Series, deg=None, max_d: int = 5, family: str = "") -> GVTable:
    """Solve ``K = deg + sum_d n_d d^3 q^d/(1-q^d)`` degree by degree."""
    if deg is not None and K[0] != Fraction(deg):
        raise SeriesError(f"constant term {K[0]} of the coupling differs from deg={deg}")
    if max_d > K.order:
        raise SeriesError(f"coupling known to order {K.order}, need {max_d}")
    n: dict[int, Fraction] = {}
    for m in range(1, max_d + 1):
        s = K[m] - sum((n[d] * d**3 for d in n if m % d == 0), Fraction(0))
        n[m] = s / m**3
    return GVTable(0, n, family, {"deg": K[0]})


def yukawa_from_table(table: GVTable, deg, order: int) -> Series:
    """Inverse of :func:`gv_genus0`: ``deg + sum_d n_d d^3 q^d/(1-q^d)``."""
    c = [Fraction(0)] * (order + 1)
    c[0] = Fraction(deg)
    for d, n in table.entries.items():
        for m in range(d, order + 1, d):
            c[m] += n * d**3
    return Series(c, order)


def bcov_genus1(
    L: ThetaOperator,
    inputs: EnumerativeInputs,
    disc: Sequence,
    n0: GVTable,
    max_d: int = 5,
    order: int | None = None,
    data: MirrorData | None = None,
    family: str = "",
) -> GVTable:
    """Genus-one BPS numbers from the BCOV free energy.

    ``disc`` is a polynomial in x (low degree first) with ``disc(0) == 1``.
    Extraction uses ``q dF_1/dq + c2H/24 = sum_d (n0_d/12 + n1_d) d q^d/(1-q^d)``.
    """
    disc = [Fraction(a) for a in disc]
    if not disc or disc[0] == 0:
        raise SeriesError("discriminant must have a nonzero constant term")
    if disc[0] != 1:
        disc = [a / disc[0] for a in disc]
    order = order if order is not None else max_d + 1
    data = data or mirror_data(L, order)
    n = data.phi_over_q.order
    if max_d > n:
        raise SeriesError(f"mirror data known to order {n}, need {max_d}")
    expo = inputs.chi / 12 - 3 - inputs.h11
    log_terms = (
        data.pullback(data.basis.phi0).log() * expo
        + data.jacobian().log()
        - data.pullback(_poly_series(disc, n)).log() * Fraction(1, 6)
        - data.phi_over_q.log() * (inputs.c2H / 12)
    )
    # q d/dq of the regular part of F_1; the log q term supplies exactly -c2H/24
    dF = log_terms.theta() * Fraction(1, 2)
    n1: dict[int, Fraction] = {}
    for m in range(1, max_d + 1):
        s = dF[m] - sum(((n0[d] / 12 + n1[d]) * d for d in n1 if m % d == 0), Fraction(0))
        n1[m] = s / m - n0[m] / 12
    assumptions = {
        "disc": [str(a) for a in disc],
        "disc_exponent": "1/6",
        "chi": inputs.chi,
        "c2H": inputs.c2H,
        "deg": inputs.deg,
        "h11": inputs.h11,
    }
    return GVTable(1, n1, family or n0.family, assumptions)


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def gw_bps_convert(
    table: GVTable, direction: str, max_d: int | None = None, genus0: GVTable | None = None
) -> GVTable:
    """Convert between Gromov-Witten numbers ``N_d`` and BPS numbers ``n_d``.

    genus 0: ``N_d = sum_{k|d} n_{d/k} / k^3``.
    genus 1: ``N_m = sum_{d|m} (n0_d/12 + n1_d) * d/m``; needs the genus-0 BPS table.
    """
    max_d = max_d or table.max_degree
    src = table.entries
    get = lambda d: src.get(d, Fraction(0))  # noqa: E731
    if table.genus == 0:
        out: dict[int, Fraction] = {}
        if direction == "bps_to_gw":
            for m in range(1, max_d + 1):
                out[m] = sum((get(m // k) / Fraction(k) ** 3 for k in _divisors(m)), Fraction(0))
        elif direction == "gw_to_bps":
            for m in range(1, max_d + 1):
                rest = sum((out[m // k] / Fraction(k) ** 3 for k in _divisors(m) if k > 1), Fraction(0))
                out[m] = get(m) - rest
        else:
            raise ValueError(f"unknown direction {direction!r}")
        return GVTable(0, out, table.family, {**table.assumptions, "kind": _kind(direction)})
    if table.genus == 1:
        if genus0 is None:
            raise ValueError("genus-1 conversion needs the genus-0 BPS table")
        g0 = lambda d: genus0.entries.get(d, Fraction(0))  # noqa: E731
        out = {}
        if direction == "bps_to_gw":
            for m in range(1, max_d + 1):
                out[m] = sum(((g0(d) / 12 + get(d)) * Fraction(d, m) for d in _divisors(m)), Fraction(0))
        elif direction == "gw_to_bps":
            for m in range(1, max_d + 1):
                rest = sum(
                    ((g0(d) / 12 + out[d]) * Fraction(d, m) for d in _divisors(m) if d < m), Fraction(0)
                )
                out[m] = get(m) - rest - g0(m) / 12
        else:
            raise ValueError(f"unknown direction {direction!r}")
        return GVTable(1, out, table.family, {**table.assumptions, "kind": _kind(direction)})
    raise ValueError("only genus 0 and 1 are supported")


def _kind(direction: str) -> str:
    return "gw" if direction == "bps_to_gw" else "bps"


def virtual_invariants(
    L_tilde: ThetaOperator,
    virtual_deg=1,
    c2H_virtual=None,
    chi_virtual=None,
    max_d: int = 5,
    order: int | None = None,
    genus: int = 0,
    disc: Sequence | None = None,
    family: str = "",
) -> GVTable:
    """BPS-like numbers at a second MUM point; integrality is not asserted.

    ``genus=1`` additionally needs ``c2H_virtual``, ``chi_virtual`` and ``disc``.
    """
    order = order if order is not None else max_d + 1
    data = mirror_data(L_tilde, order)
    K = yukawa_q(L_tilde, virtual_deg, order, data=data)
    g0 = gv_genus0(K, virtual_deg, max_d, family)
    g0.assumptions["virtual_deg"] = Fraction(virtual_deg)
    if genus == 0:
        return g0
    if c2H_virtual is None or chi_virtual is None or disc is None:
        raise ValueError("genus-1 virtual invariants need c2H_virtual, chi_virtual and disc")
    inputs = EnumerativeInputs(virtual_deg, c2H_virtual, chi_virtual, 1)
    g1 = bcov_genus1(L_tilde, inputs, disc, g0, max_d, order, data, family)
    g1.assumptions["virtual_deg"] = Fraction(virtual_deg)
    return g1


CONIFOLD_EXPONENTS = (Fraction(0), Fraction(1), Fraction(1), Fraction(2))


def conifold_discriminant(L: ThetaOperator) -> list[Fraction]:
    """Product of the irreducible factors of ``C_4`` whose roots carry exponents
    (0, 1, 1, 2), scaled to constant term 1 (low degree first)."""
    _unit, factors, _rest = leading_coefficient_factor(L)
    out = [Fraction(1)]
    for f, _mult in factors:
        root = Fraction(-f[0], f[1]) if len(f) == 2 else NumberFieldElement.generator(f)
        if tuple(sorted(indicial_exponents(L, root).values)) == CONIFOLD_EXPONENTS:
            out = poly_mul(out, [Fraction(a) for a in f])
    if out[0] == 0:
        raise OperatorError("a conifold factor vanishes at 0")
    return [a / out[0] for a in out]
