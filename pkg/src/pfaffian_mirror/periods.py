"""Closed-form binomial sums for fundamental periods, keyed by rule name."""
from __future__ import annotations

from math import comb
from typing import Callable

from .exact_series import Series

__all__ = ["PERIOD_RULES", "period_coefficient", "period_series"]


def _c(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0


def _x13(n: int) -> int:
    return _c(2 * n, n) ** 2 * sum(_c(2 * n + k, n) * _c(n, k) ** 2 for k in range(n + 1))


def _x5(n: int) -> int:
    return _c(2 * n, n) * sum(
        _c(n, k) * _c(n + k, n) * _c(2 * n + 2 * k, n + k) * _c(2 * n + k, 2 * n - k) for k in range(n + 1)
    )


def _x7(n: int) -> int:
    # transcribed as printed; it disagrees with the operator from the first coefficient on
    return _c(2 * n, n) * sum(_c(n + k, k) * _c(2 * n, k) ** 2 for k in range(2 * n + 1))


def _x10(n: int) -> int:
    return _c(2 * n, n) * sum((-1) ** (k + n) * _c(2 * n, k) ** 4 for k in range(2 * n + 1))


def _x9(n: int) -> int:
    return _c(3 * n, n) ** 2 * _c(2 * n, n) ** 2


def _geometric(n: int) -> int:
    return 1


PERIOD_RULES: dict[str, Callable[[int], int]] = {
    "x13": _x13,
    "x5": _x5,
    "x7": _x7,
    "x10": _x10,
    "x9": _x9,
    "geometric": _geometric,
}


def period_coefficient(rule: str, n: int) -> int:
    try:
        return PERIOD_RULES[rule](n)
    except KeyError:
        raise KeyError(f"unknown period rule {rule!r}") from None


def period_series(rule: str, order: int) -> Series:
    f = PERIOD_RULES[rule] if rule in PERIOD_RULES else None
    if f is None:
        raise KeyError(f"unknown period rule {rule!r}")
    return Series([f(n) for n in range(order + 1)], order)
