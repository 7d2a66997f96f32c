"""Shared fixtures: the quintic family is a classical, independently known check."""
from fractions import Fraction
from math import factorial

from pfaffian_mirror import Series, ThetaOperator
from pfaffian_mirror.polynomial import poly_mul


def quintic() -> ThetaOperator:
    p = [1]
    for k in range(1, 5):
        p = poly_mul(p, [k, 5])
    return ThetaOperator.from_blocks({0: [0, 0, 0, 0, 1], 1: [-5 * a for a in p]})


def quintic_period(order: int) -> Series:
    return Series([Fraction(factorial(5 * n), factorial(n) ** 5) for n in range(order + 1)], order)
