"""Dense univariate polynomials over Q, stored low degree first.

Just enough algebra for indicial equations and leading-coefficient
factorizations: division, gcd, square-free decomposition and exact root
extraction over Q and quadratic fields.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, isqrt, lcm

__all__ = [
    "normalize",
    "poly_add",
    "poly_sub",
    "poly_mul",
    "poly_pow",
    "poly_divmod",
    "poly_gcd",
    "poly_eval",
    "poly_derivative",
    "primitive_part",
    "squarefree_decomposition",
    "rational_roots",
    "factor_integer_poly",
    "poly_to_str",
]

Poly = list  # list[Fraction], low degree first


def normalize(p) -> list[Fraction]:
    p = [Fraction(a) for a in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p) -> int:
    return len(normalize(p)) - 1


def poly_add(p, q):
    n = max(len(p), len(q))
    return normalize([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def poly_sub(p, q):
    return poly_add(p, [-a for a in q])


def poly_mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return normalize(out)


def poly_pow(p, k: int):
    out = [Fraction(1)]
    for _ in range(k):
        out = poly_mul(out, p)
    return out


def poly_divmod(p, q):
    p, q = normalize(p), normalize(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    rem = list(p)
    lead = q[-1]
    while len(rem) >= len(q) and rem:
        k = len(rem) - len(q)
        c = rem[-1] / lead
        quot[k] = c
        for i, b in enumerate(q):
            rem[k + i] -= c * b
        rem = normalize(rem)
    return normalize(quot), rem


def poly_gcd(p, q):
    p, q = normalize(p), normalize(q)
    while q:
        p, q = q, poly_divmod(p, q)[1]
    if not p:
        return []
    return [a / p[-1] for a in p]


def poly_eval(p, x):
    acc = 0
    for a in reversed(p):
        acc = acc * x + a
    return acc


def poly_derivative(p):
    return normalize([i * a for i, a in enumerate(p)][1:])


def content(p) -> Fraction:
    p = normalize(p)
    if not p:
        return Fraction(0)
    den = reduce(lcm, (a.denominator for a in p), 1)
    num = reduce(gcd, (a.numerator for a in p), 0)
    return Fraction(num, den)


def primitive_part(p) -> list[int]:
    """Integer primitive polynomial with positive leading coefficient."""
    p = normalize(p)
    if not p:
        return []
    c = content(p)
    out = [int(a / c) for a in p]
    if out[-1] < 0:
        out = [-a for a in out]
    return out


def squarefree_decomposition(p) -> list[tuple[list[Fraction], int]]:
    """Yun's algorithm: monic factors ``a_i`` with ``p = lc * prod a_i**i``."""
    p = normalize(p)
    if len(p) <= 1:
        return []
    p = [a / p[-1] for a in p]
    out = []
    dp = poly_derivative(p)
    a = poly_gcd(p, dp)
    b = poly_divmod(p, a)[0]
    c = poly_divmod(dp, a)[0]
    d = poly_sub(c, poly_derivative(b))
    i = 1
    while len(b) > 1:
        a = poly_gcd(b, d)
        if len(a) > 1:
            out.append((a, i))
        b = poly_divmod(b, a)[0]
        c = poly_divmod(d, a)[0]
        d = poly_sub(c, poly_derivative(b))
        i += 1
    return out


def _small_factorization(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
        if f > 10**6:
            raise ValueError("integer too hard to factor for rational-root search")
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in _small_factorization(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return divs


def _roots_squarefree(p) -> tuple[list[Fraction], list[Fraction]]:
    """Rational roots of a square-free polynomial and the unresolved cofactor."""
    p = normalize(p)
    roots: list[Fraction] = []
    while len(p) > 1 and p[0] == 0:
        roots.append(Fraction(0))
        p = p[1:]
    deg = len(p) - 1
    if deg <= 0:
        return roots, p
    if deg == 1:
        return roots + [-p[0] / p[1]], [Fraction(1)]
    if deg == 2:
        c, b, a = p
        disc = b * b - 4 * a * c
        if disc >= 0:
            n, d = disc.numerator, disc.denominator
            rn, rd = isqrt(n), isqrt(d)
            if rn * rn == n and rd * rd == d:
                s = Fraction(rn, rd)
                return roots + [(-b - s) / (2 * a), (-b + s) / (2 * a)], [Fraction(1)]
        return roots, p
    q = primitive_part(p)
    rest = [Fraction(a) for a in q]
    for num in _divisors(q[0]):
        for den in _divisors(q[-1]):
            for r in (Fraction(num, den), Fraction(-num, den)):
                if len(rest) > 1 and poly_eval(rest, r) == 0:
                    roots.append(r)
                    rest = poly_divmod(rest, [-r, Fraction(1)])[0]
    if len(rest) == 3:
        more, rest = _roots_squarefree(rest)
        roots += more
    return roots, rest


def rational_roots(p) -> tuple[list[Fraction], list[Fraction]]:
    """All rational roots of ``p`` with multiplicity, plus the unresolved monic cofactor.

    The cofactor is ``[1]`` when ``p`` splits completely over Q.
    """
    roots: list[Fraction] = []
    rest = [Fraction(1)]
    for factor, mult in squarefree_decomposition(p):
        r, leftover = _roots_squarefree(factor)
        roots += r * mult
        rest = poly_mul(rest, poly_pow(leftover, mult))
    if rest and rest[-1] != 1:
        rest = [a / rest[-1] for a in rest]
    return sorted(roots), rest


def factor_integer_poly(p) -> tuple[int, list[tuple[list[int], int]], list[int]]:
    """Factor an integer polynomial into content, irreducible factors of degree <= 2,
    and an unfactored remainder (``[1]`` if none).

    Factors are primitive with positive leading coefficient.  The sign of the
    input is folded into the content.
    """
    p = normalize(p)
    if not p:
        raise ValueError("cannot factor the zero polynomial")
    prim = primitive_part(p)
    cont = content(p)
    sign = 1 if p[-1] > 0 else -1
    unit = int(cont) * sign if cont.denominator == 1 else cont * sign
    factors: dict[tuple[int, ...], int] = {}
    remainder = [1]
    for sqf, mult in squarefree_decomposition(prim):
        roots, rest = _roots_squarefree(sqf)
        for r in roots:
            lin = (-r.numerator, r.denominator)
            factors[lin] = factors.get(lin, 0) + mult
        rest = normalize(rest)
        if len(rest) > 1:
            prim_rest = tuple(primitive_part(rest))
            if len(prim_rest) == 3:
                factors[prim_rest] = factors.get(prim_rest, 0) + mult
            else:
                remainder = primitive_part(poly_mul(remainder, poly_pow(list(prim_rest), mult)))
    # fix up the integer unit so that unit * prod(factors) * remainder == p
    prod = [Fraction(1)]
    for f, m in factors.items():
        prod = poly_mul(prod, poly_pow(list(f), m))
    prod = poly_mul(prod, remainder)
    unit = p[-1] / prod[-1]
    if unit.denominator == 1:
        unit = int(unit)
    ordered = sorted(factors.items(), key=lambda fm: (len(fm[0]), fm[0]))
    return unit, [(list(f), m) for f, m in ordered], list(remainder)


def poly_to_str(p, var: str = "x") -> str:
    p = normalize(p)
    if not p:
        return "0"
    terms = []
    for k in range(len(p) - 1, -1, -1):
        a = p[k]
        if not a:
            continue
        mag = abs(a)
        if k == 0:
            body = f"{mag}"
        elif mag == 1:
            body = var if k == 1 else f"{var}^{k}"
        else:
            body = f"{mag}*{var}" if k == 1 else f"{mag}*{var}^{k}"
        terms.append(("-" if a < 0 else "+", body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for s, body in terms[1:]:
        out += f" {s} {body}"
    return out
