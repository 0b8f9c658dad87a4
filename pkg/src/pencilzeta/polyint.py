"""Dense univariate polynomial arithmetic with exact integer coefficients.

Coefficient lists are low-degree first; the zero polynomial is [0].
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd


def trim(a):
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def is_zero(a) -> bool:
    return all(c == 0 for c in a)


def degree(a) -> int:
    a = trim(a)
    return len(a) - 1


def pmul(a, b):
    if is_zero(a) or is_zero(b):
        return [0]
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def padd(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def psub(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def pscale(a, c):
    return trim([c * x for x in a])


def ppow(a, e):
    out = [1]
    base = list(a)
    while e:
        if e & 1:
            out = pmul(out, base)
        base = pmul(base, base)
        e >>= 1
    return out


def pdivmod(a, b):
    """Quotient and remainder over the rationals (exact Fractions)."""
    a = [Fraction(x) for x in trim(a)]
    b = [Fraction(x) for x in trim(b)]
    if is_zero(b):
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and not is_zero(a):
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for i in range(len(b)):
            a[shift + i] -= f * b[i]
        a = trim(a)
    return trim(q), a


def pdiv_exact(a, b):
    """Exact division with integer result; raises if the division fails."""
    q, r = pdivmod(a, b)
    if not is_zero(r):
        raise ValueError("polynomial division is not exact")
    if any(x.denominator != 1 for x in q):
        raise ValueError("quotient is not integral")
    return [int(x) for x in q]


def divides(b, a) -> bool:
    q, r = pdivmod(a, b)
    return is_zero(r) and all(x.denominator == 1 for x in q)


def peval(a, x):
    out = 0
    for c in reversed(trim(a)):
        out = out * x + c
    return out


def content(a) -> int:
    g = 0
    for c in a:
        g = gcd(g, int(c))
    return g or 1


def pgcd(a, b):
    """Monic-free gcd over Q, returned as a primitive integer polynomial
    normalized to positive constant term when possible."""
    a = [Fraction(x) for x in trim(a)]
    b = [Fraction(x) for x in trim(b)]
    while not is_zero(b):
        _, r = pdivmod(a, b)
        a, b = b, [Fraction(x) for x in r]
    denom = 1
    for c in a:
        denom = denom * c.denominator // gcd(denom, c.denominator)
    ints = [int(c * denom) for c in a]
    g = content(ints)
    ints = [c // g for c in ints]
    if ints[0] < 0 or (ints[0] == 0 and ints[-1] < 0):
        ints = [-c for c in ints]
    return ints


@lru_cache(maxsize=None)
def cyclotomic(n: int):
    """The n-th cyclotomic polynomial with integer coefficients."""
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = pdiv_exact(poly, cyclotomic(d))
    return tuple(poly)


def x_power_minus_one(n: int):
    return [-1] + [0] * (n - 1) + [1]
