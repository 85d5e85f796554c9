"""Cyclotomic factorization of binomials m - 1 in the Laurent ring.

For a monomial m = x^g with x primitive, m - 1 = prod_{d | g} Phi_d(x), and
each Phi_d(x) is irreducible.  Denominators built from brackets therefore
factor uniquely into keys ("c", x, d), which keeps lcms honest.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .laurent import LATTICE


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple:
    """Integer coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _divide(num, cyclotomic_coeffs(d))
    return tuple(num)


def _divide(a: list, b: tuple) -> list:
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        q = a[i + len(b) - 1] // b[-1]
        out[i] = q
        for j, c in enumerate(b):
            a[i + j] -= q * c
    assert not any(a), "inexact cyclotomic division"
    return out


def divisors(n: int) -> list:
    return [d for d in range(1, n + 1) if n % d == 0]


def primitive(exps) -> tuple:
    """Split exps = g * x with x primitive and first nonzero entry of x positive.

    Integral exponent vectors are factored over the integer lattice (x has
    entries divisible by LATTICE); otherwise over the quarter lattice.
    Returns (x, g) with g possibly negative.
    """
    g = 0
    for e in exps:
        g = gcd(g, e)
    if g == 0:
        return tuple(exps), 0
    unit = LATTICE if g % LATTICE == 0 else 1
    g //= unit
    x = tuple(e // g for e in exps)
    first = next(e for e in x if e)
    if first < 0:
        x = tuple(-e for e in x)
        g = -g
    return x, g


def phi_of_power(d: int, n: int) -> list:
    """Phi_d(x^n) = prod Phi_k(x) over k | dn with k / gcd(k, n) = d."""
    return [k for k in divisors(d * n) if k // gcd(k, n) == d]


def phi_inverse_unit(x, k: int):
    """Phi_k(x^-1) = c * x^e * Phi_k(x); returns (c, e) with e a multiple of x."""
    if k == 1:
        return -1, -1
    deg = len(cyclotomic_coeffs(k)) - 1
    return 1, -deg


def binomial_factorization(exps):
    """m - 1 for m = t^exps as (coeff, unit exponent vector, [factor keys]).

    Raises ZeroDivisionError-free: for the trivial monomial returns None.
    """
    x, g = primitive(exps)
    if g == 0:
        return None
    if g > 0:
        return 1, (0,) * len(x), [("c", x, d) for d in divisors(g)]
    # x^-|g| - 1 = -x^-|g| (x^|g| - 1)
    return -1, tuple(-abs(g) * e for e in x), [("c", x, d) for d in divisors(-g)]


def transform_key(key, image_exps):
    """Factor Phi_d(x') where x' = image of x; returns (coeff, unit exps, keys) or a constant."""
    _, _, d = key
    y, g = primitive(image_exps)
    n = len(image_exps)
    if g == 0:
        # Phi_d(1): 0 for d = 1, p for prime powers, else 1
        return Fraction(_phi_at_one(d)), (0,) * n, []
    coeff, unit = 1, [0] * n
    keys = []
    for k in phi_of_power(d, abs(g)):
        keys.append(("c", y, k))
        if g < 0:
            c, e = phi_inverse_unit(y, k)
            coeff *= c
            unit = [u + e * yi for u, yi in zip(unit, y)]
    return coeff, tuple(unit), keys


def _phi_at_one(d: int) -> int:
    return sum(cyclotomic_coeffs(d))
