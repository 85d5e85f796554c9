"""Rational functions with a factored denominator.

The denominator is a multiset of irreducible-or-normalized factor keys:

* ``("c", x, d)`` -- the cyclotomic factor Phi_d(x) of a primitive monomial x.
  Every binomial (in particular every bracket) factors into these, so the
  lcm of two denominators is a true lcm on that part.
* ``("p", terms)`` -- any other polynomial, normalized by stripping its
  monomial content and leading coefficient.

Sums use the lcm of the two multisets, so no polynomial GCD is ever needed;
equality is decided by cross-multiplying to the common multiset.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from ..errors import EvaluationSingular
from .cyclotomic import binomial_factorization, cyclotomic_coeffs, transform_key
from .laurent import _BIAS, _MASK, _W, LaurentPoly, Monomial, VarTable, _substitution


def normalize_factor(p: LaurentPoly):
    """Split ``p = c * t^low * f`` with f normalized; returns (key, c, low)."""
    p = p.reduced()
    if not p.terms:
        raise ZeroDivisionError("zero factor in a denominator")
    vt = p.vt
    exps = [vt.unpack(k) for k in p.terms]
    low = tuple(min(col) for col in zip(*exps))
    shift = vt.pack(low) - vt.bias_key
    top = max(p.terms)
    c = p.terms[top]
    f = {k - shift: Fraction(v) / c for k, v in p.terms.items()}
    fkey = tuple(sorted((k, int(v) if v.denominator == 1 else v) for k, v in f.items()))
    return ("p", fkey), c, low


def factorize(p: LaurentPoly):
    """p = coeff * t^unit * prod(keys); returns (coeff, unit exps, [keys]) ([] for monomials)."""
    p = p.reduced()
    vt = p.vt
    if not p.terms:
        raise ZeroDivisionError("zero factor in a denominator")
    if len(p.terms) == 1:
        (k, c), = p.terms.items()
        return Fraction(c), vt.unpack(k), []
    if len(p.terms) == 2:
        (ka, ca), (kb, cb) = sorted(p.terms.items())
        if ca == -cb:
            a, b = vt.unpack(ka), vt.unpack(kb)
            m = vt.reduce_exps([x - y for x, y in zip(a, b)])
            c2, unit, keys = binomial_factorization(m)
            return Fraction(ca) * c2, tuple(u + y for u, y in zip(unit, b)), keys
    key, c, low = normalize_factor(p)
    if key[1] == ((vt.bias_key, 1),):
        return Fraction(c), low, []
    return Fraction(c), low, [key]


@lru_cache(maxsize=None)
def factor_poly(vt: VarTable, key) -> LaurentPoly:
    if key[0] == "c":
        _, x, d = key
        terms = {}
        for j, a in enumerate(cyclotomic_coeffs(d)):
            if a:
                terms[vt.pack([j * e for e in x])] = a
        return LaurentPoly(vt, terms)
    return LaurentPoly._raw(vt, dict(key[1]))


@lru_cache(maxsize=8192)
def _expand(vt: VarTable, factors: tuple) -> LaurentPoly:
    out = LaurentPoly.const(vt, 1)
    for key, mult in factors:
        out = out * factor_poly(vt, key) ** mult
    return out


def _canon(counter) -> tuple:
    return tuple(sorted((k, m) for k, m in counter.items() if m))


def _lcm(a: tuple, b: tuple) -> tuple:
    if a == b:
        return a
    d = dict(a)
    for k, m in b:
        if m > d.get(k, 0):
            d[k] = m
    return _canon(d)


def _quotient(big: tuple, small: tuple) -> tuple:
    d = dict(big)
    for k, m in small:
        d[k] -= m
    return _canon(d)


def _unit_poly(vt, coeff, exps) -> LaurentPoly:
    return LaurentPoly(vt, {vt.pack(exps): coeff})


class RationalFn:
    """num / prod(factor^mult); immutable."""

    __slots__ = ("num", "factors")

    def __init__(self, num: LaurentPoly, factors: tuple = ()):
        self.num = num
        self.factors = factors if num.terms else ()

    # construction ----------------------------------------------------------
    @classmethod
    def const(cls, vt: VarTable, c=1) -> "RationalFn":
        return cls(LaurentPoly.const(vt, c))

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "RationalFn":
        return cls(p)

    @classmethod
    def make(cls, num: LaurentPoly, den: Iterable = ()) -> "RationalFn":
        """``num / prod(d)`` for d in den; each d a LaurentPoly or (LaurentPoly, mult)."""
        vt = num.vt
        coeff = Fraction(1)
        unit = [0] * vt.n
        acc: Counter = Counter()
        for d in den:
            poly, mult = d if isinstance(d, tuple) else (d, 1)
            c, u, keys = factorize(poly)
            coeff *= c ** mult
            unit = [x + mult * e for x, e in zip(unit, u)]
            for k in keys:
                acc[k] += mult
        return cls._with_unit(num, coeff, unit, acc)

    @classmethod
    def _with_unit(cls, num, coeff, unit, acc) -> "RationalFn":
        """num / (coeff * t^unit * prod acc)."""
        if coeff != 1 or any(unit):
            num = num * _unit_poly(num.vt, 1 / Fraction(coeff), [-e for e in unit])
        return cls(num, _canon(acc))

    @property
    def vt(self) -> VarTable:
        return self.num.vt

    @property
    def den(self) -> LaurentPoly:
        """Expanded denominator."""
        return _expand(self.vt, self.factors)

    def factor_list(self):
        return [(factor_poly(self.vt, k), m) for k, m in self.factors]

    # predicates ------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _lifted(self, target: tuple) -> LaurentPoly:
        if target == self.factors:
            return self.num
        return self.num * _expand(self.vt, _quotient(target, self.factors))

    def equals(self, other) -> bool:
        other = self._coerce(other)
        if self.factors == other.factors:
            return self.num == other.num
        target = _lcm(self.factors, other.factors)
        return self._lifted(target) == other._lifted(target)

    def __eq__(self, other):
        if isinstance(other, (RationalFn, LaurentPoly, int, Fraction)):
            return self.equals(other)
        return NotImplemented

    __hash__ = None  # equality is semantic; no canonical hash

    # arithmetic ------------------------------------------------------------
    def _coerce(self, other) -> "RationalFn":
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, LaurentPoly):
            return RationalFn(other)
        if isinstance(other, (int, Fraction)):
            return RationalFn.const(self.vt, other)
        raise TypeError(f"cannot combine RationalFn with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        if self.factors == other.factors:
            return RationalFn(self.num + other.num, self.factors)
        target = _lcm(self.factors, other.factors)
        return RationalFn(self._lifted(target) + other._lifted(target), target)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.factors)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalFn(self.num * other, self.factors)
        other = self._coerce(other)
        num = self.num * other.num
        if not num.terms:
            return RationalFn(num)
        acc = Counter(dict(self.factors))
        for k, m in other.factors:
            acc[k] += m
        return RationalFn(num, _canon(acc))

    __rmul__ = __mul__

    def inverse(self) -> "RationalFn":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFn.make(self.den, [self.num])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * self._coerce(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFn(self.num ** n, tuple((k, m * n) for k, m in self.factors))

    # structural maps ---------------------------------------------------------
    def map_exponents(self, fn, vt: VarTable | None = None) -> "RationalFn":
        """Apply the monomial homomorphism with (linear) exponent map ``fn``."""
        src = self.vt
        vt = vt or src
        num = self.num.map_exponents(fn, vt)
        coeff = Fraction(1)
        unit = [0] * vt.n
        acc: Counter = Counter()
        for key, mult in self.factors:
            if key[0] == "c":
                img = vt.reduce_exps(fn(key[1]))
                c, u, keys = transform_key(key, img)
            else:
                c, u, keys = factorize(factor_poly(src, key).map_exponents(fn, vt))
            if c == 0:
                raise ZeroDivisionError("denominator factor maps to zero")
            coeff *= Fraction(c) ** mult
            unit = [x + mult * e for x, e in zip(unit, u)]
            for k in keys:
                acc[k] += mult
        return RationalFn._with_unit(num, coeff, unit, acc)

    def psi(self, n: int) -> "RationalFn":
        """Adams operation: every exponent scaled by n >= 1."""
        if n == 1:
            return self
        if n < 1:
            raise ValueError("psi needs n >= 1")
        return self.map_exponents(lambda e: [n * x for x in e])

    def bar(self) -> "RationalFn":
        return self.map_exponents(lambda e: [-x for x in e])

    def substitute(self, mapping, vt: VarTable | None = None) -> "RationalFn":
        vt = vt or self.vt
        return self.map_exponents(_substitution(self.vt, mapping, vt), vt)

    def evaluate(self, point) -> int:
        p = point.p
        d = 1
        for k, m in self.factors:
            v = point.eval_poly(factor_poly(self.vt, k))
            if v == 0:
                raise EvaluationSingular("denominator factor vanishes at the sample point")
            d = d * pow(v, m, p) % p
        return point.eval_poly(self.num) * pow(d, -1, p) % p

    def __repr__(self):
        if not self.factors:
            return f"({self.num})"
        den = " * ".join(
            f"({factor_poly(self.vt, k)})" + (f"^{m}" if m != 1 else "") for k, m in self.factors
        )
        return f"({self.num}) / {den}"


def divide_cyclotomic(num: LaurentPoly, key):
    """Exact quotient num / Phi_d(x), or None when Phi_d(x) does not divide num.

    With x = t^a (a primitive), the exponent lattice splits into lines
    e0 + Z a, and divisibility reduces to univariate division on each line.
    """
    _, a, d = key
    vt = num.vt
    j = next(i for i, x in enumerate(a) if x)
    aj = a[j]
    step = vt.pack(a) - vt.bias_key  # packing is linear in the exponents
    shift, mask, bias = _W * j, _MASK, _BIAS
    phi = cyclotomic_coeffs(d)
    deg = len(phi) - 1
    lines: dict = {}
    for k, c in num.terms.items():
        s = (((k >> shift) & mask) - bias) // aj
        base = k - s * step
        line = lines.get(base)
        if line is None:
            lines[base] = {s: c}
        else:
            line[s] = c
    out = {}
    nz = [(t, c) for t, c in enumerate(phi) if c]
    for base, poly in lines.items():
        lo, hi = min(poly), max(poly)
        if hi - lo < deg:
            return None
        rem = [0] * (hi - lo + 1)
        for e, c in poly.items():
            rem[e - lo] = c
        for i in range(hi - lo - deg, -1, -1):
            q = rem[i + deg]  # Phi_d is monic
            if q:
                out[base + (lo + i) * step] = q
                for t, c in nz:
                    rem[i + t] -= q * c
        if any(rem[:deg]):
            return None
    return LaurentPoly._raw(vt, out)


def cancel(r: "RationalFn") -> "RationalFn":
    """Remove cyclotomic denominator factors that divide the numerator."""
    if not r.factors or not r.num.terms:
        return r
    num = r.num.reduced()
    left = []
    for key, m in r.factors:
        if key[0] == "c":
            while m:
                q = divide_cyclotomic(num, key)
                if q is None:
                    break
                num, m = q, m - 1
        if m:
            left.append((key, m))
    return RationalFn(num, tuple(left))


def sum_many(items: Iterable[RationalFn], vt: VarTable) -> RationalFn:
    """Exact sum.  Summands sharing a denominator are added first; the groups
    are then merged in order, cancelling cyclotomic factors after each merge
    so that spurious denominators do not inflate the running numerator."""
    items = [x for x in items if not x.is_zero()]
    if not items:
        return RationalFn.const(vt, 0)
    groups: dict = {}
    for x in items:
        groups[x.factors] = groups[x.factors] + x.num if x.factors in groups else x.num
    acc = None
    for facs, n in groups.items():
        term = cancel(RationalFn(n, facs))
        acc = term if acc is None else cancel(acc + term)
    return acc


def bracket_factorization(exps):
    """[m] = m^(1/2) - m^(-1/2) = coeff * t^unit * prod keys, for m = t^exps (nontrivial)."""
    c, unit, keys = binomial_factorization(exps)
    return c, tuple(u - e // 2 for u, e in zip(unit, exps)), keys
