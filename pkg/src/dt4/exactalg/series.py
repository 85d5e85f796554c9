"""Truncated multivariate power series and the plethystic exponential.

Series are graded by total degree in the series variables.  Coefficients are
any ring elements supporting ``+``, ``*``, scalar multiplication by Fractions
and ``is_zero()``: exact :class:`RationalFn` or :class:`Fp` values at a
sample point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import NonExpandable, NonzeroConstantTerm, OrderMismatch
from .brackets import BracketProduct, bracket
from .laurent import LATTICE, LaurentPoly, Monomial, VarTable
from .rational import RationalFn, sum_many


class Fp:
    """Element of a prime field."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _val(self, o):
        if isinstance(o, Fp):
            return o.v
        if isinstance(o, Fraction):
            return o.numerator * pow(o.denominator, -1, self.p)
        return o

    def __add__(self, o):
        return Fp(self.v + self._val(o), self.p)

    __radd__ = __add__

    def __sub__(self, o):
        return Fp(self.v - self._val(o), self.p)

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __mul__(self, o):
        return Fp(self.v * self._val(o), self.p)

    __rmul__ = __mul__

    def __truediv__(self, o):
        return Fp(self.v * pow(self._val(o), -1, self.p), self.p)

    def is_zero(self):
        return self.v == 0

    def equals(self, o):
        return self.v == self._val(o) % self.p

    def __eq__(self, o):
        if isinstance(o, (Fp, int, Fraction)):
            return self.equals(o)
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"{self.v} (mod {self.p})"


def _is_zero(c) -> bool:
    return c.is_zero() if hasattr(c, "is_zero") else c == 0


class TruncatedSeries:
    """Power series in ``names`` truncated above total degree ``order``.

    ``terms`` maps integer exponent tuples to coefficients; ``zero`` is the
    coefficient ring's zero (needed to build ``1`` and to report missing terms).
    """

    __slots__ = ("names", "order", "terms", "zero")

    def __init__(self, names, order: int, terms: Mapping, zero):
        self.names = tuple(names)
        self.order = order
        self.zero = zero
        self.terms = {
            a: c for a, c in terms.items() if sum(a) <= order and not _is_zero(c)
        }

    @classmethod
    def one(cls, names, order, zero):
        names = tuple(names)
        return cls(names, order, {(0,) * len(names): zero + 1}, zero)

    def coeff(self, exps) -> object:
        return self.terms.get(tuple(exps), self.zero)

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def _check(self, other: "TruncatedSeries"):
        if other.order != self.order:
            raise OrderMismatch(f"orders {self.order} and {other.order} differ")
        if other.names != self.names:
            raise ValueError(f"series variables {self.names} vs {other.names}")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        d = dict(self.terms)
        for a, c in other.terms.items():
            d[a] = d[a] + c if a in d else c
        return TruncatedSeries(self.names, self.order, d, self.zero)

    def __neg__(self):
        return TruncatedSeries(self.names, self.order, {a: -c for a, c in self.terms.items()}, self.zero)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "TruncatedSeries":
        return TruncatedSeries(self.names, self.order, {a: c * s for a, c in self.terms.items()}, self.zero)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check(other)
        D = self.order
        buckets: dict = {}
        for a, c in self.terms.items():
            da = sum(a)
            for b, e in other.terms.items():
                if da + sum(b) > D:
                    continue
                k = tuple(x + y for x, y in zip(a, b))
                buckets.setdefault(k, []).append(c * e)
        return TruncatedSeries(self.names, D, {k: _total(v) for k, v in buckets.items()}, self.zero)

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.names, order, self.terms, self.zero)

    def map_coeffs(self, fn, zero=None) -> "TruncatedSeries":
        zero = self.zero if zero is None else zero
        return TruncatedSeries(self.names, self.order, {a: fn(c) for a, c in self.terms.items()}, zero)

    def psi(self, n: int) -> "TruncatedSeries":
        return TruncatedSeries(
            self.names, self.order,
            {tuple(n * x for x in a): c.psi(n) for a, c in self.terms.items() if n * sum(a) <= self.order},
            self.zero,
        )

    def specialize_y(self, m: Monomial) -> "TruncatedSeries":
        """Substitute y -> m in every coefficient."""
        return self.map_coeffs(lambda c: c.substitute({"y": m}))

    def substitute_series(self, signs: Mapping[str, int]) -> "TruncatedSeries":
        """Flip series variables q -> -q for names with sign -1."""
        flips = [signs.get(n, 1) for n in self.names]
        out = {}
        for a, c in self.terms.items():
            s = 1
            for f, e in zip(flips, a):
                if f < 0 and e % 2:
                    s = -s
            out[a] = c if s > 0 else -c
        return TruncatedSeries(self.names, self.order, out, self.zero)

    def evaluate(self, point) -> "TruncatedSeries":
        return TruncatedSeries(
            self.names, self.order,
            {a: Fp(c.evaluate(point), point.p) for a, c in self.terms.items()},
            Fp(0, point.p),
        )

    def exp(self) -> "TruncatedSeries":
        """Ordinary exponential via |a| E_a = sum_b |b| L_b E_{a-b}."""
        zero_exp = (0,) * len(self.names)
        if zero_exp in self.terms:
            raise NonzeroConstantTerm("exp of a series with a nonzero constant term")
        L = sorted(self.terms.items(), key=lambda kv: sum(kv[0]))
        E: dict = {zero_exp: self.zero + 1}
        for a in _exponents(len(self.names), self.order):
            if not any(a):
                continue
            parts = []
            for b, lb in L:
                rest = tuple(x - y for x, y in zip(a, b))
                if min(rest) < 0:
                    continue
                er = E.get(rest)
                if er is None:
                    continue
                parts.append(lb * er * sum(b))
            if parts:
                val = _total(parts) * Fraction(1, sum(a))
                if not _is_zero(val):
                    E[a] = val
        return TruncatedSeries(self.names, self.order, E, self.zero)

    def equals(self, other: "TruncatedSeries") -> bool:
        self._check(other)
        return all(_equal(self.coeff(a), other.coeff(a)) for a in set(self.terms) | set(other.terms))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for a, c in self.items():
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, a) if e
            ) or "1"
            parts.append(f"({c})*{mono}")
        return " + ".join(parts) + f" + O({self.order + 1})"


def _equal(a, b) -> bool:
    return a.equals(b) if hasattr(a, "equals") else a == b


def _total(vals: list):
    if vals and isinstance(vals[0], RationalFn):
        return sum_many(vals, vals[0].vt)
    out = vals[0]
    for v in vals[1:]:
        out = out + v
    return out


def _exponents(nvars: int, order: int):
    """All non-negative exponent vectors of total degree <= order, graded."""
    def rec(n, budget):
        if n == 0:
            yield ()
            return
        for e in range(budget + 1):
            for rest in rec(n - 1, budget - e):
                yield (e,) + rest

    return sorted(rec(nvars, order), key=lambda a: (sum(a), a))


# q-expansion ----------------------------------------------------------------

def _truncate_poly(p: LaurentPoly, bound: int) -> LaurentPoly:
    """Drop terms whose series degree (quarter units) exceeds ``bound``."""
    vt = p.vt
    nc = vt.n_coeff
    out = {}
    for k, c in p.terms.items():
        if sum(vt.unpack(k)[nc:]) <= bound:
            out[k] = c
    return LaurentPoly._raw(vt, out)


def _min_degree(p: LaurentPoly) -> int:
    vt = p.vt
    return min(sum(vt.unpack(k)[vt.n_coeff:]) for k in p.terms)


def q_expand(bp: BracketProduct, order: int, coeff_vt: VarTable | None = None) -> TruncatedSeries:
    """Expand a bracket product carrying series variables to a truncated series.

    Denominator brackets [m] with series degree d are rewritten as
    -m^(1/2) / (1 - m) (d > 0) or m^(-1/2) / (1 - m^-1) (d < 0) and expanded
    geometrically; brackets without series variables stay in the coefficients.
    """
    vt = bp.vt
    nc = vt.n_coeff
    coeff_vt = coeff_vt or vt.coeff_table
    names = vt.series_names
    zero = RationalFn.const(coeff_vt, 0)
    if bp.is_zero:
        return TruncatedSeries(names, order, {}, zero)
    D = order * LATTICE

    factors: list[tuple[LaurentPoly, int]] = []  # (poly, min series degree)
    geo: list[tuple[Monomial, int]] = []          # ratio u of 1/(1-u), with multiplicity
    coeff_den = []
    pre = LaurentPoly(vt, {vt.pack(bp.prefactor): bp.sign}, reduce=False)
    factors.append((pre, _min_degree(pre)))
    for e, c in bp.num:
        m = Monomial(vt, e, reduce=False)
        b = bracket(m)
        for _ in range(c):
            factors.append((b, _min_degree(b)))
    for e, c in bp.den:
        m = Monomial(vt, e, reduce=False)
        d = m.series_degree()
        if d == 0:
            if any(m.series_part()):
                raise NonExpandable(f"denominator [{m}] has series degree 0 but carries series variables")
            coeff_den.append((bracket(Monomial(coeff_vt, m.coeff_part(), reduce=False)), c))
            continue
        if d < 0:
            m = m.inverse()
        h = Monomial(vt, [x // 2 for x in m.exps], reduce=False)
        lead = LaurentPoly.monomial(h, -1 if d > 0 else 1, reduce=False)
        for _ in range(c):
            factors.append((lead, _min_degree(lead)))
            geo.append((m, m.series_degree()))

    total_min = sum(md for _, md in factors)
    # geometric factors start at degree 0
    acc = LaurentPoly.const(vt, 1)
    remaining = total_min
    for poly, md in factors:
        remaining -= md
        acc = _truncate_poly(acc * poly, D - remaining)
    for u, du in geo:
        bound = D - _min_degree(acc) if acc.terms else 0
        K = bound // du
        series = LaurentPoly.from_terms(vt, [(u ** k, 1) for k in range(K + 1)], reduce=False)
        acc = _truncate_poly(acc * series, D)

    buckets: dict = {}
    for k, c in acc.terms.items():
        exps = vt.unpack(k)
        s = exps[nc:]
        buckets.setdefault(s, {})
        ck = coeff_vt.pack(exps[:nc])
        buckets[s][ck] = buckets[s].get(ck, 0) + c
    out = {}
    for s, terms in buckets.items():
        num = LaurentPoly(coeff_vt, terms)
        if num.is_zero():
            continue
        if any(x % LATTICE for x in s) or min(s) < 0:
            raise NonExpandable(f"series exponent {tuple(Fraction(x, LATTICE) for x in s)} is not a non-negative integer")
        out[tuple(x // LATTICE for x in s)] = RationalFn.make(num, coeff_den)
    return TruncatedSeries(names, order, out, zero)


def expand_argument(terms: Iterable[BracketProduct], order: int, coeff_vt: VarTable | None = None) -> TruncatedSeries:
    """q-expand a formal sum of bracket products."""
    terms = list(terms)
    vt = terms[0].vt
    coeff_vt = coeff_vt or vt.coeff_table
    buckets: dict = {}
    for bp in terms:
        for a, c in q_expand(bp, order, coeff_vt).terms.items():
            buckets.setdefault(a, []).append(c)
    zero = RationalFn.const(coeff_vt, 0)
    return TruncatedSeries(vt.series_names, order, {a: sum_many(v, coeff_vt) for a, v in buckets.items()}, zero)


def plethystic_exp(f: TruncatedSeries, order: int | None = None, point=None) -> TruncatedSeries:
    """Exp(f) = exp(sum_n psi_n(f)/n), truncated.

    With ``point`` the result is computed in F_p: psi_n(f) at P is f at P^n.
    """
    order = f.order if order is None else order
    f = f.truncate(order)
    zero_exp = (0,) * len(f.names)
    if zero_exp in f.terms:
        raise NonzeroConstantTerm("plethystic exponential needs zero constant term")
    if point is None:
        L = TruncatedSeries(f.names, order, {}, f.zero)
        for n in range(1, order + 1):
            L = L + f.psi(n).scale(Fraction(1, n))
        return L.exp()
    p = point.p
    acc: dict = {}
    powers = {}
    for a, c in f.terms.items():
        for n in range(1, order // max(sum(a), 1) + 1):
            pt = powers.get(n) or powers.setdefault(n, point.power(n))
            k = tuple(n * x for x in a)
            v = Fp(c.evaluate(pt), p) * Fraction(1, n)
            acc[k] = acc[k] + v if k in acc else v
    return TruncatedSeries(f.names, order, acc, Fp(0, p)).exp()
