"""The bracket calculus [x] = x^(1/2) - x^(-1/2) and canonical bracket products."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import EvaluationSingular, LatticeViolation, TrivialWeightInDenominator
from .laurent import LaurentPoly, Monomial, VarTable, _substitution
from .rational import RationalFn, bracket_factorization, factor_poly


def _half(exps) -> tuple:
    if any(e % 2 for e in exps):
        raise LatticeViolation("square root of the bracket argument leaves the 1/4 lattice")
    return tuple(e // 2 for e in exps)


def bracket(m: Monomial) -> LaurentPoly:
    """m^(1/2) - m^(-1/2) as a Laurent polynomial (zero for the trivial monomial)."""
    vt = m.vt
    h = _half(m.exps)
    if not any(h):
        return LaurentPoly.const(vt, 0)
    return LaurentPoly(vt, {vt.pack(h): 1, vt.pack([-e for e in h]): -1})


def canonical(exps) -> tuple[tuple, int]:
    """Orient a bracket argument so its first nonzero exponent is positive.

    Returns (exps, sign) with [m] = sign * [canonical m].
    """
    for e in exps:
        if e > 0:
            return tuple(exps), 1
        if e < 0:
            return tuple(-x for x in exps), -1
    return tuple(exps), 1


def _counter_add(d: dict, key, n: int):
    v = d.get(key, 0) + n
    if v:
        d[key] = v
    else:
        d.pop(key, None)


class BracketProduct:
    """sign * prefactor * prod [a]^n_a / prod [b]^n_b with canonical arguments.

    ``num`` and ``den`` are sorted tuples of (exponent tuple, multiplicity).
    A zero value is stored with sign 0.
    """

    __slots__ = ("vt", "sign", "prefactor", "num", "den")

    def __init__(self, vt: VarTable, sign: int, prefactor=None, num=(), den=()):
        self.vt = vt
        self.sign = sign
        self.prefactor = tuple(prefactor) if prefactor is not None else (0,) * vt.n
        self.num = tuple(num) if sign else ()
        self.den = tuple(den) if sign else ()

    # construction ----------------------------------------------------------
    @classmethod
    def one(cls, vt: VarTable) -> "BracketProduct":
        return cls(vt, 1)

    @classmethod
    def zero(cls, vt: VarTable) -> "BracketProduct":
        return cls(vt, 0)

    @classmethod
    def build(cls, vt: VarTable, sign=1, prefactor: Monomial | None = None,
              num: Iterable = (), den: Iterable = ()) -> "BracketProduct":
        """Canonicalize: reduce, orient, cancel.  Entries are Monomials or (Monomial, mult)."""
        counts: dict = {}
        for items, s in ((num, 1), (den, -1)):
            for it in items:
                m, k = it if isinstance(it, tuple) else (it, 1)
                exps = vt.reduce_exps(m.exps if isinstance(m, Monomial) else m)
                _half(exps)
                exps, flip = canonical(exps)
                if flip < 0 and k % 2:
                    sign = -sign
                _counter_add(counts, exps, s * k)
        trivial = (0,) * vt.n
        if trivial in counts:
            if counts[trivial] < 0:
                raise TrivialWeightInDenominator("trivial weight in a bracket denominator")
            return cls.zero(vt)
        pre = vt.reduce_exps(prefactor.exps) if prefactor is not None else trivial
        if not sign:
            return cls.zero(vt)
        n = tuple(sorted((e, c) for e, c in counts.items() if c > 0))
        d = tuple(sorted((e, -c) for e, c in counts.items() if c < 0))
        return cls(vt, sign, pre, n, d)

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def rank(self) -> int:
        """Net bracket count (numerator minus denominator)."""
        return sum(c for _, c in self.num) - sum(c for _, c in self.den)

    def monomials(self):
        return ([(Monomial(self.vt, e, reduce=False), c) for e, c in self.num],
                [(Monomial(self.vt, e, reduce=False), c) for e, c in self.den])

    # algebra ---------------------------------------------------------------
    def __mul__(self, other: "BracketProduct") -> "BracketProduct":
        if isinstance(other, int):
            return BracketProduct(self.vt, self.sign * other, self.prefactor, self.num, self.den) \
                if other in (1, -1) else NotImplemented
        if self.sign == 0 or other.sign == 0:
            return BracketProduct.zero(self.vt)
        counts: dict = {}
        for e, c in self.num + other.num:
            _counter_add(counts, e, c)
        for e, c in self.den + other.den:
            _counter_add(counts, e, -c)
        pre = tuple(a + b for a, b in zip(self.prefactor, other.prefactor))
        return BracketProduct(
            self.vt, self.sign * other.sign, pre,
            sorted((e, c) for e, c in counts.items() if c > 0),
            sorted((e, -c) for e, c in counts.items() if c < 0),
        )

    def __neg__(self):
        return BracketProduct(self.vt, -self.sign, self.prefactor, self.num, self.den)

    def inverse(self) -> "BracketProduct":
        if not self.sign:
            raise ZeroDivisionError("inverse of a zero bracket product")
        return BracketProduct(self.vt, self.sign, tuple(-e for e in self.prefactor), self.den, self.num)

    def _remap(self, fn, vt: VarTable) -> "BracketProduct":
        if not self.sign:
            return BracketProduct.zero(vt)
        return BracketProduct.build(
            vt, self.sign, Monomial(vt, fn(self.prefactor)),
            [(Monomial(vt, fn(e), reduce=False), c) for e, c in self.num],
            [(Monomial(vt, fn(e), reduce=False), c) for e, c in self.den],
        )

    def psi(self, n: int) -> "BracketProduct":
        """Adams operation: [m] -> [m^n]."""
        return self._remap(lambda e: [n * x for x in e], self.vt)

    def substitute(self, mapping: Mapping[str, Monomial], vt: VarTable | None = None) -> "BracketProduct":
        vt = vt or self.vt
        return self._remap(_substitution(self.vt, mapping, vt), vt)

    def to_rational(self, vt: VarTable | None = None) -> RationalFn:
        """Exact value; common cyclotomic factors of numerator and denominator cancel."""
        vt = vt or self.vt
        if not self.sign:
            return RationalFn.const(vt, 0)
        coeff = Fraction(self.sign)
        unit = list(self.prefactor)
        keys: Counter = Counter()
        for items, s in ((self.num, 1), (self.den, -1)):
            for e, k in items:
                c, u, fs = bracket_factorization(e)
                coeff *= Fraction(c) ** (s * k)
                unit = [x + s * k * y for x, y in zip(unit, u)]
                for f in fs:
                    keys[f] += s * k
        num = LaurentPoly(vt, {vt.pack(unit): coeff})
        for f, k in sorted(keys.items()):
            if k > 0:
                num = num * factor_poly(vt, f) ** k
        return RationalFn(num, tuple(sorted((f, -k) for f, k in keys.items() if k < 0)))

    def evaluate(self, point) -> int:
        if not self.sign:
            return 0
        p = point.p
        vt = self.vt

        def br(e):
            h = _half(e)
            return (point.eval_exps(vt, h) - point.eval_exps(vt, [-x for x in h])) % p

        val = self.sign * point.eval_exps(vt, self.prefactor) % p
        for e, c in self.num:
            val = val * pow(br(e), c, p) % p
        d = 1
        for e, c in self.den:
            d = d * pow(br(e), c, p) % p
        if d == 0:
            raise EvaluationSingular("bracket denominator vanishes at the sample point")
        return val * pow(d, -1, p) % p

    def key(self):
        return (self.sign, self.prefactor, self.num, self.den)

    def __eq__(self, other):
        return isinstance(other, BracketProduct) and self.vt is other.vt and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if not self.sign:
            return "0"
        from .laurent import format_monomial

        def fmt(items):
            out = []
            for e, c in items:
                s = f"[{format_monomial(self.vt, e)}]"
                out.append(s + (f"^{c}" if c != 1 else ""))
            return "".join(out) or "1"

        pre = format_monomial(self.vt, self.prefactor)
        head = ("-" if self.sign < 0 else "") + ("" if pre == "1" else pre + "*")
        return f"{head}{fmt(self.num)}" + (f"/({fmt(self.den)})" if self.den else "")


def bracket_class(V: LaurentPoly, negate: bool = False) -> BracketProduct:
    """[V] = prod [m]^c_m for V = sum c_m m (integer coefficients).

    With ``negate`` this computes [-V].  A trivial monomial landing in the
    numerator gives 0; one in the denominator raises TrivialWeightInDenominator.
    """
    vt = V.vt
    num, den = [], []
    for exps, c in V.reduced().items():
        c = -c if negate else c
        if Fraction(c).denominator != 1:
            raise ValueError("bracket_class needs integer coefficients")
        (num if c > 0 else den).append((Monomial(vt, exps, reduce=False), abs(int(c))))
    return BracketProduct.build(vt, 1, None, num, den)
