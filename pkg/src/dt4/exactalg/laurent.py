"""Monomials and Laurent polynomials on the quarter-exponent lattice.

Exponents are stored as integers in units of 1/4.  Inside a polynomial every
exponent vector is packed into a single Python int (fixed-width biased
fields), so monomial multiplication is one integer addition.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from ..errors import LatticeViolation

LATTICE = 4
"""Exponents are stored multiplied by this denominator."""

_W = 20
_BIAS = 1 << (_W - 1)
_MASK = (1 << _W) - 1

COEFF_NAMES = ("t1", "t2", "t3", "t4", "y")
_CY_NAMES = ("t1", "t2", "t3", "t4")


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class VarTable:
    """Ordered variable names; the first ``n_coeff`` are coefficient variables.

    A table whose first four names are t1..t4 carries the Calabi-Yau relation
    t1 t2 t3 t4 = 1, realised by eliminating t4.
    """

    _cache: dict = {}

    def __new__(cls, names, n_coeff=None):
        names = tuple(names)
        n_coeff = len(names) if n_coeff is None else n_coeff
        key = (names, n_coeff)
        hit = cls._cache.get(key)
        if hit is not None:
            return hit
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self = super().__new__(cls)
        self.names = names
        self.n_coeff = n_coeff
        self.n = len(names)
        self.index = {v: i for i, v in enumerate(names)}
        self.bias_key = sum(_BIAS << (_W * i) for i in range(self.n))
        self.cy = names[:4] == _CY_NAMES
        self._cyvec = sum(1 << (_W * i) for i in range(4))
        cls._cache[key] = self
        return self

    def __reduce__(self):
        return (VarTable, (self.names, self.n_coeff))

    def __repr__(self):
        return f"VarTable({self.names!r}, n_coeff={self.n_coeff})"

    @property
    def series_names(self):
        return self.names[self.n_coeff:]

    def with_series(self, series_names) -> "VarTable":
        base = self.names[: self.n_coeff]
        return VarTable(base + tuple(series_names), n_coeff=len(base))

    @property
    def coeff_table(self) -> "VarTable":
        return VarTable(self.names[: self.n_coeff])

    # packing -----------------------------------------------------------
    def pack(self, exps) -> int:
        key = self.bias_key
        for i, e in enumerate(exps):
            if e:
                key += e << (_W * i)
        return key

    def unpack(self, key: int) -> tuple:
        return tuple(((key >> (_W * i)) & _MASK) - _BIAS for i in range(self.n))

    def reduce_key(self, key: int) -> int:
        if not self.cy:
            return key
        e4 = ((key >> (3 * _W)) & _MASK) - _BIAS
        return key - e4 * self._cyvec if e4 else key

    def reduce_exps(self, exps) -> tuple:
        if not self.cy or not exps[3]:
            return tuple(exps)
        e4 = exps[3]
        return (exps[0] - e4, exps[1] - e4, exps[2] - e4, 0) + tuple(exps[4:])

    # construction helpers ---------------------------------------------
    def mono(self, spec=None, *, reduce: bool = True, **powers) -> "Monomial":
        """Monomial from true exponents, e.g. ``vt.mono(t1=1, y=Fraction(1, 2))``
        or ``vt.mono("t1 t2^-1 y^1/2")``."""
        if spec is not None:
            powers = {**_parse_powers(spec), **powers}
        exps = [0] * self.n
        for name, p in powers.items():
            if name not in self.index:
                raise KeyError(f"unknown variable {name!r}")
            q = Fraction(p) * LATTICE
            if q.denominator != 1:
                raise LatticeViolation(f"exponent {p} of {name} is off the 1/{LATTICE} lattice")
            exps[self.index[name]] += int(q)
        return Monomial(self, exps, reduce=reduce)

    def one(self) -> "Monomial":
        return Monomial(self, (0,) * self.n)


_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^\(?(-?\d+(?:/\d+)?)\)?)?$")


def _parse_powers(spec: str) -> dict:
    out: dict = {}
    for tok in re.split(r"[\s*]+", spec.strip()):
        if not tok or tok == "1":
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"cannot parse monomial token {tok!r}")
        out[m.group(1)] = out.get(m.group(1), 0) + Fraction(m.group(2) or 1)
    return out


class Monomial:
    """Exponent vector (quarter units) over a VarTable."""

    __slots__ = ("vt", "exps")

    def __init__(self, vt: VarTable, exps, reduce: bool = True):
        exps = tuple(int(e) for e in exps)
        if len(exps) != vt.n:
            raise ValueError("exponent vector length does not match the variable table")
        self.vt = vt
        self.exps = vt.reduce_exps(exps) if reduce else exps

    @classmethod
    def from_key(cls, vt, key):
        m = object.__new__(cls)
        m.vt = vt
        m.exps = vt.unpack(key)
        return m

    @property
    def key(self) -> int:
        return self.vt.pack(self.exps)

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.vt, [a + b for a, b in zip(self.exps, other.exps)])

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.vt, [a - b for a, b in zip(self.exps, other.exps)])

    def __pow__(self, k) -> "Monomial":
        q = [Fraction(e) * Fraction(k) for e in self.exps]
        if any(x.denominator != 1 for x in q):
            raise LatticeViolation(f"{self} ** {k} leaves the 1/{LATTICE} lattice")
        return Monomial(self.vt, [int(x) for x in q])

    def inverse(self) -> "Monomial":
        return Monomial(self.vt, [-e for e in self.exps])

    def is_trivial(self) -> bool:
        return not any(self.exps)

    def series_part(self) -> tuple:
        return self.exps[self.vt.n_coeff:]

    def coeff_part(self) -> tuple:
        return self.exps[: self.vt.n_coeff]

    def series_degree(self) -> int:
        """Total series degree in quarter units."""
        return sum(self.exps[self.vt.n_coeff:])

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.vt is other.vt and self.exps == other.exps

    def __hash__(self):
        return hash((self.vt.names, self.exps))

    def __repr__(self):
        return format_monomial(self.vt, self.exps)


def format_monomial(vt: VarTable, exps) -> str:
    parts = []
    for name, e in zip(vt.names, exps):
        if not e:
            continue
        f = Fraction(e, LATTICE)
        parts.append(name if f == 1 else f"{name}^{f}")
    return "*".join(parts) if parts else "1"


class LaurentPoly:
    """Exact rational-coefficient Laurent polynomial; immutable by convention."""

    __slots__ = ("vt", "terms")

    def __init__(self, vt: VarTable, terms: Mapping[int, object] | None = None, reduce: bool = True):
        self.vt = vt
        if not terms:
            self.terms = {}
            return
        if reduce and vt.cy:
            out: dict = {}
            rk = vt.reduce_key
            for k, c in terms.items():
                k = rk(k)
                out[k] = out.get(k, 0) + c
            terms = out
        self.terms = {k: _norm(c) for k, c in terms.items() if c}

    # constructors --------------------------------------------------------
    @classmethod
    def _raw(cls, vt, terms):
        p = object.__new__(cls)
        p.vt = vt
        p.terms = terms
        return p

    @classmethod
    def const(cls, vt, c=1):
        return cls._raw(vt, {vt.bias_key: _norm(Fraction(c))} if c else {})

    @classmethod
    def monomial(cls, m: Monomial, c=1, reduce: bool = True):
        return cls(m.vt, {m.vt.pack(m.exps): c}, reduce=reduce)

    @classmethod
    def from_terms(cls, vt, pairs: Iterable, reduce: bool = True):
        d: dict = {}
        for m, c in pairs:
            k = vt.pack(m.exps if isinstance(m, Monomial) else m)
            d[k] = d.get(k, 0) + c
        return cls(vt, d, reduce=reduce)

    @classmethod
    def parse(cls, vt, text: str):
        """Parse sums like ``"t1 - 2*t2^-1 + 1/2*y^1/2"``; factors joined by ``*``."""
        pairs = []
        for chunk in re.split(r"(?<![\^(])(?=[+-])", text.replace(" ", "")):
            if not chunk or chunk in "+-":
                continue
            coeff = Fraction(-1 if chunk[0] == "-" else 1)
            mono_toks = []
            for tok in chunk.lstrip("+-").split("*"):
                if re.fullmatch(r"\d+(/\d+)?", tok):
                    coeff *= Fraction(tok)
                elif tok:
                    mono_toks.append(tok)
            pairs.append((vt.mono(" ".join(mono_toks)), coeff))
        return cls.from_terms(vt, pairs)

    # basic queries -------------------------------------------------------
    def is_zero(self) -> bool:
        if not self.terms:
            return True
        if self.vt.cy:
            return not self.reduced().terms
        return False

    def reduced(self) -> "LaurentPoly":
        if not self.vt.cy:
            return self
        rk = self.vt.reduce_key
        if all(rk(k) == k for k in self.terms):
            return self
        return LaurentPoly(self.vt, self.terms, reduce=True)

    def __len__(self):
        return len(self.terms)

    def items(self) -> Iterator[tuple]:
        """(exponent tuple, coefficient) pairs sorted lexicographically."""
        up = self.vt.unpack
        return iter(sorted((up(k), c) for k, c in self.terms.items()))

    def monomials(self):
        return [Monomial.from_key(self.vt, k) for k in self.terms]

    def coefficient(self, m: Monomial):
        return self.terms.get(self.vt.pack(m.exps), 0)

    def trivial_coefficient(self):
        return self.reduced().terms.get(self.vt.bias_key, 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def sort_key(self):
        return tuple(sorted(self.terms.items()))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.vt, other)
        if not isinstance(other, LaurentPoly) or other.vt is not self.vt:
            return NotImplemented
        return self.reduced().terms == other.reduced().terms

    def __hash__(self):
        return hash(frozenset(self.reduced().terms.items()))

    def __repr__(self):
        return format_poly(self)

    # ring operations -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.vt is not self.vt:
                raise ValueError(f"variable tables differ: {self.vt} vs {other.vt}")
            return other
        if isinstance(other, Monomial):
            return LaurentPoly.monomial(other)
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(self.vt, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = dict(self.terms)
        for k, c in other.terms.items():
            v = d.get(k, 0) + c
            if v:
                d[k] = _norm(v)
            else:
                d.pop(k, None)
        return LaurentPoly._raw(self.vt, d)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.vt, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPoly._raw(self.vt, {})
            return LaurentPoly._raw(self.vt, {k: _norm(c * other) for k, c in self.terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        bias = self.vt.bias_key
        d: dict = {}
        get = d.get
        for k2, c2 in b.items():
            off = k2 - bias
            for k1, c1 in a.items():
                k = k1 + off
                d[k] = get(k, 0) + c1 * c2
        return LaurentPoly._raw(self.vt, {k: _norm(c) for k, c in d.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if self.is_monomial():
                (k, c), = self.terms.items()
                m = Monomial.from_key(self.vt, k).inverse()
                return LaurentPoly.monomial(m, Fraction(1) / c) ** (-n)
            raise ValueError("negative power of a non-monomial Laurent polynomial")
        result = LaurentPoly.const(self.vt, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # structural maps -----------------------------------------------------
    def map_exponents(self, fn, vt: VarTable | None = None) -> "LaurentPoly":
        vt = vt or self.vt
        up, pk = self.vt.unpack, vt.pack
        d: dict = {}
        for k, c in self.terms.items():
            nk = pk(fn(up(k)))
            d[nk] = d.get(nk, 0) + c
        return LaurentPoly(vt, d)

    def psi(self, n: int) -> "LaurentPoly":
        """Adams operation: every exponent multiplied by n."""
        if n == 1:
            return self
        return self.map_exponents(lambda e: [n * x for x in e])

    def bar(self) -> "LaurentPoly":
        """Duality involution inverting every variable."""
        return self.map_exponents(lambda e: [-x for x in e])

    def cy_reduce(self) -> "LaurentPoly":
        return self.reduced()

    def substitute(self, mapping: Mapping[str, Monomial], vt: VarTable | None = None) -> "LaurentPoly":
        return self.map_exponents(_substitution(self.vt, mapping, vt or self.vt), vt or self.vt)

    def evaluate(self, point) -> int:
        return point.eval_poly(self)


def _substitution(src: VarTable, mapping: Mapping[str, Monomial], dst: VarTable):
    """Exponent map of the homomorphism sending variable v to mapping[v]."""
    images = []
    for name in src.names:
        if name in mapping:
            img = mapping[name]
            if img.vt is not dst:
                raise ValueError(f"image of {name} lives in {img.vt}, expected {dst}")
            images.append(img.exps)
        elif name in dst.index:
            e = [0] * dst.n
            e[dst.index[name]] = LATTICE
            images.append(tuple(e))
        else:
            images.append(None)

    def fn(exps):
        out = [0] * dst.n
        for e, img in zip(exps, images):
            if not e:
                continue
            if img is None:
                raise KeyError("variable without an image in the target table")
            for j, x in enumerate(img):
                if x:
                    v = e * x
                    if v % LATTICE:
                        raise LatticeViolation("substitution leaves the 1/4 lattice")
                    out[j] += v // LATTICE
        return out

    return fn


def format_poly(p: LaurentPoly) -> str:
    if not p.terms:
        return "0"
    out = []
    for exps, c in p.items():
        m = format_monomial(p.vt, exps)
        if m == "1":
            s = str(c)
        elif c == 1:
            s = m
        elif c == -1:
            s = "-" + m
        else:
            s = f"{c}*{m}"
        out.append(s)
    return " + ".join(out).replace("+ -", "- ")


COEFF = VarTable(COEFF_NAMES)
