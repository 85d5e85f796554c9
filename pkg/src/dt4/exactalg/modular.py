"""Randomized identity testing over large prime fields.

A sample point assigns every variable's quarter root an independent nonzero
field element, so exponents in quarter units become plain integer powers.
On tables carrying the Calabi-Yau relation the root of t4 is *derived* as
(r1 r2 r3)^-1, which makes evaluation independent of the representative.
"""

from __future__ import annotations

import random
from fractions import Fraction

from ..errors import EvaluationSingular

PRIMES = (2**62 - 57, 2**63 - 25)
"""Two primes above 2^61 (checked prime at test time)."""

_CY = ("t1", "t2", "t3", "t4")


class Point:
    """Values of quarter roots of named variables in F_p."""

    def __init__(self, p: int, roots: dict):
        self.p = p
        self.roots = dict(roots)
        if all(v in self.roots for v in _CY[:3]):
            r = self.roots
            self.roots["t4"] = pow(r["t1"] * r["t2"] * r["t3"] % p, -1, p)
        self._tables: dict = {}

    @classmethod
    def random(cls, names, p: int, rng: random.Random) -> "Point":
        return cls(p, {v: rng.randrange(1, p) for v in names if v != "t4"})

    def power(self, n: int) -> "Point":
        """The point P^n, i.e. every root raised to the n-th power."""
        base = {v: pow(x, n, self.p) for v, x in self.roots.items() if v != "t4"}
        return Point(self.p, base)

    def _roots_for(self, vt):
        tab = self._tables.get(vt.names)
        if tab is None:
            try:
                tab = tuple(self.roots[v] for v in vt.names)
            except KeyError as exc:
                raise KeyError(f"sample point has no value for {exc.args[0]}") from None
            self._tables[vt.names] = tab
        return tab

    def scalar(self, c) -> int:
        if isinstance(c, Fraction):
            return c.numerator * pow(c.denominator, -1, self.p) % self.p
        return c % self.p

    def eval_exps(self, vt, exps) -> int:
        p = self.p
        out = 1
        for r, e in zip(self._roots_for(vt), exps):
            if e:
                out = out * pow(r, e, p) % p
        return out

    def eval_poly(self, poly) -> int:
        vt, p = poly.vt, self.p
        roots = self._roots_for(vt)
        up = vt.unpack
        cache: dict = {}
        total = 0
        for k, c in poly.terms.items():
            val = self.scalar(c)
            for i, e in enumerate(up(k)):
                if e:
                    key = (i, e)
                    pw = cache.get(key)
                    if pw is None:
                        pw = cache[key] = pow(roots[i], e, p)
                    val = val * pw % p
            total += val
        return total % p


def sample_points(names, seed: int = 0, trials: int = 3, primes=PRIMES):
    """Deterministic stream of sample points: ``trials`` per prime, then extras.

    Callers hitting a singular point simply take the next one from the stream.
    """
    rng = random.Random(seed)
    names = tuple(names)
    while True:
        for p in primes:
            for _ in range(trials):
                yield Point.random(names, p, rng)


def evaluate(x, point) -> int:
    if hasattr(x, "evaluate"):
        return x.evaluate(point)
    return point.scalar(x)


def rf_equal(a, b, mode: str = "exact", seed: int = 0, trials: int = 3, primes=PRIMES) -> bool:
    """Equality of two rational functions / bracket products.

    ``exact`` cross-multiplies; ``modular`` evaluates at ``trials`` random
    points per prime, resampling (deterministically) at singular points.
    """
    if mode == "exact":
        ra = a.to_rational() if hasattr(a, "to_rational") else a
        rb = b.to_rational() if hasattr(b, "to_rational") else b
        return ra.equals(rb)
    if mode != "modular":
        raise ValueError(f"unknown equality mode {mode!r}")
    names = sorted(set(a.vt.names) | set(b.vt.names))
    stream = sample_points(names, seed, 1, primes)
    for p in primes:
        done = 0
        attempts = 0
        while done < trials:
            point = next(stream)
            if point.p != p:
                continue
            attempts += 1
            if attempts > 100 * trials:
                raise EvaluationSingular("could not find a nonsingular sample point")
            try:
                va, vb = evaluate(a, point), evaluate(b, point)
            except EvaluationSingular:
                continue
            if va != vb:
                return False
            done += 1
    return True
