"""Localization engine: vertex classes, G-fixed parts, fixed-point contributions,
partition functions and their cohomological / insertion-free / y=t4 images."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ContributionError,
    PoleAtReduction,
    RankMismatch,
    TrivialWeightInDenominator,
    ZeroLinearForm,
)
from .exactalg.brackets import BracketProduct, bracket_class
from .exactalg.laurent import COEFF, LATTICE, LaurentPoly, VarTable
from .exactalg.rational import RationalFn, sum_many
from .exactalg.series import Fp, TruncatedSeries
from .partitions import (
    GroupAction,
    SignRule,
    SolidPartition,
    character,
    color_counts,
    enumerate_solid_partitions,
)

COH = VarTable(("l1", "l2", "l3", "m"))
"""Cohomological parameters lambda_1..3 and m (lambda_4 = -l1-l2-l3)."""

_PBAR123 = (
    (LaurentPoly.const(COEFF, 1) - LaurentPoly.monomial(COEFF.mono("t1^-1")))
    * (LaurentPoly.const(COEFF, 1) - LaurentPoly.monomial(COEFF.mono("t2^-1")))
    * (LaurentPoly.const(COEFF, 1) - LaurentPoly.monomial(COEFF.mono("t3^-1")))
)
_Y = LaurentPoly.monomial(COEFF.mono("y"))


# K-classes -------------------------------------------------------------------

def vertex_class(pi: SolidPartition, twist: str | None = "nekrasov") -> LaurentPoly:
    """v = Z - P123bar Z Zbar, and with the Nekrasov twist additionally - Zbar y."""
    Z = character(pi)
    Zb = Z.bar()
    v = Z - _PBAR123 * Z * Zb
    if twist in (None, "none"):
        return v.reduced()
    if twist != "nekrasov":
        raise ValueError(f"unknown twist {twist!r}")
    return (v - Zb * _Y).reduced()


def tangent_class(pi: SolidPartition) -> LaurentPoly:
    """Full T^vir = Z + Zbar/(t1t2t3t4) - P1234 Z Zbar/(t1t2t3t4) (CY-reduced)."""
    Z = character(pi)
    Zb = Z.bar()
    one = LaurentPoly.const(COEFF, 1)
    P = one
    for v in ("t1", "t2", "t3", "t4"):
        P = P * (one - LaurentPoly.monomial(COEFF.mono(v)))
    inv = LaurentPoly.monomial(COEFF.mono("t1^-1 t2^-1 t3^-1 t4^-1", reduce=False), reduce=False)
    return (Z + Zb * inv - P * Z * Zb * inv).reduced()


def _is_g_trivial(exps, action: GroupAction | None) -> bool:
    if action is None or not action.orders:
        return True
    ints = [e // LATTICE for e in exps[:4]]
    return not any(action.exponent_weight(ints))


def g_fixed_part(V: LaurentPoly, action: GroupAction | None) -> LaurentPoly:
    """Keep monomials of trivial G-weight (y is G-trivial)."""
    if action is None or action.is_trivial:
        return V
    V = V.reduced()
    up = V.vt.unpack
    return LaurentPoly._raw(V.vt, {k: c for k, c in V.terms.items() if _is_g_trivial(up(k), action)})


# contributions ---------------------------------------------------------------

@dataclass(frozen=True)
class Contribution:
    sign: int
    value: BracketProduct
    partition: SolidPartition
    profile: tuple

    def signed(self) -> BracketProduct:
        return self.value if self.sign > 0 else -self.value

    def to_rational(self) -> RationalFn:
        return self.signed().to_rational()


def _profile(pi, action):
    if action is None or not action.orders:
        return (len(pi),)
    return color_counts(pi, action)


def contribution(pi: SolidPartition, action: GroupAction | None = None,
                 sign_rule: SignRule | str = "default") -> Contribution:
    """(-1)^sigma [-v~^G] at the fixed point pi."""
    rule = SignRule(sign_rule) if isinstance(sign_rule, str) else sign_rule
    V = g_fixed_part(vertex_class(pi, "nekrasov"), action)
    try:
        value = bracket_class(V, negate=True)
    except TrivialWeightInDenominator as exc:
        raise ContributionError(pi, exc) from exc
    sign = -1 if rule.exponent(pi, action) % 2 else 1
    return Contribution(sign, value, pi, _profile(pi, action))


def partitions_up_to(order: int, cache=None) -> list:
    out = []
    for n in range(order + 1):
        out.extend(enumerate_solid_partitions(n, cache))
    return out


def _shards(n_items: int, n_shards: int) -> list:
    n_shards = max(1, min(n_shards, n_items or 1))
    size, extra = divmod(n_items, n_shards)
    out, start = [], 0
    for s in range(n_shards):
        end = start + size + (1 if s < extra else 0)
        out.append((start, end))
        start = end
    return out


def _work(task):
    """Evaluate one shard: exact rational sums, or values at sample points."""
    action, rule, lines, mode, points = task
    buckets: dict = {}
    for line in lines:
        pi = SolidPartition.from_line(line)
        c = contribution(pi, action, rule)
        if c.value.is_zero:
            continue
        if mode == "exact":
            buckets.setdefault(c.profile, []).append(c.to_rational())
        else:
            vals = [c.signed().evaluate(pt) for pt in points]
            acc = buckets.get(c.profile)
            buckets[c.profile] = vals if acc is None else [
                (a + b) % pt.p for a, b, pt in zip(acc, vals, points)
            ]
    if mode == "exact":
        return {k: sum_many(v, COEFF) for k, v in buckets.items()}
    return buckets


def _series_names(action):
    return ("q",) if action is None else action.series_names


def dt_partition_function(action: GroupAction | None, order: int, sign_rule="default",
                          mode: str = "exact", points=None, workers: int = 1, cache=None):
    """Sum of signed contributions placed at their colour profiles.

    mode="exact" returns a TruncatedSeries of RationalFns; mode="modular"
    returns one Fp-valued series per sample point in ``points``.
    The result does not depend on ``workers``: shards are index ranges of
    the canonical partition list, merged in shard order.
    """
    rule = SignRule(sign_rule) if isinstance(sign_rule, str) else sign_rule
    if action is not None and not action.orders:
        action = None
    parts = partitions_up_to(order, cache)
    lines = [p.to_line() for p in parts]
    shards = _shards(len(lines), workers)
    pts = list(points or [])
    tasks = [(action, rule, lines[a:b], mode, pts) for a, b in shards]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_work, tasks))
    else:
        results = [_work(t) for t in tasks]
    names = _series_names(action)
    merged: dict = {}
    for res in results:  # canonical shard order
        for k, v in res.items():
            merged.setdefault(k, []).append(v)
    if mode == "exact":
        zero = RationalFn.const(COEFF, 0)
        terms = {k: sum_many(v, COEFF) for k, v in merged.items()}
        return TruncatedSeries(names, order, terms, zero)
    out = []
    for i, pt in enumerate(pts):
        terms = {k: Fp(sum(x[i] for x in v), pt.p) for k, v in merged.items()}
        out.append(TruncatedSeries(names, order, terms, Fp(0, pt.p)))
    return out


# cohomological images ----------------------------------------------------------

def linear_form(exps) -> LaurentPoly:
    """<lambda, mu> + e m for a monomial t^mu y^e (quarter-unit exponents)."""
    e1, e2, e3, e4, ey = (Fraction(x, LATTICE) for x in exps[:5])
    coeffs = {"l1": e1 - e4, "l2": e2 - e4, "l3": e3 - e4, "m": ey}
    return LaurentPoly.from_terms(COH, [(COH.mono(**{v: 1}), c) for v, c in coeffs.items() if c])


def cohomological_map(c: Contribution | BracketProduct) -> RationalFn:
    """Leading b-coefficient under t_i = e^(b l_i), y = e^(b m): [t^mu y^e] -> <l,mu> + e m."""
    bp = c.signed() if isinstance(c, Contribution) else c
    if bp.is_zero:
        return RationalFn.const(COH, 0)
    if bp.rank():
        raise RankMismatch(f"bracket product has rank {bp.rank()}, expected 0")
    num = LaurentPoly.const(COH, bp.sign)
    for e, k in bp.num:
        num = num * linear_form(e) ** k
    den = []
    for e, k in bp.den:
        f = linear_form(e)
        if f.is_zero():
            raise ZeroLinearForm(f"weight {e} linearizes to 0")
        den.append((f, k))
    return RationalFn.make(num, den)


def _b_expand(poly: LaurentPoly, upto: int) -> list:
    """Coefficients A_j (j <= upto) of poly(t = e^{b l}, y = e^{b m}) in powers of b."""
    out = [LaurentPoly.const(COH, 0) for _ in range(upto + 1)]
    up = poly.vt.unpack
    for k, c in poly.terms.items():
        L = linear_form(up(k))
        power = LaurentPoly.const(COH, c)
        for j in range(upto + 1):
            out[j] = out[j] + power
            power = power * L * Fraction(1, j + 1)
    return out


def _series_mul(a: list, b: list, upto: int) -> list:
    out = [LaurentPoly.const(COH, 0) for _ in range(upto + 1)]
    for i, x in enumerate(a):
        if not x.terms:
            continue
        for j, y in enumerate(b[: upto + 1 - i]):
            if y.terms:
                out[i + j] = out[i + j] + x * y
    return out


def b_series_check(bp: BracketProduct, extra: int = 1) -> tuple:
    """Expand num and den of ``bp`` in b to ``extra`` orders past the leading one.

    Returns (leading ratio, list of higher-order ratio coefficients) as COH
    rational functions; the limit theorem predicts the leading ratio is the
    cohomological map and, for these classes, the first correction vanishes.
    """
    from .exactalg.brackets import bracket
    from .exactalg.laurent import Monomial

    n_num = sum(k for _, k in bp.num)
    n_den = sum(k for _, k in bp.den)
    top = max(n_num, n_den) + extra

    def product(items, lead_sign_pre):
        acc = _b_expand(lead_sign_pre, top)
        for e, k in items:
            s = _b_expand(bracket(Monomial(bp.vt, e, reduce=False)), top)
            for _ in range(k):
                acc = _series_mul(acc, s, top)
        return acc

    pre = LaurentPoly(bp.vt, {bp.vt.pack(bp.prefactor): bp.sign})
    A = product(bp.num, pre)
    B = product(bp.den, LaurentPoly.const(bp.vt, 1))
    va = next(i for i, x in enumerate(A) if not x.is_zero())
    vb = next(i for i, x in enumerate(B) if not x.is_zero())
    if va != vb:
        raise RankMismatch(f"b-valuations differ: {va} vs {vb}")
    lead = RationalFn.make(A[va], [B[vb]])
    # first correction of A/B: (A1 B0 - A0 B1) / B0^2
    corr = []
    for j in range(1, extra + 1):
        if va + j > top:
            break
        a1, b1 = A[va + j], B[vb + j]
        corr.append(RationalFn.make(a1 * B[vb] - A[va] * b1, [(B[vb], 2)]))
    return lead, corr


def insertion_free_contribution(pi: SolidPartition, action: GroupAction | None = None,
                                sign_rule="default") -> RationalFn:
    """sign * prod over weights mu of v^G of <l,mu>^(-c_mu)."""
    rule = SignRule(sign_rule) if isinstance(sign_rule, str) else sign_rule
    V = g_fixed_part(vertex_class(pi, None), action).reduced()
    sign = -1 if rule.exponent(pi, action) % 2 else 1
    num = LaurentPoly.const(COH, sign)
    den = []
    for exps, c in V.items():
        if not any(exps):
            if c > 0:
                raise TrivialWeightInDenominator(f"trivial weight in v for {pi}")
            return RationalFn.const(COH, 0)
        f = linear_form(exps)
        if f.is_zero():
            raise ZeroLinearForm(f"weight {exps} linearizes to 0")
        if c < 0:
            num = num * f ** (-c)
        else:
            den.append((f, c))
    return RationalFn.make(num, den)


# dimensional reduction -----------------------------------------------------------

@dataclass(frozen=True)
class Zero:
    """The y=t4 specialization annihilates this contribution."""

    partition: SolidPartition

    def __bool__(self):
        return False


def dimensional_reduce(pi: SolidPartition, action: GroupAction | None = None,
                       sign_rule="default"):
    """Specialize y -> t4 in v~^G; Zero if a [1] lands in the numerator of [-v~].

    The sign is (-1)^(sigma + |pi|_R0): the 3-fold series uses (-1)^|pi|_R0
    relative to the 4-fold one, undone by the q0 -> -q0 substitution.
    """
    rule = SignRule(sign_rule) if isinstance(sign_rule, str) else sign_rule
    V = g_fixed_part(vertex_class(pi, "nekrasov"), action)
    V = V.substitute({"y": COEFF.mono("t4")}).reduced()
    c1 = V.trivial_coefficient()
    if c1 < 0:
        return Zero(pi)
    if c1 > 0:
        raise PoleAtReduction(f"{pi}: trivial coefficient {c1} after y=t4")
    value = bracket_class(V, negate=True)
    prof = _profile(pi, action)
    exponent = rule.exponent(pi, action) + prof[0] if action is not None and action.orders else \
        rule.exponent(pi, action) + len(pi)
    return Contribution(-1 if exponent % 2 else 1, value, pi, prof)
