"""Specializations of the orbifold series: dimensional reduction (y = t4),
the cohomological limit (MacMahon products) and the insertion-free limit."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import PoleAtReduction
from ..exactalg.laurent import COEFF, LATTICE, LaurentPoly
from ..exactalg.rational import RationalFn, factor_poly, sum_many
from ..exactalg.series import TruncatedSeries
from ..vertex import (
    COH,
    Zero,
    b_series_check,
    cohomological_map,
    contribution,
    dimensional_reduce,
    insertion_free_contribution,
    partitions_up_to,
)
from .arguments import build_orbifold_argument, group_of, qprod
from .report import Report, stopwatch


def _coh(spec) -> RationalFn:
    return RationalFn(LaurentPoly.parse(COH, spec))


L1, L2, L3, M = (_coh(v) for v in ("l1", "l2", "l3", "m"))
L4 = _coh("-l1 - l2 - l3")


@dataclass(frozen=True)
class MacMahonFactor:
    """M(Q, q)^E with Q and q given as exponent vectors over the series names."""

    exponent: RationalFn
    Q: tuple
    q: tuple


def _names(action):
    return action.series_names


def _action(group):
    action = group_of(group)
    return None if action.name == "trivial" else action


def _vec(names, spec: str) -> tuple:
    if not spec:
        return (0,) * len(names)
    out = [0] * len(names)
    for tok in spec.split():
        neg = tok.endswith("^-1")
        out[names.index(tok[:-3] if neg else tok)] += -1 if neg else 1
    return tuple(out)


def _inv(v):
    return tuple(-x for x in v)


def cohomological_factors(group) -> list:
    """The MacMahon factors of the cohomological closed form (each M~ split as M(Q) M(Q^-1))."""
    action = group_of(group)
    names = _names(action)
    qall = tuple(1 for _ in names)
    one = (0,) * len(names)
    pre = -M / L4
    out = []
    if action.name == "z2z2":
        ratios = [L1 / L2, L2 / L1, L1 / L3, L3 / L1, L2 / L3, L3 / L2]
        e0 = RationalFn.const(COH, -1)
        for x in ratios:
            e0 = e0 + x
        out.append(MacMahonFactor(pre * e0, one, qall))
        for spec in ("q10", "q01", "q11", "q10 q01 q11"):
            v = _vec(names, spec)
            out += [MacMahonFactor(pre, v, qall), MacMahonFactor(pre, _inv(v), qall)]
        two = RationalFn.const(COH, 2)
        for spec, e in (("q01 q10", (L1 + L2 - L3) / (two * L3)),
                        ("q10 q11", (L1 - L2 + L3) / (two * L2)),
                        ("q01 q11", (-L1 + L2 + L3) / (two * L1))):
            v = _vec(names, spec)
            out += [MacMahonFactor(pre * e, v, qall), MacMahonFactor(pre * e, _inv(v), qall)]
        return out
    r = action.orders[0] if action.orders else 1
    rr = RationalFn.const(COH, r)
    s12 = L1 + L2
    e0 = rr * s12 / L3 + s12 * (s12 + L3) / (rr * L1 * L2)
    out.append(MacMahonFactor(pre * e0, one, qall))
    for i in range(1, r):
        for j in range(i, r):
            v = _vec(names, qprod(names, i, j))
            e = pre * s12 / L3
            out += [MacMahonFactor(e, v, qall), MacMahonFactor(e, _inv(v), qall)]
    return out


def macmahon_log(factors, names, order: int) -> TruncatedSeries:
    """log prod M(Q,q)^E = sum_{k,n>=1} (n/k) E Q^k q^{nk}, truncated at total degree ``order``."""
    zero = RationalFn.const(COH, 0)
    buckets: dict = {}
    for f in factors:
        for k in range(1, order + 1):
            for n in range(1, order + 1):
                exps = tuple(k * a + n * k * b for a, b in zip(f.Q, f.q))
                if min(exps) < 0:
                    raise ValueError("MacMahon factor with a negative series exponent")
                if sum(exps) > order or not any(exps):
                    if sum(exps) > order:
                        break
                    continue
                buckets.setdefault(exps, []).append(f.exponent * Fraction(n, k))
    return TruncatedSeries(names, order, {a: sum_many(v, COH) for a, v in buckets.items()}, zero)


def macmahon_series(factors, names, order: int) -> TruncatedSeries:
    return macmahon_log(factors, names, order).exp()


def macmahon(order: int) -> TruncatedSeries:
    """M(Q, q) = prod (1 - Q q^n)^-n in the two series variables (Q, q), rational coefficients."""
    f = MacMahonFactor(RationalFn.const(COH, 1), (1, 0), (0, 1))
    return macmahon_series([f], ("Q", "q"), order)


def insertion_free_closed_form(group, order: int) -> TruncatedSeries:
    """exp of sum (E/m) Q q_(.) -- the m -> infinity limit of each M(Q,q)^E with q~ = m q."""
    action = group_of(group)
    names = _names(action)
    zero = RationalFn.const(COH, 0)
    buckets: dict = {}
    for f in cohomological_factors(action):
        exps = tuple(a + b for a, b in zip(f.Q, f.q))
        if sum(exps) <= order:
            buckets.setdefault(exps, []).append(f.exponent / M)
    log = TruncatedSeries(names, order, {a: sum_many(v, COH) for a, v in buckets.items()}, zero)
    return log.exp()


# m-degree bookkeeping ----------------------------------------------------------------

_MI = COH.index["m"]


def _m_split(p: LaurentPoly):
    """(top m-degree, coefficient of m^top as a COH polynomial)."""
    top, lead = None, {}
    for k, c in p.terms.items():
        e = COH.unpack(k)
        d = e[_MI] // LATTICE
        rest = list(e)
        rest[_MI] = 0
        if top is None or d > top:
            top, lead = d, {}
        if d == top:
            key = COH.pack(rest)
            lead[key] = lead.get(key, 0) + c
    return top, LaurentPoly(COH, lead)


def m_degree(r: RationalFn):
    """(degree in m, leading m-coefficient) of a COH rational function; (None, 0) for zero."""
    if r.is_zero():
        return None, RationalFn.const(COH, 0)
    deg, lead = _m_split(r.num)
    den = []
    for key, k in r.factors:
        d, c = _m_split(factor_poly(COH, key))
        deg -= d * k
        den.append((c, k))
    return deg, RationalFn.make(lead, den)


# the suite ----------------------------------------------------------------------------

def _series(names, order, buckets, zero) -> TruncatedSeries:
    return TruncatedSeries(names, order, {a: sum_many(v, zero.vt) for a, v in buckets.items()}, zero)


def _compare(report, name, a, b):
    keys = sorted(set(a.terms) | set(b.terms), key=lambda k: (sum(k), k))
    for k in keys:
        with stopwatch() as t:
            ok = a.coeff(k).equals(b.coeff(k))
        report.add(name, k, ok, t[0])


def dimred_check(group, D: int, sign_rule="default", report: Report | None = None) -> Report:
    """y = t4: boxes with l > 0 give Zero; the rest, with q0 -> -q0, match Exp(F^3D)."""
    action = group_of(group)
    act = _action(action)
    report = report or Report("dimred", {"group": action.name, "order": D})
    names = _names(action)
    buckets: dict = {}
    for pi in partitions_up_to(D):
        lifted = any(b[3] > 0 for b in pi)
        with stopwatch() as t:
            try:
                c = dimensional_reduce(pi, act, sign_rule)
                status, detail = True, ""
            except PoleAtReduction as exc:
                c, status, detail = None, False, str(exc)
        if lifted:
            report.add("vanishes", None, status and isinstance(c, Zero), t[0], pi.to_line())
        elif not status:
            report.add("no pole", None, False, t[0], detail)
        if c:
            buckets.setdefault(c.profile, []).append(c.to_rational())
    zero = RationalFn.const(COEFF, 0)
    three = _series(names, D, buckets, zero).substitute_series({names[0]: -1})
    closed = build_orbifold_argument(action, three_d=True).exp(D)
    _compare(report, "dimred coefficient", three, closed)
    return report


def cohomological_check(group, D: int, sign_rule="default", report: Report | None = None,
                        bseries_order: int | None = None) -> Report:
    """b-series leading term vs the cohomological map per fixed point, and the assembled series
    vs the MacMahon closed form."""
    action = group_of(group)
    act = _action(action)
    report = report or Report("cohomological", {"group": action.name, "order": D})
    names = _names(action)
    bmax = D if bseries_order is None else bseries_order
    buckets: dict = {}
    for pi in partitions_up_to(D):
        c = contribution(pi, act, sign_rule)
        if c.value.is_zero:
            continue
        coh = cohomological_map(c)
        if len(pi) <= bmax:
            with stopwatch() as t:
                lead, _ = b_series_check(c.signed())
                ok = lead.equals(coh)
            report.add("b-series lead", c.profile, ok, t[0], pi.to_line())
        buckets.setdefault(c.profile, []).append(coh)
    zero = RationalFn.const(COH, 0)
    series = _series(names, D, buckets, zero)
    closed = macmahon_series(cohomological_factors(action), names, D)
    _compare(report, "cohomological coefficient", series, closed)
    return report


def insertion_free_check(group, D: int, sign_rule="default", report: Report | None = None) -> Report:
    """deg_m(coh(pi)) = |pi|_R0 with leading coefficient free(pi); free series vs its closed form."""
    action = group_of(group)
    act = _action(action)
    report = report or Report("insertion-free", {"group": action.name, "order": D})
    names = _names(action)
    buckets: dict = {}
    for pi in partitions_up_to(D):
        c = contribution(pi, act, sign_rule)
        free = insertion_free_contribution(pi, act, sign_rule)
        r0 = c.profile[0]
        with stopwatch() as t:
            if c.value.is_zero:
                ok = free.is_zero()
            else:
                deg, lead = m_degree(cohomological_map(c))
                fdeg, _ = m_degree(free)
                ok = deg == r0 and fdeg == 0 and lead.equals(free)
        report.add("m-degree", c.profile, ok, t[0], pi.to_line())
        if not free.is_zero():
            buckets.setdefault(c.profile, []).append(free)
    zero = RationalFn.const(COH, 0)
    series = _series(names, D, buckets, zero)
    closed = insertion_free_closed_form(action, D)
    _compare(report, "insertion-free coefficient", series, closed)
    return report


def limits_suite(group, D: int, sign_rule="default", parts=("dimred", "cohomological", "insertion-free")) -> Report:
    action = group_of(group)
    report = Report("limits", {"group": action.name, "order": D, "parts": list(parts)})
    runners = {"dimred": dimred_check, "cohomological": cohomological_check,
               "insertion-free": insertion_free_check}
    for p in parts:
        runners[p](action, D, sign_rule, report=report)
    return report
