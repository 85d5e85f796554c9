"""Conjecture verifiers: computed vertex series against closed-form plethystic
exponentials, and the crepant-resolution identity between closed forms."""

from __future__ import annotations

import itertools

from ..errors import EvaluationSingular, NoSignVectorWorks
from ..exactalg.modular import PRIMES, sample_points
from ..exactalg.series import TruncatedSeries
from ..partitions import GroupAction
from ..vertex import dt_partition_function
from .arguments import ExpArgument, build_orbifold_argument, degree_zero_argument, group_of
from .gv import pt_argument, root_system, series_table
from .report import Report, stopwatch


def compare_series(report: Report, a: TruncatedSeries, b: TruncatedSeries, name: str = "coefficient"):
    """One check per exponent in the union of supports, in (degree, lex) order."""
    keys = sorted(set(a.terms) | set(b.terms), key=lambda k: (sum(k), k))
    for k in keys:
        with stopwatch() as t:
            x, y = a.coeff(k), b.coeff(k)
            ok = x.equals(y) if hasattr(x, "equals") else x == y
        report.add(name, k, ok, t[0])
    return report


def coeff_names(action: GroupAction | None) -> tuple:
    return ("t1", "t2", "t3", "y")


def modular_points(seed: int, trials: int, primes=PRIMES) -> list:
    """``trials`` points for each prime, drawn from the deterministic stream."""
    stream = sample_points(coeff_names(None), seed, 1, primes)
    out = []
    for p in primes:
        got = 0
        while got < trials:
            pt = next(stream)
            if pt.p == p:
                out.append(pt)
                got += 1
    return out


def _modular_pair(action, arg: ExpArgument, D, sign_rule, seed, trials, workers, cache, primes):
    """(dt series list, exp series list) at nonsingular points; singular points are replaced."""
    stream = sample_points(coeff_names(action), seed, 1, primes)
    dts, exps = [], []
    expansion = arg.expand(D)
    from ..exactalg.series import plethystic_exp
    for p in primes:
        got = attempts = 0
        while got < trials:
            pt = next(stream)
            if pt.p != p:
                continue
            attempts += 1
            if attempts > 50 * trials:
                raise EvaluationSingular("no nonsingular sample point found")
            try:
                dt = dt_partition_function(action, D, sign_rule, mode="modular", points=[pt],
                                           workers=workers, cache=cache)[0]
                ex = plethystic_exp(expansion, D, point=pt)
            except EvaluationSingular:
                continue
            dts.append(dt)
            exps.append(ex)
            got += 1
    return dts, exps


def verify_orbifold_conjecture(group, D: int, mode: str = "exact", sign_rule="default",
                               seed: int = 0, trials: int = 3, workers: int = 1, cache=None,
                               primes=PRIMES) -> Report:
    """DT partition function of [C^4/G] against Exp(F_G + F^col_G) to total degree D."""
    action = group_of(group)
    report = Report("orbifold", {"group": action.name, "order": D, "mode": mode,
                                 "sign_rule": str(getattr(sign_rule, "spec", sign_rule)),
                                 "seed": seed, "trials": trials})
    arg = build_orbifold_argument(action)
    act = None if action.name == "trivial" else action
    if mode == "exact":
        with stopwatch() as t_dt:
            dt = dt_partition_function(act, D, sign_rule, workers=workers, cache=cache)
        with stopwatch() as t_ex:
            ex = arg.exp(D)
        compare_series(report, dt, ex)
    elif mode == "modular":
        with stopwatch() as t_dt:
            dts, exps = _modular_pair(act, arg, D, sign_rule, seed, trials, workers, cache, primes)
        t_ex = [0.0]
        keys = set()
        for a, b in zip(dts, exps):
            keys |= set(a.terms) | set(b.terms)
        for k in sorted(keys, key=lambda k: (sum(k), k)):
            ok = all(a.coeff(k) == b.coeff(k) for a, b in zip(dts, exps))
            report.add("coefficient", k, ok)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    report.data["ms_dt"] = round(t_dt[0], 3)
    report.data["ms_closed_form"] = round(t_ex[0], 3)
    return report


# crepant resolution correspondence -------------------------------------------------

def crc_parts(group):
    """(orbifold side, degree-0 side, per-class Q and Q^-1 stable-pair terms) in one table."""
    action = group_of(group)
    data = root_system(action)
    vt = series_table(action.series_names)
    lhs = build_orbifold_argument(action)
    base = degree_zero_argument(action, vt=vt)
    pos = pt_argument(action, vt=vt).terms
    neg = pt_argument(action, invert=True, vt=vt).terms
    classes = [ExpArgument(vt, [a, b]) for a, b in zip(pos, neg)]
    return data, lhs, base, classes


def crc_difference(lhs: ExpArgument, base: ExpArgument, classes, signs) -> ExpArgument:
    rhs = base
    for s, c in zip(signs, classes):
        rhs = rhs + (c if s > 0 else -c)
    return lhs + (-rhs)


def verify_crc(group, seed: int = 0) -> Report:
    """Exact rational check of Exp-argument identity LHS = F_deg0(q) + PT(Q) + PT(Q^-1).

    The sign vector is searched over all 2^k choices using modular evaluation,
    then confirmed exactly; every single-sign flip is checked to break it.
    """
    action = group_of(group)
    data, lhs, base, classes = crc_parts(action)
    report = Report("crc", {"group": action.name, "seed": seed})
    report.data["classes"] = [c.name for c in data.positive_classes]
    names = ("t1", "t2", "t3", "y") + action.series_names
    pts = []
    for pt in sample_points(names, seed, 2):
        try:
            vals = (lhs.evaluate(pt) - base.evaluate(pt)) % pt.p, [c.evaluate(pt) for c in classes]
        except EvaluationSingular:
            continue
        pts.append((pt.p, vals))
        if len(pts) == 4:
            break
    k = len(classes)
    candidates = []
    for signs in itertools.product((1, -1), repeat=k):
        if all((a - sum(s * u for s, u in zip(signs, us))) % p == 0 for p, (a, us) in pts):
            candidates.append(list(signs))
    with stopwatch() as t:
        found = None
        for signs in candidates:
            if crc_difference(lhs, base, classes, signs).to_rational().is_zero():
                found = signs
                break
    if found is None:
        report.add("identity", None, False, t[0], "no sign vector satisfies the identity")
        raise NoSignVectorWorks(f"{action.name}: no sign vector makes the CRC identity hold")
    report.add("identity", None, True, t[0])
    report.sign_vector = found
    for i in range(k):
        flipped = list(found)
        flipped[i] = -flipped[i]
        with stopwatch() as t:
            broken = not crc_difference(lhs, base, classes, flipped).to_rational().is_zero()
        report.add(f"flip {data.positive_classes[i].name}", None, broken, t[0])
    return report
