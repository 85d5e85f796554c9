"""dt4 command-line front end.

Every command writes one canonical JSON document (sorted keys, compact).
Exit codes: 0 success, 1 verification failure, 2 usage error, 3 internal error.
"""

from __future__ import annotations

import argparse
import functools
import subprocess
import sys
import time
from pathlib import Path

from . import __version__
from .errors import ContributionError, DT4Error, IdentityFailed, NotSU4, UnsupportedGroup
from .exactalg.serialize import dumps, series_to_json
from .partitions import GroupAction, SignRule, color_counts, enumerate_solid_partitions

SCHEMA = 1
EXACT_MAX_ORDER = 3  # "auto" mode switches to modular arithmetic above this order


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@functools.lru_cache(maxsize=1)
def build_id() -> str:
    """git-describe of the source tree, or the package version outside a checkout."""
    here = Path(__file__).resolve().parent
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=here, capture_output=True, text=True, timeout=10,
        )
        if out.returncode == 0 and out.stdout.strip():
            return out.stdout.strip()
    except (OSError, subprocess.SubprocessError):
        pass
    return f"v{__version__}"


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dt4", description="K-theoretic DT invariants of C^4 and its abelian CY orbifolds.")
    p.add_argument("--workers", type=int, default=1, help="worker processes (never changes the output)")
    p.add_argument("--cache", default=None, help="partition cache directory (default: $DT4_CACHE)")
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p.add_argument("--seed", type=int, default=0, help="seed for modular sample points")
    p.add_argument("--no-timings", action="store_true", help="omit wall times (byte-reproducible output)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, order=True):
        sp.add_argument("--group", default="trivial", help="trivial | zr:R | z2z2 | z3age2 | custom:orders=..;W=..")
        if order:
            sp.add_argument("--order", type=int, required=True)
            sp.add_argument("--mode", choices=("exact", "modular", "auto"), default="auto")
            sp.add_argument("--sign-rule", default="default")

    common(sub.add_parser("compute", help="the DT partition function to a total order"))
    v = sub.add_parser("verify", help="check a conjecture or identity")
    v.add_argument("--conjecture", choices=("orbifold", "pt", "crc", "limits"), required=True)
    common(v)
    lim = sub.add_parser("limits", help="dimensional reduction, cohomological and insertion-free limits")
    common(lim)
    lim.add_argument("--parts", default="dimred,cohomological,insertion-free")
    part = sub.add_parser("partitions", help="count solid partitions")
    part.add_argument("--count", type=int, required=True, metavar="N")
    part.add_argument("--group", default=None)
    common(sub.add_parser("age", help="ages of the group elements"), order=False)
    return p


def _mode(args) -> str:
    if args.mode == "auto":
        return "exact" if args.order <= EXACT_MAX_ORDER else "modular"
    return args.mode


def _group(spec: str) -> GroupAction:
    return GroupAction.parse(spec)


def cmd_compute(args, timings):
    from .formulas.verify import modular_points
    from .vertex import dt_partition_function

    action = _group(args.group)
    act = None if action.name == "trivial" else action
    mode = _mode(args)
    t = time.perf_counter()
    if mode == "exact":
        series = dt_partition_function(act, args.order, args.sign_rule, workers=args.workers, cache=args.cache)
        result = {"series": series_to_json(series)}
    else:
        pts = modular_points(args.seed, 3)
        out = dt_partition_function(act, args.order, args.sign_rule, mode="modular", points=pts,
                                    workers=args.workers, cache=args.cache)
        result = {"points": [
            {"prime": str(pt.p), "roots": {k: str(v) for k, v in sorted(pt.roots.items())},
             "series": series_to_json(s)} for pt, s in zip(pts, out)]}
    timings["compute_ms"] = (time.perf_counter() - t) * 1000
    result.update({"group": action.name, "order": args.order, "sign_rule": args.sign_rule, "mode": mode})
    return result, True


def cmd_verify(args, timings):
    from .formulas import gv, limits, verify

    t = time.perf_counter()
    if args.conjecture == "orbifold":
        rep = verify.verify_orbifold_conjecture(args.group, args.order, _mode(args), args.sign_rule,
                                                seed=args.seed, workers=args.workers, cache=args.cache)
    elif args.conjecture == "crc":
        rep = verify.verify_crc(args.group, seed=args.seed)
    elif args.conjecture == "pt":
        rep = gv.pt_consistency(args.group, args.order)
    else:
        rep = limits.limits_suite(args.group, args.order, args.sign_rule)
    timings["verify_ms"] = (time.perf_counter() - t) * 1000
    return rep, rep.passed


def cmd_limits(args, timings):
    from .formulas.limits import limits_suite

    parts = tuple(x.strip() for x in args.parts.split(",") if x.strip())
    t = time.perf_counter()
    rep = limits_suite(args.group, args.order, args.sign_rule, parts=parts)
    timings["limits_ms"] = (time.perf_counter() - t) * 1000
    return rep, rep.passed


def cmd_partitions(args, timings):
    if args.count < 0:
        raise UsageError("--count must be non-negative")
    t = time.perf_counter()
    parts = list(enumerate_solid_partitions(args.count, args.cache))
    result = {"n": args.count, "count": len(parts)}
    if args.group:
        action = _group(args.group)
        prof: dict = {}
        for pi in parts:
            k = ",".join(map(str, color_counts(pi, action)))
            prof[k] = prof.get(k, 0) + 1
        result["group"] = action.name
        result["series_vars"] = list(action.series_names)
        result["profiles"] = prof
    timings["partitions_ms"] = (time.perf_counter() - t) * 1000
    return result, True


def cmd_age(args, timings):
    from .formulas.age import is_age_at_most_one

    action = _group(args.group)
    rep = is_age_at_most_one(action)
    return {"group": action.name, **rep.to_json()}, True


COMMANDS = {
    "compute": cmd_compute,
    "verify": cmd_verify,
    "limits": cmd_limits,
    "partitions": cmd_partitions,
    "age": cmd_age,
}


def _config(args) -> dict:
    cfg = {k.replace("_", "-"): v for k, v in sorted(vars(args).items())
           if k not in ("no_timings", "out", "workers", "cache")}
    return cfg


def _emit(doc: dict, out: str | None):
    text = dumps(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if args.workers < 1:
            raise UsageError("--workers must be at least 1")
        if getattr(args, "sign_rule", None) is not None:
            try:
                SignRule(args.sign_rule)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        if getattr(args, "order", None) is not None and args.order < 0:
            raise UsageError("--order must be non-negative")
    except UsageError as exc:
        sys.stderr.write(parser.format_usage() + f"dt4: error: {exc}\n")
        return 2

    timed = not args.no_timings
    timings: dict = {}
    doc = {"dt4-schema": SCHEMA, "build": build_id(), "command": args.command, "config": _config(args)}
    try:
        result, ok = COMMANDS[args.command](args, timings)
    except (UnsupportedGroup, NotSU4) as exc:
        sys.stderr.write(parser.format_usage() + f"dt4: error: {exc}\n")
        return 2
    except DT4Error as exc:
        doc["error"] = {"type": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ContributionError):
            doc["error"]["partition"] = exc.partition.to_line()
        if isinstance(exc, IdentityFailed) and exc.exponent is not None:
            doc["error"]["exponent"] = list(exc.exponent)
        _emit(doc, args.out)
        return 3
    except Exception as exc:  # noqa: BLE001 -- surfaced as exit code 3
        doc["error"] = {"type": type(exc).__name__, "message": str(exc)}
        _emit(doc, args.out)
        return 3
    if hasattr(result, "to_json"):
        doc["result"] = result.to_json(timings=timed)
        if not timed:
            doc["result"].get("data", {}).pop("ms_dt", None)
            doc["result"].get("data", {}).pop("ms_closed_form", None)
    else:
        doc["result"] = result
    doc["status"] = "pass" if ok else "fail"
    if timed:
        doc["timings"] = {k: round(v, 3) for k, v in sorted(timings.items())}
    _emit(doc, args.out)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
