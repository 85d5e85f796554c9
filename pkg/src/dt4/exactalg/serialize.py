"""Canonical JSON forms: sorted terms, "p/q" coefficient strings, quarter-unit exponents."""

from __future__ import annotations

import json
from fractions import Fraction

from .laurent import LATTICE, LaurentPoly
from .rational import RationalFn, factor_poly
from .series import Fp, TruncatedSeries


def coeff_str(c) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def poly_to_json(p: LaurentPoly) -> dict:
    return {
        "vars": list(p.vt.names),
        "lattice_denominator": LATTICE,
        "terms": [[list(e), coeff_str(c)] for e, c in p.reduced().items()],
    }


def rational_to_json(r: RationalFn) -> dict:
    return {
        "num": poly_to_json(r.num),
        "den": [[poly_to_json(f), m] for f, m in r.factor_list()],
    }


def coefficient_to_json(c):
    if isinstance(c, RationalFn):
        return rational_to_json(c)
    if isinstance(c, LaurentPoly):
        return poly_to_json(c)
    if isinstance(c, Fp):
        return {"mod": str(c.p), "value": str(c.v)}
    return coeff_str(c)


def series_to_json(s: TruncatedSeries) -> dict:
    return {
        "series_vars": list(s.names),
        "order": s.order,
        "lattice_denominator": LATTICE,
        "terms": [[list(a), coefficient_to_json(c)] for a, c in sorted(s.terms.items())],
    }


def dumps(obj) -> str:
    """Canonical text: sorted keys, compact separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


__all__ = ["coeff_str", "poly_to_json", "rational_to_json", "series_to_json", "coefficient_to_json", "dumps", "factor_poly"]
