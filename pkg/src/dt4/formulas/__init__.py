"""Closed formulas, root-system data and the conjecture verifiers."""

from .age import AgeReport, GroupElementSpec, age, is_age_at_most_one
from .arguments import (
    ExpArgument,
    build_orbifold_argument,
    colour_argument,
    degree_zero_argument,
    nekrasov_F,
    nekrasov_F3,
)
from .gv import (
    RootSystemData,
    gv_invariant,
    gv_lookup,
    pt_argument,
    pt_consistency,
    pt_irreducible_series,
    root_system,
)
from .limits import (
    cohomological_check,
    dimred_check,
    insertion_free_check,
    limits_suite,
    macmahon,
)
from .report import Check, Report
from .verify import verify_crc, verify_orbifold_conjecture

__all__ = [
    "AgeReport", "GroupElementSpec", "age", "is_age_at_most_one",
    "ExpArgument", "build_orbifold_argument", "colour_argument", "degree_zero_argument",
    "nekrasov_F", "nekrasov_F3",
    "RootSystemData", "gv_invariant", "gv_lookup", "pt_argument", "pt_consistency", "pt_irreducible_series",
    "root_system",
    "cohomological_check", "dimred_check", "insertion_free_check", "limits_suite", "macmahon",
    "Check", "Report",
    "verify_crc", "verify_orbifold_conjecture",
]
