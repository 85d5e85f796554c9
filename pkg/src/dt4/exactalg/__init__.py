"""Exact arithmetic: lattice Laurent polynomials, rational functions, brackets, series."""

from .brackets import BracketProduct, bracket, bracket_class, canonical
from .laurent import COEFF, LATTICE, LaurentPoly, Monomial, VarTable
from .modular import PRIMES, Point, rf_equal, sample_points
from .rational import RationalFn, sum_many
from .series import Fp, TruncatedSeries, expand_argument, plethystic_exp, q_expand

__all__ = [
    "BracketProduct", "bracket", "bracket_class", "canonical",
    "COEFF", "LATTICE", "LaurentPoly", "Monomial", "VarTable",
    "PRIMES", "Point", "rf_equal", "sample_points",
    "RationalFn", "sum_many",
    "Fp", "TruncatedSeries", "expand_argument", "plethystic_exp", "q_expand",
]
