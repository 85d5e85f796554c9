"""Exact K-theoretic DT4 partition functions of C^4 and abelian CY4 orbifolds."""

__version__ = "0.1.0"
