"""Exact Haar-measure integration over the unitary group U(n).

This package evaluates monomial integrals of U(n) matrix elements and their
conjugates as exact rational functions of the dimension n, using the
group-theoretical character formula, the closed-form fan, Z, stack and
double-fan families, and a Monte-Carlo cross-check against Haar-random
unitaries.
"""

__version__ = "0.1.0"
