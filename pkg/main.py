#!/usr/bin/env python3
"""
haarint - exact Haar integrals over U(n)

Evaluates monomial integrals over the unitary group U(n) exactly, as rational
functions of the dimension n, and checks them against Monte-Carlo sampling.
"""

import sys

from haarint.cli import main

if __name__ == "__main__":
    sys.exit(main())
