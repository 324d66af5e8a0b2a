"""Exact polynomials and rational functions in one indeterminate n.

Every integral value in haarint is a RationalFunction: a ratio of integer
polynomials kept fully reduced, with the joint integer content divided out
and a positive leading coefficient on the denominator. Two values are equal
exactly when their stored coefficient tuples are equal, so tables can be
compared literally.

Polynomials are dense tuples of Python integers, lowest power first. Degrees
stay small (a few times the integral degree), so gcds are computed with a
primitive pseudo-remainder sequence over the integers.
"""

import operator
from fractions import Fraction
from functools import reduce
from math import gcd, isqrt
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from haarint.errors import DivisionByZero, PoleAtValue

Scalar = Union[int, Fraction]


class Polynomial:
    """A polynomial in n with arbitrary-precision integer coefficients.

    The zero polynomial has the empty coefficient tuple; otherwise the last
    stored coefficient is nonzero.
    """

    __slots__ = ("_coefficients",)

    def __init__(self, coefficients: Iterable[int] = ()):
        coeffs = [operator.index(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self._coefficients = tuple(coeffs)

    @property
    def coefficients(self) -> Tuple[int, ...]:
        return self._coefficients

    @property
    def degree(self) -> int:
        """Degree of the polynomial, -1 for zero."""
        return len(self._coefficients) - 1

    @property
    def leading(self) -> int:
        return self._coefficients[-1] if self._coefficients else 0

    @property
    def is_zero(self) -> bool:
        return not self._coefficients

    def __bool__(self) -> bool:
        return bool(self._coefficients)

    def content(self) -> int:
        """Nonnegative gcd of the coefficients (0 for the zero polynomial)."""
        return reduce(gcd, self._coefficients, 0)

    def divide_scalar(self, k: int) -> "Polynomial":
        """Exact division of every coefficient by the integer k."""
        if any(c % k for c in self._coefficients):
            raise ArithmeticError(f"{self} is not divisible by {k}")
        return Polynomial(c // k for c in self._coefficients)

    def primitive_part(self) -> "Polynomial":
        """The polynomial divided by its content, leading coefficient positive."""
        if self.is_zero:
            return self
        c = self.content()
        if self.leading < 0:
            c = -c
        return self if c == 1 else self.divide_scalar(c)

    def __call__(self, x: Scalar) -> Scalar:
        result: Scalar = 0
        for c in reversed(self._coefficients):
            result = result * x + c
        return result

    @staticmethod
    def _coerce(other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, int):
            return Polynomial((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._coefficients, other._coefficients
        if len(a) < len(b):
            a, b = b, a
        return Polynomial([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self._coefficients)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._coefficients, other._coefficients
        if not a or not b:
            return Polynomial()
        product = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    product[i + j] += x * y
        return Polynomial(product)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial((1,))
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._coefficients == other._coefficients

    def __hash__(self) -> int:
        if self.degree <= 0:
            return hash(self.leading)
        return hash(self._coefficients)

    def __repr__(self) -> str:
        return f"Polynomial({list(self._coefficients)!r})"

    def __str__(self) -> str:
        return _poly_text(self) if self._coefficients else "0"


N = Polynomial((0, 1))
ZERO_POLY = Polynomial()
ONE_POLY = Polynomial((1,))


def linear(offset: int) -> Polynomial:
    """The monic linear polynomial n + offset."""
    return Polynomial((offset, 1))


def rising_product(offset: int, length: int) -> Polynomial:
    """The product (n + offset)(n + offset + 1)...(n + offset + length - 1)."""
    result = ONE_POLY
    for j in range(length):
        result = result * linear(offset + j)
    return result


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """Apply ``op`` (add, sub or mul) to two polynomials."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"Unknown polynomial operation: {op}")


def _pseudo_remainder(a: Polynomial, b: Polynomial) -> Polynomial:
    remainder = list(a.coefficients)
    b_coeffs = b.coefficients
    db, lb = b.degree, b.leading
    while remainder and len(remainder) - 1 >= db:
        lr = remainder[-1]
        shift = len(remainder) - 1 - db
        remainder = [lb * c for c in remainder]
        for i, c in enumerate(b_coeffs):
            remainder[i + shift] -= lr * c
        while remainder and remainder[-1] == 0:
            remainder.pop()
    return Polynomial(remainder)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Greatest common divisor, primitive with positive leading coefficient."""
    a, b = a.primitive_part(), b.primitive_part()
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero:
        a, b = b, _pseudo_remainder(a, b).primitive_part()
    return a


def exact_quotient(a: Polynomial, b: Polynomial) -> Polynomial:
    """Quotient a / b over the integers; raises unless b divides a exactly."""
    if b.is_zero:
        raise DivisionByZero("polynomial division by zero")
    if a.is_zero:
        return ZERO_POLY
    db, lb = b.degree, b.leading
    if a.degree < db:
        raise ArithmeticError(f"{b} does not divide {a}")
    remainder = list(a.coefficients)
    quotient = [0] * (a.degree - db + 1)
    for k in range(len(quotient) - 1, -1, -1):
        top = remainder[k + db]
        if top % lb:
            raise ArithmeticError(f"{b} does not divide {a}")
        q = top // lb
        quotient[k] = q
        if q:
            for i, c in enumerate(b.coefficients):
                remainder[k + i] -= q * c
    if any(remainder):
        raise ArithmeticError(f"{b} does not divide {a}")
    return Polynomial(quotient)


def _reduce(num: Polynomial, den: Polynomial) -> Tuple[Polynomial, Polynomial]:
    if den.is_zero:
        raise DivisionByZero("rational function with zero denominator")
    if num.is_zero:
        return ZERO_POLY, ONE_POLY
    g = poly_gcd(num, den)
    if g.degree > 0:
        num, den = exact_quotient(num, g), exact_quotient(den, g)
    c = gcd(num.content(), den.content())
    if den.leading < 0:
        c = -c
    if c != 1:
        num, den = num.divide_scalar(c), den.divide_scalar(c)
    return num, den


def _as_polynomial(value) -> Tuple[Polynomial, int]:
    """Split a scalar or polynomial into (integer polynomial, integer scale)."""
    if isinstance(value, Polynomial):
        return value, 1
    if isinstance(value, int):
        return Polynomial((value,)), 1
    if isinstance(value, Fraction):
        return Polynomial((value.numerator,)), value.denominator
    raise TypeError(f"Cannot build a rational function from {type(value).__name__}")


class RationalFunction:
    """An exact, fully reduced ratio of integer polynomials in n."""

    __slots__ = ("_numerator", "_denominator")

    def __init__(self, numerator: Union[Polynomial, Scalar] = 0, denominator: Union[Polynomial, Scalar] = 1):
        num, num_scale = _as_polynomial(numerator)
        den, den_scale = _as_polynomial(denominator)
        self._numerator, self._denominator = _reduce(num * den_scale, den * num_scale)

    @classmethod
    def _canonical(cls, num: Polynomial, den: Polynomial) -> "RationalFunction":
        obj = object.__new__(cls)
        obj._numerator, obj._denominator = _reduce(num, den)
        return obj

    @property
    def numerator(self) -> Polynomial:
        return self._numerator

    @property
    def denominator(self) -> Polynomial:
        return self._denominator

    @property
    def is_zero(self) -> bool:
        return self._numerator.is_zero

    @property
    def is_constant(self) -> bool:
        return self._numerator.degree <= 0 and self._denominator.degree == 0

    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction, Polynomial)):
            return RationalFunction(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self._denominator == other._denominator:
            return RationalFunction._canonical(self._numerator + other._numerator, self._denominator)
        return RationalFunction._canonical(
            self._numerator * other._denominator + other._numerator * self._denominator,
            self._denominator * other._denominator,
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        obj = object.__new__(RationalFunction)
        obj._numerator, obj._denominator = -self._numerator, self._denominator
        return obj

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction._canonical(
            self._numerator * other._numerator, self._denominator * other._denominator
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise DivisionByZero("division by the zero rational function")
        return RationalFunction._canonical(
            self._numerator * other._denominator, self._denominator * other._numerator
        )

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, k: int) -> "RationalFunction":
        if k < 0:
            if self.is_zero:
                raise DivisionByZero("negative power of zero")
            return RationalFunction._canonical(self._denominator ** -k, self._numerator ** -k)
        return RationalFunction._canonical(self._numerator ** k, self._denominator ** k)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._numerator == other._numerator and self._denominator == other._denominator

    def __hash__(self) -> int:
        if self.is_constant:
            return hash(Fraction(self._numerator.leading, self._denominator.leading))
        return hash((self._numerator, self._denominator))

    def evaluate(self, n0: int) -> Fraction:
        """Exact value at the integer n0; raises PoleAtValue at a zero of the denominator."""
        den = self._denominator(n0)
        if den == 0:
            raise PoleAtValue(self, n0)
        return Fraction(self._numerator(n0), den)

    def to_json(self) -> Dict[str, List[str]]:
        """JSON form with decimal-string coefficients, lowest power first."""
        return {
            "num": [str(c) for c in self._numerator.coefficients],
            "den": [str(c) for c in self._denominator.coefficients],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Sequence[Union[str, int]]]) -> "RationalFunction":
        return cls(Polynomial(int(c) for c in data["num"]), Polynomial(int(c) for c in data["den"]))

    def to_latex(self) -> str:
        return _render(self, latex=True)

    def __str__(self) -> str:
        return _render(self, latex=False)

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


ZERO = RationalFunction(0)
ONE = RationalFunction(1)


def ratfunc_arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    """Apply ``op`` (add, sub, mul or div) to two rational functions."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"Unknown rational-function operation: {op}")


def evaluate(f: RationalFunction, n0: int) -> Fraction:
    return f.evaluate(n0)


def from_factored(constant: Scalar, roots: Iterable[Tuple[int, int]] = ()) -> RationalFunction:
    """Assemble constant * prod (n + a)^m; a negative m puts the factor in the denominator.

    Args:
        constant: Exact rational prefactor.
        roots: Pairs (offset a, multiplicity m).

    Returns:
        The reduced rational function.
    """
    constant = Fraction(constant)
    num = Polynomial((constant.numerator,))
    den = Polynomial((constant.denominator,))
    for offset, multiplicity in roots:
        if multiplicity > 0:
            num = num * linear(offset) ** multiplicity
        elif multiplicity < 0:
            den = den * linear(offset) ** -multiplicity
    return RationalFunction(num, den)


def factorial_ratio(top: int, bottom: int) -> RationalFunction:
    """(n + top)! / (n + bottom)! expanded as a finite product."""
    if top >= bottom:
        return RationalFunction(rising_product(bottom + 1, top - bottom))
    return RationalFunction(1, rising_product(top + 1, bottom - top))


def _divisors(k: int) -> List[int]:
    small, large = [], []
    for d in range(1, isqrt(k) + 1):
        if k % d == 0:
            small.append(d)
            if d != k // d:
                large.append(k // d)
    return small + large[::-1]


def factor_linear(poly: Polynomial) -> Tuple[int, Dict[int, int], Polynomial]:
    """Split off the integer content and every linear factor n + a.

    Args:
        poly: A nonzero integer polynomial.

    Returns:
        (content carrying the sign of the leading coefficient, {a: multiplicity},
        primitive residual with positive leading coefficient and no integer root).
    """
    if poly.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    content = poly.content() * (1 if poly.leading > 0 else -1)
    rest = poly.divide_scalar(content)
    factors: Dict[int, int] = {}
    while rest.degree > 0 and rest.coefficients[0] == 0:
        rest = Polynomial(rest.coefficients[1:])
        factors[0] = factors.get(0, 0) + 1
    if rest.degree > 0:
        for d in _divisors(abs(rest.coefficients[0])):
            for root in (d, -d):
                while rest.degree > 0 and rest(root) == 0:
                    rest = exact_quotient(rest, linear(-root))
                    factors[-root] = factors.get(-root, 0) + 1
    return content, factors, rest


def _poly_text(poly: Polynomial, latex: bool = False) -> str:
    pieces = []
    for k in range(poly.degree, -1, -1):
        c = poly.coefficients[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            var = "n" if k == 1 else (f"n^{{{k}}}" if latex else f"n^{k}")
            if mag == 1:
                body = var
            else:
                body = f"{mag}{var}" if latex else f"{mag}*{var}"
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append((" - " if c < 0 else " + ") + body)
    return "".join(pieces)


def _linear_text(offset: int, multiplicity: int, latex: bool) -> str:
    if offset == 0:
        base = "n"
    elif latex:
        base = f"(n+{offset})" if offset > 0 else f"(n-{-offset})"
    else:
        base = f"(n + {offset})" if offset > 0 else f"(n - {-offset})"
    if multiplicity == 1:
        return base
    return f"{base}^{{{multiplicity}}}" if latex else f"{base}^{multiplicity}"


def _tokens(factors: Dict[int, int], residual: Polynomial, latex: bool) -> List[str]:
    tokens = [_linear_text(a, factors[a], latex) for a in sorted(factors)]
    if residual.degree > 0:
        tokens.append(f"({_poly_text(residual, latex)})")
    return tokens


def _render(value: RationalFunction, latex: bool) -> str:
    if value.is_zero:
        return "0"
    cn, num_factors, num_rest = factor_linear(value.numerator)
    cd, den_factors, den_rest = factor_linear(value.denominator)
    k = Fraction(cn, cd)
    sign = "-" if k < 0 else ""
    num_tokens = _tokens(num_factors, num_rest, latex)
    den_tokens = _tokens(den_factors, den_rest, latex)
    k_num = abs(k.numerator)
    num_parts = ([str(k_num)] if k_num != 1 or not num_tokens else []) + num_tokens
    den_parts = ([str(k.denominator)] if k.denominator != 1 else []) + den_tokens

    if latex:
        num_str = " ".join(num_parts)
        if not den_parts:
            return sign + num_str
        return f"{sign}\\frac{{{num_str}}}{{{' '.join(den_parts)}}}"

    num_str = "*".join(num_parts)
    if not den_parts:
        return sign + num_str
    den_str = den_parts[0] if len(den_parts) == 1 else "(" + "*".join(den_parts) + ")"
    return f"{sign}{num_str}/{den_str}"
