from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from haarint.errors import DivisionByZero, PoleAtValue
from haarint.ratfield import (
    N,
    ONE,
    ZERO,
    Polynomial,
    RationalFunction,
    evaluate,
    factor_linear,
    factorial_ratio,
    from_factored,
    linear,
    poly_arith,
    poly_gcd,
    ratfunc_arith,
    rising_product,
)

coefficients = st.lists(st.integers(min_value=-20, max_value=20), min_size=0, max_size=4)
polynomials = coefficients.map(Polynomial)


@st.composite
def rational_functions(draw):
    num = draw(polynomials)
    den = draw(polynomials.filter(lambda p: not p.is_zero))
    return RationalFunction(num, den)


def test_polynomial_canonical_form():
    assert Polynomial([1, 2, 0, 0]).coefficients == (1, 2)
    assert Polynomial([0, 0]).is_zero
    assert Polynomial([0, 0]) == Polynomial()
    assert Polynomial().degree == -1
    assert str(Polynomial([4, 2, 1])) == "n^2 + 2*n + 4"
    assert str(Polynomial()) == "0"


def test_poly_arith_examples():
    assert poly_arith(N, N, "mul") == Polynomial([0, 0, 1])
    assert poly_arith(linear(-1), linear(1), "mul") == Polynomial([-1, 0, 1])
    square = Polynomial([-1, 0, 1])
    assert poly_arith(square, square, "sub").is_zero
    with pytest.raises(ValueError):
        poly_arith(N, N, "div")


def test_poly_gcd_is_primitive():
    a = Polynomial([-2, 0, 2])  # 2(n - 1)(n + 1)
    b = Polynomial([3, 3])  # 3(n + 1)
    assert poly_gcd(a, b) == linear(1)


def test_rising_product():
    assert rising_product(0, 3) == N * linear(1) * linear(2)
    assert rising_product(5, 0) == Polynomial([1])


def test_ratfunc_arith_examples():
    a = RationalFunction(1, linear(-1))
    b = RationalFunction(1, linear(1))
    assert ratfunc_arith(a, b, "sub") == RationalFunction(2, Polynomial([-1, 0, 1]))

    exchange = from_factored(-1, [(-1, -1), (0, -1), (1, -1)])
    assert ratfunc_arith(exchange, ZERO, "mul") == ZERO

    direct = RationalFunction(1, Polynomial([-1, 0, 1]))
    assert ratfunc_arith(direct, exchange, "add") == from_factored(1, [(0, -1), (1, -1)])


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        ratfunc_arith(ONE, ZERO, "div")
    with pytest.raises(ZeroDivisionError):
        ONE / 0
    with pytest.raises(DivisionByZero):
        RationalFunction(1, 0)


def test_sign_and_content_are_canonical():
    value = RationalFunction(Polynomial([2, 2]), Polynomial([0, -4, -4]))
    assert value.numerator == Polynomial([-1])
    assert value.denominator == Polynomial([0, 2])
    assert value == RationalFunction(-1, Polynomial([0, 2]))


def test_fraction_constants():
    third = RationalFunction(Fraction(1, 3))
    assert third.is_constant
    assert third * 3 == ONE
    assert hash(third) == hash(Fraction(1, 3))
    assert RationalFunction(Fraction(2, 3), Fraction(4, 9)) == RationalFunction(Fraction(3, 2))


def test_evaluate_examples():
    assert evaluate(RationalFunction(1, Polynomial([-1, 0, 1])), 3) == Fraction(1, 8)
    sigma = from_factored(1, [(-1, -1), (0, -2), (1, 1), (2, -1), (3, -1)])
    assert evaluate(sigma, 3) == Fraction(1, 135)
    with pytest.raises(PoleAtValue) as excinfo:
        evaluate(RationalFunction(1, Polynomial([-4, 0, 1])), 2)
    assert excinfo.value.n0 == 2


def test_from_factored_examples():
    assert from_factored(2, [(0, -1), (1, -1)]) == RationalFunction(2, N * linear(1))
    assert from_factored(1, []) == ONE
    assert from_factored(6, [(0, -1), (1, -1), (2, -1)]) == RationalFunction(6, rising_product(0, 3))


def test_factorial_ratio():
    assert factorial_ratio(2, 0) == RationalFunction(linear(1) * linear(2))
    assert factorial_ratio(-1, 2) == RationalFunction(1, rising_product(0, 3))
    assert factorial_ratio(3, 3) == ONE


def test_factor_linear():
    content, factors, residual = factor_linear(Polynomial([0, -4, 0, 1]) * 3)
    assert content == 3
    assert factors == {0: 1, 2: 1, -2: 1}
    assert residual == Polynomial([1])
    content, factors, residual = factor_linear(Polynomial([-2, 0, 1]))
    assert factors == {}
    assert residual == Polynomial([-2, 0, 1])


def test_rendering():
    exchange = from_factored(-1, [(-1, -1), (0, -1), (1, -1)])
    assert str(exchange) == "-1/((n - 1)*n*(n + 1))"
    assert str(from_factored(1, [(0, -1)])) == "1/n"
    assert str(ZERO) == "0"
    assert str(RationalFunction(Fraction(3, 4))) == "3/4"
    assert str(from_factored(2, [(0, 1)])) == "2*n"
    assert exchange.to_latex() == r"-\frac{1}{(n-1) n (n+1)}"


def test_json_round_trip():
    value = from_factored(Fraction(-5, 3), [(-3, -1), (0, 2), (4, -2)])
    data = value.to_json()
    assert all(isinstance(c, str) for c in data["num"] + data["den"])
    assert RationalFunction.from_json(data) == value


@given(polynomials, polynomials, polynomials)
def test_polynomial_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - b) + b == a


@given(rational_functions(), rational_functions(), rational_functions())
def test_rational_field_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO


@given(rational_functions())
def test_reduction_is_idempotent(a):
    again = RationalFunction(a.numerator, a.denominator)
    assert again.numerator == a.numerator
    assert again.denominator == a.denominator
    assert a.denominator.leading > 0


@given(rational_functions(), rational_functions(), st.integers(min_value=-6, max_value=6))
def test_evaluate_respects_arithmetic(a, b, n0):
    try:
        x, y = a.evaluate(n0), b.evaluate(n0)
    except PoleAtValue:
        return
    assert (a + b).evaluate(n0) == x + y
    assert (a * b).evaluate(n0) == x * y
