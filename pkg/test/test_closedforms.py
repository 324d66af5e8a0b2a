import itertools

import pytest

from haarint.closedforms import (
    ClosedExpression,
    DoubleFanClosed,
    OpenedMonomial,
    branches_to_spec,
    double_fan_expand,
    double_fan_value,
    evaluate_closed,
    expression_to_spec,
    fan_integral,
    parse_closed,
    partial_fan_integral,
    reduce_opened,
    reduce_opened_recursive,
    sigma_via_unitarity,
    special_double_fan,
    stack_integral,
    z_integral,
)
from haarint.errors import DegreeTooLarge, InvalidClosedGraph, ParseError
from haarint.integrals import evaluate_spec, fan_spec, parse_integral, special_double_fan_spec, stack_spec, z_spec
from haarint.ratfield import ONE, Polynomial, RationalFunction, from_factored
from haarint.symgroup import partitions_of

SIGMA = "conj: b,e; b,d; a,d; a,c; plain: b,e; b,d; a,d; a,c"


def balanced_closed(lines):
    for m_a in range(lines + 1):
        for n_a in range(lines + 1):
            yield DoubleFanClosed(m_a, n_a, lines - m_a, lines - n_a)


def test_fan_integral():
    assert fan_integral(3) == from_factored(6, [(0, -1), (1, -1), (2, -1)])
    assert fan_integral(0) == ONE
    with pytest.raises(ValueError):
        fan_integral(-1)


@pytest.mark.parametrize("parts", [tuple(c) for m in range(1, 6) for c in partitions_of(m)])
def test_fan_relation(parts):
    assert partial_fan_integral(*parts) == evaluate_spec(fan_spec(*parts))


def test_z_examples():
    assert z_integral(1, 1, 1) == from_factored(1, [(-1, -1), (1, -1), (2, -1)])
    assert z_integral(2, 1, 1) == from_factored(2, [(-1, -1), (0, -1), (2, -1), (3, -1)])
    assert z_integral(1, 0, 1) == from_factored(1, [(-1, -1), (1, -1)])


@pytest.mark.parametrize(
    "m", [m for m in itertools.product(range(7), repeat=3) if 1 <= sum(m) <= 6]
)
def test_z_integral_matches_class_counting(m):
    assert z_integral(*m) == evaluate_spec(z_spec(*m))


@pytest.mark.parametrize("parts", [tuple(c) for p in range(1, 7) for c in partitions_of(p)])
def test_stack_integral_matches_class_counting(parts):
    assert stack_integral(*parts) == evaluate_spec(stack_spec(*parts))


def test_stack_examples():
    assert stack_integral(1) == from_factored(1, [(0, -1)])
    assert stack_integral(2) == from_factored(2, [(0, -1), (1, -1)])
    assert stack_integral(1, 1) == from_factored(1, [(-1, -1), (1, -1)])
    assert stack_integral(2, 1) == from_factored(2, [(-1, -1), (0, -1), (2, -1)])
    with pytest.raises(DegreeTooLarge):
        stack_integral(5, 4)


def test_special_double_fans():
    assert special_double_fan(0) == ONE
    assert special_double_fan(1) == from_factored(-1, [(-1, -1), (0, -1), (1, -1)])
    assert special_double_fan(2) == from_factored(2, [(-1, -1), (0, -2), (1, -1), (2, -1), (3, -1)])
    assert special_double_fan(3) == from_factored(
        -6, [(-1, -1), (0, -2), (1, -2), (2, -1), (3, -1), (4, -1), (5, -1)]
    )
    for alpha in (1, 2, 3):
        assert special_double_fan(alpha) == evaluate_spec(special_double_fan_spec(alpha))
    with pytest.raises(DegreeTooLarge):
        special_double_fan(5)


def test_double_fan_expand():
    terms = double_fan_expand(DoubleFanClosed.from_patterns(alpha_a=1, alpha_b=2))
    assert terms == [(2, OpenedMonomial(1, 2, 0, 0)), (4, OpenedMonomial(0, 1, 1, 1))]
    assert double_fan_expand(DoubleFanClosed(1, 1, 1, 1)) == [
        (1, OpenedMonomial(1, 1, 0, 0)),
        (1, OpenedMonomial(0, 0, 1, 1)),
    ]
    with pytest.raises(InvalidClosedGraph):
        double_fan_expand(DoubleFanClosed(2, 1, 0, 0))


def test_expansion_collapses_onto_closed_graph():
    closed = DoubleFanClosed(3, 2, 1, 2)
    assert all(mono.closed() == closed for _, mono in double_fan_expand(closed))


def test_reduce_opened_examples():
    assert reduce_opened(OpenedMonomial(1, 0, 0, 0)) == 0
    assert reduce_opened(OpenedMonomial(0, 0, 1, 1)) == RationalFunction(1, Polynomial([-1, 0, 1]))
    assert reduce_opened(OpenedMonomial(1, 1, 1, 1)) == from_factored(-1, [(-1, -1), (0, -2), (2, -1), (3, -1)])
    assert reduce_opened(OpenedMonomial(0, 0, 3, 2)) == z_integral(3, 0, 2) / 12


@pytest.mark.parametrize("alpha,beta_a,beta_b", itertools.product(range(3), range(3), range(3)))
def test_reduce_opened_matches_recursion(alpha, beta_a, beta_b):
    mono = OpenedMonomial(alpha, alpha, beta_a, beta_b)
    assert reduce_opened(mono) == reduce_opened_recursive(mono)


@pytest.mark.parametrize("alpha,beta_a,beta_b", [(0, 2, 1), (1, 1, 0), (1, 0, 2), (0, 1, 1)])
def test_reduce_opened_matches_class_counting(alpha, beta_a, beta_b):
    mono = OpenedMonomial(alpha, alpha, beta_a, beta_b)
    patterns = [DoubleFanClosed.from_patterns(alpha_a=1)] * alpha + [DoubleFanClosed.from_patterns(alpha_b=1)] * alpha
    patterns += [DoubleFanClosed.from_patterns(beta_a=1)] * beta_a + [DoubleFanClosed.from_patterns(beta_b=1)] * beta_b
    assert reduce_opened(mono) == evaluate_spec(branches_to_spec(patterns))


@pytest.mark.parametrize("closed", [c for lines in range(1, 4) for c in balanced_closed(lines)])
def test_closed_double_fan_matches_class_counting(closed):
    assert double_fan_value([closed]) == evaluate_spec(branches_to_spec([closed]))


@pytest.mark.parametrize(
    "first,second",
    list(itertools.product([c for lines in (1, 2) for c in balanced_closed(lines)], repeat=2)),
)
def test_two_branch_double_fan_matches_class_counting(first, second):
    assert double_fan_value([first, second]) == evaluate_spec(branches_to_spec([first, second]))


def test_hybrid_examples():
    value = evaluate_closed(parse_closed("[Aa+2Ab][Aa]"))
    assert value == from_factored(-4, [(-1, -1), (0, -1), (1, -1), (2, -1), (3, -1)])
    assert value == evaluate_spec(parse_integral("conj: a,1; b,1,2; a,2; plain: a,1,2; b,1; b,2"))

    value = evaluate_closed(parse_closed("[Aa+Ab+Ba][Aa+Ab]"))
    expected = from_factored(2, [(-1, -1), (0, -2), (1, -1), (2, -1), (3, -1), (4, -1)])
    assert value == expected * RationalFunction(Polynomial([4, 2, 1]))
    # Other labelings of the same closed graphs.
    assert evaluate_closed(parse_closed("[Aa][Aa+2Ab]")) == evaluate_closed(parse_closed("[Aa+2Ab][Aa]"))
    assert evaluate_closed(parse_closed("[2Ab+Aa][A_a]")) == evaluate_closed(parse_closed("[Aa+2Ab][Aa]"))


ONE_LINE_HYBRID = from_factored(-4, [(-1, -1), (0, -1), (1, -1), (2, -1), (3, -1)])
TWO_LINE_HYBRID = from_factored(2, [(-1, -1), (0, -2), (1, -1), (2, -1), (3, -1), (4, -1)]) * RationalFunction(
    Polynomial([4, 2, 1])
)


@pytest.mark.parametrize(
    "text,expected",
    [
        ("[Aa+2Ab][Aa]", ONE_LINE_HYBRID),
        ("[Ab+Ba+Bb][Aa]", ONE_LINE_HYBRID),
        ("[Aa+Ab+Ba][Aa+Ab]", TWO_LINE_HYBRID),
        ("[2Ba+Bb][Aa+Ab]", TWO_LINE_HYBRID),
        ("[Aa+Ab+Ba][Ba+Bb]", TWO_LINE_HYBRID),
        ("[2Ba+Bb][Ba+Bb]", TWO_LINE_HYBRID),
    ],
)
def test_equivalent_hybrid_forms(text, expected):
    expr = parse_closed(text)
    assert evaluate_closed(expr) == expected
    assert evaluate_spec(expression_to_spec(expr)) == expected


def test_sigma_via_unitarity():
    expected = from_factored(1, [(-1, -1), (0, -2), (1, 1), (2, -1), (3, -1)])
    assert sigma_via_unitarity() == expected
    assert evaluate_spec(parse_integral(SIGMA)) == expected


def test_parse_closed():
    assert parse_closed("z 1 1 1") == ClosedExpression("z", (1, 1, 1))
    assert parse_closed("fan 2 1") == ClosedExpression("fan", (2, 1))
    assert parse_closed("stack 1 1") == ClosedExpression("stack", (1, 1))
    expr = parse_closed("[Aa+2Ab][Aa]")
    assert expr.kind == "double_fan"
    assert expr.branches == (DoubleFanClosed(1, 2, 2, 1), DoubleFanClosed(1, 0, 0, 1))
    assert str(expr) == "[(1 2)(2 1)][(1 0)(0 1)]"
    assert str(parse_closed("z 1 1 1")) == "z 1 1 1"


def test_parse_closed_errors():
    with pytest.raises(ParseError) as excinfo:
        parse_closed("fan x")
    assert excinfo.value.position == 4
    for text in ("", "z 1 2", "stack 2 0", "bowl 3", "[Aa+Cx]", "[Aa] junk", "[]"):
        with pytest.raises(ParseError):
            parse_closed(text)


def test_expression_to_spec():
    assert expression_to_spec(parse_closed("fan 2 1")) == fan_spec(2, 1)
    assert expression_to_spec(parse_closed("z 2 1 1")) == z_spec(2, 1, 1)
    assert expression_to_spec(parse_closed("stack 2 1")) == stack_spec(2, 1)
    for text in ("fan 3", "fan 2 1", "z 1 1 1", "z 2 1 1", "stack 2 1", "[Aa+Ab+Ba][Aa+Ab]"):
        expr = parse_closed(text)
        assert evaluate_closed(expr) == evaluate_spec(expression_to_spec(expr))
