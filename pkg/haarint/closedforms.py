"""Closed-form integral families and the double-fan hybrid reduction.

Fans, Z-integrals and stacks have explicit products of linear factors in n.
Double-fan integrals with two rows a and b are expanded into fully opened
monomials [A_a]^aa [A_b]^ab [B_a]^ba [B_b]^bb, which are reduced to the
special double fans [A_a]^k [A_b]^k computed by the character formula.

Pattern names: an R-dot (column) is a B pattern when its conjugated and
plain lines come from the same row and an A pattern otherwise; the subscript
names the row of the conjugated line.
"""

import itertools
import logging
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial, prod
from typing import List, Sequence, Tuple

from haarint.errors import DegreeTooLarge, InvalidClosedGraph, ParseError
from haarint.integrals import IntegralSpec, fan_spec, stack_spec, xi, z_spec
from haarint.ratfield import (
    ONE,
    ZERO,
    Polynomial,
    RationalFunction,
    factorial_ratio,
    from_factored,
    linear,
    rising_product,
)
from haarint.symgroup import DEFAULT_DEGREE_CAP, Partition, centralizer_order, class_size, partitions_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DoubleFanClosed:
    """A closed double fan: line counts from rows a and b into a single column.

    m_* count conjugated (solid) lines and n_* plain (dotted) lines.
    """

    m_a: int
    n_a: int
    m_b: int
    n_b: int

    def __post_init__(self):
        if min(self.m_a, self.n_a, self.m_b, self.n_b) < 0:
            raise ValueError(f"Line counts must be nonnegative: {self}")

    @classmethod
    def from_patterns(cls, alpha_a: int = 0, alpha_b: int = 0, beta_a: int = 0, beta_b: int = 0) -> "DoubleFanClosed":
        """Collapse pattern counts onto one column."""
        return cls(
            m_a=alpha_a + beta_a,
            n_a=alpha_b + beta_a,
            m_b=alpha_b + beta_b,
            n_b=alpha_a + beta_b,
        )

    @property
    def is_balanced(self) -> bool:
        return self.m_a + self.m_b == self.n_a + self.n_b

    @property
    def lines(self) -> int:
        return self.m_a + self.m_b

    def __str__(self) -> str:
        return f"[({self.m_a} {self.n_a})({self.m_b} {self.n_b})]"


@dataclass(frozen=True, order=True)
class OpenedMonomial:
    """Exponents of the four basic patterns in a fully opened double fan."""

    alpha_a: int = 0
    alpha_b: int = 0
    beta_a: int = 0
    beta_b: int = 0

    def __mul__(self, other: "OpenedMonomial") -> "OpenedMonomial":
        return OpenedMonomial(
            self.alpha_a + other.alpha_a,
            self.alpha_b + other.alpha_b,
            self.beta_a + other.beta_a,
            self.beta_b + other.beta_b,
        )

    def closed(self) -> DoubleFanClosed:
        return DoubleFanClosed.from_patterns(self.alpha_a, self.alpha_b, self.beta_a, self.beta_b)

    def __str__(self) -> str:
        pieces = []
        for name, power in (("A_a", self.alpha_a), ("A_b", self.alpha_b), ("B_a", self.beta_a), ("B_b", self.beta_b)):
            if power:
                pieces.append(f"[{name}]" + (f"^{power}" if power > 1 else ""))
        return "".join(pieces) or "1"


def fan_integral(m: int) -> RationalFunction:
    """F(m) = integral of |U_11|^(2m) = m! / (n (n+1) ... (n+m-1))."""
    if m < 0:
        raise ValueError("fan size must be nonnegative")
    return from_factored(factorial(m), [(j, -1) for j in range(m)])


def partial_fan_integral(*parts: int) -> RationalFunction:
    """A partially opened fan prod_k |U_1k|^(2 m_k): (prod m_k!) / m! * F(m)."""
    m = sum(parts)
    return RationalFunction(prod(factorial(part) for part in parts), rising_product(0, m))


def z_integral(m1: int, m2: int, m3: int) -> RationalFunction:
    """Z(m1, m2, m3) = integral of |U_11|^(2 m1) |U_12|^(2 m2) |U_22|^(2 m3)."""
    if min(m1, m2, m3) < 0:
        raise ValueError("Z-integral exponents must be nonnegative")
    total = m1 + m2 + m3
    constant = factorial(m1) * factorial(m2) * factorial(m3)
    return (
        constant
        * factorial_ratio(m1 + m3 - 2, m1 - 2)
        * factorial_ratio(-2, m3 - 2)
        * factorial_ratio(-1, total - 1)
    )


def stack_integral(*parts: int, cap: int = DEFAULT_DEGREE_CAP) -> RationalFunction:
    """Xi(p_1, ..., p_t): disconnected lines with multiplicities p_k.

    Only classes that are products of classes of the S_{p_k} contribute, with
    weight prod p_k! n(c_k).
    """
    if any(part < 1 for part in parts):
        raise ValueError("stack multiplicities must be positive")
    if sum(parts) > cap:
        raise DegreeTooLarge(f"Stack of weight {sum(parts)} exceeds the degree cap {cap}")
    weights: Counter = Counter()
    for classes in itertools.product(*(partitions_of(part) for part in parts)):
        merged = Partition.from_parts([x for c in classes for x in c])
        weights[merged] += prod(factorial(part) * class_size(c) for part, c in zip(parts, classes))
    total = ZERO
    for c, weight in weights.items():
        total = total + weight * xi(c)
    return total


@lru_cache(maxsize=None)
def _special_double_fan(alpha: int) -> RationalFunction:
    total = ZERO
    for mu in partitions_of(alpha):
        count = factorial(alpha) ** 2 // centralizer_order(mu)
        total = total + count * xi([2 * part for part in mu])
    return total


def special_double_fan(alpha: int, cap: int = DEFAULT_DEGREE_CAP) -> RationalFunction:
    """[A_a]^alpha [A_b]^alpha, summed over the even cycle structures of the exchange.

    Raises:
        DegreeTooLarge: If 2 * alpha exceeds the degree cap.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if 2 * alpha > cap:
        raise DegreeTooLarge(f"Special double fan of degree {2 * alpha} exceeds the degree cap {cap}")
    return _special_double_fan(alpha)


def double_fan_expand(closed: DoubleFanClosed) -> List[Tuple[int, OpenedMonomial]]:
    """Spin a closed double fan off into fully opened monomials.

    Every nonnegative pattern count that collapses onto ``closed`` appears once,
    with coefficient m_a! n_a! m_b! n_b! / (alpha_a! alpha_b! beta_a! beta_b!).

    Raises:
        InvalidClosedGraph: If the conjugated and plain line totals differ.
    """
    if not closed.is_balanced:
        raise InvalidClosedGraph(
            f"{closed}: {closed.m_a + closed.m_b} conjugated lines but {closed.n_a + closed.n_b} plain lines"
        )
    numerator = factorial(closed.m_a) * factorial(closed.n_a) * factorial(closed.m_b) * factorial(closed.n_b)
    terms = []
    for beta_a in range(min(closed.m_a, closed.n_a) + 1):
        beta_b = closed.m_b - closed.n_a + beta_a
        if beta_b < 0:
            continue
        mono = OpenedMonomial(closed.m_a - beta_a, closed.n_a - beta_a, beta_a, beta_b)
        denominator = factorial(mono.alpha_a) * factorial(mono.alpha_b) * factorial(beta_a) * factorial(beta_b)
        terms.append((numerator // denominator, mono))
    return terms


def reduce_opened(mono: OpenedMonomial, cap: int = DEFAULT_DEGREE_CAP) -> RationalFunction:
    """Value of a fully opened double fan in terms of special double fans.

    Zero unless alpha_a == alpha_b. Otherwise, with alpha the common value,

        sum_e (-1)^e e! C(ba, e) C(bb, e) (n+2alpha-1+2e)
              (n+2alpha-2+e)! (n+2alpha-1+2e)! / ((n+2alpha+ba-1+e)! (n+2alpha+bb-1+e)!)
              [A_a]^(alpha+e) [A_b]^(alpha+e)

    for e = 0 .. min(ba, bb).
    """
    if mono.alpha_a != mono.alpha_b:
        return ZERO
    alpha = mono.alpha_a
    beta_a, beta_b = max(mono.beta_a, mono.beta_b), min(mono.beta_a, mono.beta_b)
    shift = 2 * alpha
    total = ZERO
    for e in range(beta_b + 1):
        weight = (-1) ** e * factorial(e) * comb(beta_a, e) * comb(beta_b, e)
        term = (
            RationalFunction(linear(shift - 1 + 2 * e))
            * factorial_ratio(shift - 2 + e, shift + beta_b - 1 + e)
            * factorial_ratio(shift - 1 + 2 * e, shift + beta_a - 1 + e)
        )
        total = total + weight * term * special_double_fan(alpha + e, cap)
    return total


@lru_cache(maxsize=None)
def _reduce_recursive(alpha: int, beta_a: int, beta_b: int, cap: int) -> RationalFunction:
    if beta_b > beta_a:
        beta_a, beta_b = beta_b, beta_a
    if beta_b == 0:
        return special_double_fan(alpha, cap) / RationalFunction(rising_product(2 * alpha, beta_a))
    lowered = _reduce_recursive(alpha, beta_a, beta_b - 1, cap)
    crossed = _reduce_recursive(alpha + 1, beta_a - 1, beta_b - 1, cap)
    return (lowered - beta_a * crossed) / RationalFunction(linear(2 * alpha + beta_b - 1))


def reduce_opened_recursive(mono: OpenedMonomial, cap: int = DEFAULT_DEGREE_CAP) -> RationalFunction:
    """reduce_opened via the unitarity recursion, one [B_b] column at a time."""
    if mono.alpha_a != mono.alpha_b:
        return ZERO
    return _reduce_recursive(mono.alpha_a, mono.beta_a, mono.beta_b, cap)


def double_fan_value(branches: Sequence[DoubleFanClosed], cap: int = DEFAULT_DEGREE_CAP) -> RationalFunction:
    """Value of a partially opened double fan given as one closed graph per column."""
    terms = Counter({OpenedMonomial(): 1})
    for branch in branches:
        expanded = double_fan_expand(branch)
        merged: Counter = Counter()
        for mono, coefficient in terms.items():
            for branch_coefficient, branch_mono in expanded:
                merged[mono * branch_mono] += coefficient * branch_coefficient
        terms = merged
    logger.debug(f"Double fan with {len(branches)} branches opened into {len(terms)} monomials")
    total = ZERO
    for mono, coefficient in sorted(terms.items()):
        total = total + coefficient * reduce_opened(mono, cap)
    return total


def sigma_via_unitarity() -> RationalFunction:
    """The Sigma integral from the unitarity sum: (Z(2,0,1) - ((n-3)/2 + 1) Z(2,0,2)) / 4."""
    coefficient = RationalFunction(Polynomial((-3, 1)), 2) + ONE
    return (z_integral(2, 0, 1) - coefficient * z_integral(2, 0, 2)) / 4


def branches_to_spec(branches: Sequence[DoubleFanClosed]) -> IntegralSpec:
    """The monomial integral of a partially opened double fan: rows a=1, b=2, one column per branch."""
    conj, plain = [], []
    for column, branch in enumerate(branches, start=1):
        conj.extend((row, column, m) for row, m in ((1, branch.m_a), (2, branch.m_b)) if m)
        plain.extend((row, column, m) for row, m in ((1, branch.n_a), (2, branch.n_b)) if m)
    return IntegralSpec(tuple(conj), tuple(plain))


@dataclass(frozen=True)
class ClosedExpression:
    """A parsed closed-form request: fan, z, stack or a product of double-fan branches."""

    kind: str
    args: Tuple[int, ...] = ()
    branches: Tuple[DoubleFanClosed, ...] = ()

    def __str__(self) -> str:
        if self.kind == "double_fan":
            return "".join(str(branch) for branch in self.branches)
        return " ".join([self.kind] + [str(arg) for arg in self.args])


_PATTERN_TERM = re.compile(r"^\s*(\d*)\s*([AB])_?([ab])\s*$")
_BRACKET = re.compile(r"\[([^\[\]]*)\]")


def _parse_brackets(text: str) -> ClosedExpression:
    branches = []
    cursor = 0
    for match in _BRACKET.finditer(text):
        gap = text[cursor:match.start()]
        if gap.strip():
            raise ParseError(f"Unexpected text {gap.strip()!r} between brackets", cursor + len(gap) - len(gap.lstrip()))
        counts = {"Aa": 0, "Ab": 0, "Ba": 0, "Bb": 0}
        offset = match.start(1)
        body = match.group(1)
        if not body.strip():
            raise ParseError("Empty bracket", match.start())
        for term in body.split("+"):
            parsed = _PATTERN_TERM.match(term)
            if not parsed:
                raise ParseError(f"Invalid pattern term {term.strip()!r}", offset + len(term) - len(term.lstrip()))
            counts[parsed.group(2) + parsed.group(3)] += int(parsed.group(1) or 1)
            offset += len(term) + 1
        branches.append(
            DoubleFanClosed.from_patterns(counts["Aa"], counts["Ab"], counts["Ba"], counts["Bb"])
        )
        cursor = match.end()
    rest = text[cursor:]
    if rest.strip():
        raise ParseError(f"Unexpected text {rest.strip()!r}", cursor + len(rest) - len(rest.lstrip()))
    if not branches:
        raise ParseError("Expected at least one bracket", 0)
    return ClosedExpression("double_fan", branches=tuple(branches))


def parse_closed(text: str) -> ClosedExpression:
    """Parse "fan m [m2 ...]", "z m1 m2 m3", "stack p1 p2 ..." or bracket groups like "[Aa+2Ab][Aa]".

    Raises:
        ParseError: On malformed input, with the character position.
    """
    if text.lstrip().startswith("["):
        return _parse_brackets(text)
    words = list(re.finditer(r"\S+", text))
    if not words:
        raise ParseError("Empty closed-form expression", 0)
    kind = words[0].group(0).lower()
    if kind not in ("fan", "z", "stack"):
        raise ParseError(f"Unknown closed form {words[0].group(0)!r}", words[0].start())
    args = []
    for word in words[1:]:
        if not word.group(0).isdigit():
            raise ParseError(f"Expected a nonnegative integer, got {word.group(0)!r}", word.start())
        args.append(int(word.group(0)))
    end = len(text.rstrip())
    if not args:
        raise ParseError(f"'{kind}' needs at least one argument", end)
    if kind == "z" and len(args) != 3:
        raise ParseError(f"'z' takes exactly three arguments, got {len(args)}", end)
    if kind == "stack" and 0 in args:
        raise ParseError("Stack multiplicities must be positive", words[args.index(0) + 1].start())
    return ClosedExpression(kind, tuple(args))


def evaluate_closed(expr: ClosedExpression, cap: int = DEFAULT_DEGREE_CAP) -> RationalFunction:
    """Value of a parsed closed-form expression."""
    if expr.kind == "fan":
        return fan_integral(expr.args[0]) if len(expr.args) == 1 else partial_fan_integral(*expr.args)
    if expr.kind == "z":
        return z_integral(*expr.args)
    if expr.kind == "stack":
        return stack_integral(*expr.args, cap=cap)
    return double_fan_value(expr.branches, cap)


def expression_to_spec(expr: ClosedExpression) -> IntegralSpec:
    """The monomial integral a closed-form expression stands for."""
    if expr.kind == "fan":
        return fan_spec(*expr.args)
    if expr.kind == "z":
        return z_spec(*expr.args)
    if expr.kind == "stack":
        return stack_spec(*expr.args)
    return branches_to_spec(expr.branches)
