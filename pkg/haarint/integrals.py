"""Group-theoretical evaluation of monomial Haar integrals.

An integral is a product of conjugated factors U*_{ij} and plain factors
U_{kl}. After canonicalization it reads <IJ|IJ_Q>: the conjugated factors sit
at (I[x], J[x]) and the plain factors at (I[x], J[Q(x)]). Its value is

    sum over classes c of S_p of  N[c] * xi[c]

where N[c] counts pairs (R, T) in G_I x G_JQ with Q*T*R in c, and xi[c] is
the primitive integral of class c built from S_p characters and U(n)
dimensions.
"""

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Hashable, List, Optional, Sequence, Tuple, Union

from haarint.errors import DegreeMismatch, DegreeTooLarge, InvalidExchange, ParseError
from haarint.ratfield import ZERO, RationalFunction
from haarint.reptheory import character, dim_sp, dim_un
from haarint.symgroup import (
    DEFAULT_DEGREE_CAP,
    Partition,
    Permutation,
    cycle_type_of,
    partitions_of,
    permutation_of_type,
    young_subgroup,
    young_subgroup_order,
)
from haarint.utils import normalize_labels

logger = logging.getLogger(__name__)

DEFAULT_MAX_PRODUCTS = 5_000_000

Label = Hashable
Factor = Tuple[Label, Label, int]


@dataclass(frozen=True)
class IntegralSpec:
    """A raw monomial integral: U* factors and U factors with multiplicities.

    Labels are opaque; only their equality pattern matters.
    """

    conj_factors: Tuple[Factor, ...] = ()
    plain_factors: Tuple[Factor, ...] = ()

    def __post_init__(self):
        for name in ("conj_factors", "plain_factors"):
            factors = tuple(_as_factor(entry) for entry in getattr(self, name))
            object.__setattr__(self, name, factors)

    @property
    def conj_degree(self) -> int:
        return sum(m for _, _, m in self.conj_factors)

    @property
    def plain_degree(self) -> int:
        return sum(m for _, _, m in self.plain_factors)

    def conj_positions(self) -> List[Tuple[Label, Label]]:
        return [(i, j) for i, j, m in self.conj_factors for _ in range(m)]

    def plain_positions(self) -> List[Tuple[Label, Label]]:
        return [(k, l) for k, l, m in self.plain_factors for _ in range(m)]

    def labels(self) -> List[Label]:
        return [label for i, j, _ in self.conj_factors + self.plain_factors for label in (i, j)]

    def to_text(self) -> str:
        def entries(factors):
            return "; ".join(f"{i},{j}" + (f",{m}" if m != 1 else "") for i, j, m in factors)

        return f"conj: {entries(self.conj_factors)}; plain: {entries(self.plain_factors)}"

    def to_json(self) -> Dict[str, List[List[Label]]]:
        return {
            "conj": [[i, j, m] for i, j, m in self.conj_factors],
            "plain": [[k, l, m] for k, l, m in self.plain_factors],
        }


def _as_factor(entry: Sequence) -> Factor:
    if len(entry) == 2:
        row, col, mult = entry[0], entry[1], 1
    elif len(entry) == 3:
        row, col, mult = entry
    else:
        raise ValueError(f"Factor must be (row, col) or (row, col, mult): {entry!r}")
    if not isinstance(mult, int) or mult < 1:
        raise ValueError(f"Factor multiplicity must be a positive integer: {entry!r}")
    return (row, col, mult)


@dataclass(frozen=True)
class ZeroIntegral:
    """An integral that vanishes identically, with the reason."""

    reason: str


@dataclass(frozen=True)
class CanonicalIntegral:
    """The integral <IJ|IJ_Q> with rows and columns relabeled to 1..k."""

    rows: Tuple[int, ...]
    cols: Tuple[int, ...]
    exchange: Permutation

    def __post_init__(self):
        if not len(self.rows) == len(self.cols) == self.exchange.degree:
            raise DegreeMismatch(
                f"Rows ({len(self.rows)}), columns ({len(self.cols)}) and exchange "
                f"({self.exchange.degree}) must share one degree"
            )

    @property
    def degree(self) -> int:
        return len(self.rows)

    @property
    def exchanged_cols(self) -> Tuple[int, ...]:
        """J_Q, with J_Q[x] = J[Q(x)]."""
        return tuple(self.cols[y - 1] for y in self.exchange.images)

    def group_i(self, cap: int = DEFAULT_DEGREE_CAP) -> List[Permutation]:
        return young_subgroup(self.rows, cap)

    def group_j(self, cap: int = DEFAULT_DEGREE_CAP) -> List[Permutation]:
        return young_subgroup(self.cols, cap)

    def group_jq(self, cap: int = DEFAULT_DEGREE_CAP) -> List[Permutation]:
        return young_subgroup(self.exchanged_cols, cap)

    @property
    def order_i(self) -> int:
        return young_subgroup_order(self.rows)

    @property
    def order_j(self) -> int:
        return young_subgroup_order(self.cols)

    @property
    def order_jq(self) -> int:
        return young_subgroup_order(self.exchanged_cols)


@dataclass(frozen=True)
class ClassCounts:
    """N[c] for every class c of S_p."""

    degree: int
    counts: Dict[Partition, int] = field(default_factory=dict)

    def __getitem__(self, c: Sequence[int]) -> int:
        return self.counts.get(Partition.from_parts(c), 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def nonzero(self) -> List[Tuple[Partition, int]]:
        return [(c, count) for c, count in self.counts.items() if count]


class Orderliness(str, Enum):
    DISJOINT = "Disjoint"
    NESTED = "Nested"
    NON_ORDERLY = "NonOrderly"


def _normalized(rows: Sequence[Label], cols: Sequence[Label], exchange: Permutation) -> CanonicalIntegral:
    row_labels, _ = normalize_labels(rows)
    col_labels, _ = normalize_labels(cols)
    return CanonicalIntegral(row_labels, col_labels, exchange)


def canonicalize(spec: IntegralSpec) -> Union[CanonicalIntegral, ZeroIntegral]:
    """Bring a raw integral into the form <IJ|IJ_Q>, or prove that it vanishes.

    Plain factors are matched to conjugated factors with the same row,
    preferring an exact (row, column) match so that Q fixes as many points as
    possible.
    """
    conj = spec.conj_positions()
    plain = spec.plain_positions()
    if len(conj) != len(plain):
        return ZeroIntegral(f"degree mismatch: {len(conj)} conjugated vs {len(plain)} plain factors")
    if Counter(i for i, _ in conj) != Counter(k for k, _ in plain):
        return ZeroIntegral("row labels of conjugated and plain factors differ")
    if Counter(j for _, j in conj) != Counter(l for _, l in plain):
        return ZeroIntegral("column labels of conjugated and plain factors differ")

    p = len(conj)
    used = [False] * p
    matched: List[Optional[Label]] = [None] * p
    for x, position in enumerate(conj):
        for k, candidate in enumerate(plain):
            if not used[k] and candidate == position:
                used[k] = True
                matched[x] = candidate[1]
                break
    for x, (row, _) in enumerate(conj):
        if matched[x] is not None:
            continue
        for k, (candidate_row, candidate_col) in enumerate(plain):
            if not used[k] and candidate_row == row:
                used[k] = True
                matched[x] = candidate_col
                break

    cols = [j for _, j in conj]
    images = [0] * p
    taken = [False] * p
    for x in range(p):
        if matched[x] == cols[x]:
            images[x] = x + 1
            taken[x] = True
    for x in range(p):
        if images[x]:
            continue
        for y in range(p):
            if not taken[y] and cols[y] == matched[x]:
                images[x] = y + 1
                taken[y] = True
                break

    return _normalized([i for i, _ in conj], cols, Permutation(images))


def to_spec(ci: CanonicalIntegral) -> IntegralSpec:
    """The raw integral of a canonical form, equal factors merged."""
    conj = Counter(zip(ci.rows, ci.cols))
    plain = Counter(zip(ci.rows, ci.exchanged_cols))
    return IntegralSpec(
        tuple((i, j, m) for (i, j), m in conj.items()),
        tuple((k, l, m) for (k, l), m in plain.items()),
    )


def with_exchange(ci: CanonicalIntegral, q: Permutation) -> CanonicalIntegral:
    """Re-seat the integral on another exchange permutation with the same J_Q.

    Raises:
        InvalidExchange: If q maps the column labels to a different J_Q.
    """
    if q.degree != ci.degree:
        raise DegreeMismatch(f"Exchange of degree {q.degree} for an integral of degree {ci.degree}")
    if tuple(ci.cols[y - 1] for y in q.images) != ci.exchanged_cols:
        raise InvalidExchange(f"{q} does not reproduce J_Q = {ci.exchanged_cols}")
    return CanonicalIntegral(ci.rows, ci.cols, q)


def _refines(fine: Sequence[Label], coarse: Sequence[Label]) -> bool:
    """True when positions holding equal values in ``fine`` also do in ``coarse``."""
    seen: Dict[Label, Label] = {}
    for a, b in zip(fine, coarse):
        if seen.setdefault(a, b) != b:
            return False
    return True


def _support(values: Sequence[Label]) -> set:
    multiplicity = Counter(values)
    return {x for x, value in enumerate(values) if multiplicity[value] > 1}


def classify_orderly(ci: CanonicalIntegral) -> Orderliness:
    """Nested when one symmetry group contains the other, Disjoint when they move
    disjoint sets of positions, NonOrderly otherwise."""
    jq = ci.exchanged_cols
    if _refines(jq, ci.rows) or _refines(ci.rows, jq):
        return Orderliness.NESTED
    if not _support(ci.rows) & _support(jq):
        return Orderliness.DISJOINT
    return Orderliness.NON_ORDERLY


def _check_budget(products: int, max_products: int) -> None:
    if products > max_products:
        raise DegreeTooLarge(f"Class counting needs {products} products, budget is {max_products}")


def _compose_images(left: Sequence[int], right: Sequence[int]) -> Tuple[int, ...]:
    return tuple(left[x - 1] for x in right)


def _as_class_counts(p: int, counts: Counter) -> ClassCounts:
    return ClassCounts(p, {c: counts.get(c, 0) for c in partitions_of(p)})


@lru_cache(maxsize=4096)
def _class_counts(
    rows: Tuple[int, ...], cols: Tuple[int, ...], exchange: Permutation, max_products: int, cap: int
) -> ClassCounts:
    ci = CanonicalIntegral(rows, cols, exchange)
    p = ci.degree
    jq = ci.exchanged_cols
    q = exchange.images
    counts: Counter = Counter()

    if _refines(jq, rows) or _refines(rows, jq):
        # With G_JQ inside G_I, T*R sweeps G_I for every T (and symmetrically).
        if _refines(jq, rows):
            enumerated, weight = rows, ci.order_jq
        else:
            enumerated, weight = jq, ci.order_i
        _check_budget(young_subgroup_order(enumerated), max_products)
        logger.info(f"Nested symmetry groups at p={p}: counting over one group with weight {weight}")
        for g in young_subgroup(enumerated, cap):
            counts[cycle_type_of(_compose_images(q, g.images))] += weight
        return _as_class_counts(p, counts)

    if p > cap:
        raise DegreeTooLarge(f"Non-nested integral of degree {p} exceeds the degree cap {cap}")
    _check_budget(ci.order_i * ci.order_jq, max_products)
    group_i = ci.group_i(cap)
    for t in ci.group_jq(cap):
        qt = _compose_images(q, t.images)
        for r in group_i:
            counts[cycle_type_of(_compose_images(qt, r.images))] += 1
    logger.debug(f"Enumerated {len(group_i) * ci.order_jq} products at p={p}")
    return _as_class_counts(p, counts)


def class_counts(
    ci: CanonicalIntegral, max_products: int = DEFAULT_MAX_PRODUCTS, cap: int = DEFAULT_DEGREE_CAP
) -> ClassCounts:
    """Count N[c] = #{(R, T) in G_I x G_JQ : Q*T*R in c}.

    Raises:
        DegreeTooLarge: If the enumeration exceeds the work budget or degree cap.
    """
    return _class_counts(ci.rows, ci.cols, ci.exchange, max_products, cap)


def class_counts_via_gj(
    ci: CanonicalIntegral, max_products: int = DEFAULT_MAX_PRODUCTS, cap: int = DEFAULT_DEGREE_CAP
) -> ClassCounts:
    """Count N[c] = #{(R, S) in G_I x G_J : S*Q*R in c} by full enumeration."""
    _check_budget(ci.order_i * ci.order_j, max_products)
    q = ci.exchange.images
    group_i = ci.group_i(cap)
    counts: Counter = Counter()
    for s in ci.group_j(cap):
        sq = _compose_images(s.images, q)
        for r in group_i:
            counts[cycle_type_of(_compose_images(sq, r.images))] += 1
    return _as_class_counts(ci.degree, counts)


@lru_cache(maxsize=None)
def _xi(c: Partition) -> RationalFunction:
    p = c.weight
    scale = factorial(p) ** 2
    total = ZERO
    for f in partitions_of(p):
        chi = character(f, c)
        if chi:
            total = total + RationalFunction(Fraction(dim_sp(f) ** 2 * chi, scale)) / dim_un(f)
    return total


def xi(c: Sequence[int]) -> RationalFunction:
    """The primitive integral of class c: sum_f d_f^2 chi_f(c) / ((p!)^2 D_f(n))."""
    return _xi(Partition.from_parts(c))


def evaluate_gtm(
    ci: Union[CanonicalIntegral, ZeroIntegral],
    max_products: int = DEFAULT_MAX_PRODUCTS,
    cap: int = DEFAULT_DEGREE_CAP,
) -> RationalFunction:
    """Exact value of a canonical integral as sum_c N[c] xi[c]."""
    if isinstance(ci, ZeroIntegral):
        return ZERO
    total = ZERO
    for c, count in class_counts(ci, max_products, cap).nonzero():
        total = total + count * xi(c)
    return total


def evaluate_spec(
    spec: IntegralSpec, max_products: int = DEFAULT_MAX_PRODUCTS, cap: int = DEFAULT_DEGREE_CAP
) -> RationalFunction:
    return evaluate_gtm(canonicalize(spec), max_products, cap)


def conjugate(ci: CanonicalIntegral) -> CanonicalIntegral:
    """Swap U* and U factors; the exchange becomes Q^-1."""
    return _normalized(ci.rows, ci.exchanged_cols, ci.exchange.inverse())


def transpose(ci: CanonicalIntegral) -> CanonicalIntegral:
    """Swap row and column labels of every factor."""
    spec = to_spec(ci)
    flipped = IntegralSpec(
        tuple((j, i, m) for i, j, m in spec.conj_factors),
        tuple((l, k, m) for k, l, m in spec.plain_factors),
    )
    return canonicalize(flipped)


def symmetry_transforms(ci: CanonicalIntegral) -> List[CanonicalIntegral]:
    """The conjugate-swapped, transposed and conjugate-transposed variants."""
    swapped = conjugate(ci)
    return [swapped, transpose(ci), transpose(swapped)]


# Builders for the standard diagram families.


def primitive_spec(c: Sequence[int]) -> IntegralSpec:
    """All labels distinct, exchange of cycle type c."""
    q = permutation_of_type(c)
    return IntegralSpec(
        tuple((x, x, 1) for x in range(1, q.degree + 1)),
        tuple((x, q(x), 1) for x in range(1, q.degree + 1)),
    )


def stack_spec(*parts: int) -> IntegralSpec:
    """Disconnected lines |U_kk|^(2 p_k)."""
    factors = tuple((k, k, m) for k, m in enumerate(parts, start=1) if m)
    return IntegralSpec(factors, factors)


def fan_spec(*parts: int) -> IntegralSpec:
    """One row feeding one column per part: prod_k |U_1k|^(2 m_k)."""
    factors = tuple((1, k, m) for k, m in enumerate(parts, start=1) if m)
    return IntegralSpec(factors, factors)


def z_spec(m1: int, m2: int, m3: int) -> IntegralSpec:
    """|U_11|^(2 m1) |U_12|^(2 m2) |U_22|^(2 m3)."""
    factors = tuple((i, j, m) for i, j, m in ((1, 1, m1), (1, 2, m2), (2, 2, m3)) if m)
    return IntegralSpec(factors, factors)


def special_double_fan_spec(alpha: int) -> IntegralSpec:
    """Fully opened double fan with alpha columns of each crossing pattern."""
    conj = tuple((1 if k <= alpha else 2, k, 1) for k in range(1, 2 * alpha + 1))
    plain = tuple((1, k + alpha, 1) for k in range(1, alpha + 1)) + tuple(
        (2, k, 1) for k in range(1, alpha + 1)
    )
    return IntegralSpec(conj, plain)


# Text and JSON grammar.

_SECTION = re.compile(r"\s*(conj|plain)\s*:", re.IGNORECASE)
_LABEL = re.compile(r"^[A-Za-z0-9_]+$")


def _label(token: str) -> Label:
    return int(token) if token.isdigit() else token


def _parse_factor(body: str, offset: int) -> Factor:
    fields = body.split(",")
    if len(fields) not in (2, 3):
        raise ParseError(f"Expected 'row,col[,mult]', got {body.strip()!r}", offset + len(body) - len(body.lstrip()))
    tokens = []
    cursor = offset
    position = offset
    for item in fields:
        position = cursor + len(item) - len(item.lstrip())
        token = item.strip()
        if not _LABEL.match(token):
            raise ParseError(f"Invalid index label {token!r}", position)
        tokens.append(token)
        cursor += len(item) + 1
    mult = 1
    if len(tokens) == 3:
        if not tokens[2].isdigit() or int(tokens[2]) < 1:
            raise ParseError(f"Multiplicity must be a positive integer, got {tokens[2]!r}", position)
        mult = int(tokens[2])
    return (_label(tokens[0]), _label(tokens[1]), mult)


def _parse_text(text: str) -> IntegralSpec:
    sections: Dict[str, List[Factor]] = {"conj": [], "plain": []}
    current = None
    for match in re.finditer(r"[^;\n]+", text):
        segment, start = match.group(0), match.start()
        header = _SECTION.match(segment)
        if header:
            current = header.group(1).lower()
            body, offset = segment[header.end():], start + header.end()
        else:
            body, offset = segment, start
        if not body.strip():
            continue
        if current is None:
            raise ParseError("Factor before any 'conj:' or 'plain:' section", offset + len(body) - len(body.lstrip()))
        sections[current].append(_parse_factor(body, offset))
    if current is None:
        raise ParseError("Expected a 'conj:' or 'plain:' section", 0)
    return IntegralSpec(tuple(sections["conj"]), tuple(sections["plain"]))


def _parse_json(text: str) -> IntegralSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON: {e.msg}", e.pos) from e
    if not isinstance(data, dict) or not set(data) <= {"conj", "plain"}:
        raise ParseError("JSON integral must be an object with 'conj' and 'plain' lists", 0)
    sections = {}
    for name in ("conj", "plain"):
        entries = data.get(name, [])
        if not isinstance(entries, list):
            raise ParseError(f"'{name}' must be a list of factors", 0)
        factors = []
        for entry in entries:
            if (
                not isinstance(entry, list)
                or len(entry) not in (2, 3)
                or not all(isinstance(label, (int, str)) and not isinstance(label, bool) for label in entry[:2])
                or (len(entry) == 3 and (not isinstance(entry[2], int) or isinstance(entry[2], bool) or entry[2] < 1))
            ):
                raise ParseError(f"Invalid {name} factor {entry!r}", 0)
            factors.append(tuple(entry))
        sections[name] = tuple(factors)
    return IntegralSpec(sections["conj"], sections["plain"])


def parse_integral(text: str) -> IntegralSpec:
    """Parse ``conj: i,j[,m]; ... plain: k,l[,m]; ...`` or the equivalent JSON object.

    Raises:
        ParseError: On malformed input, with the character position.
    """
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    return _parse_text(text)
