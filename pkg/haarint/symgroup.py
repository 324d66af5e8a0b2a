"""Permutations of {1..p}, cycle types and Young subgroups.

Permutations are stored in one-line notation (a tuple of 1-based images)
and compose right factor first: ``(p1 * p2)(x) == p1(p2(x))``. Cycle
notation is used only for text input and output.
"""

import itertools
import logging
import re
from collections import Counter
from functools import lru_cache
from math import factorial, prod
from typing import Dict, Hashable, Iterator, List, Sequence, Tuple

from haarint.errors import DegreeMismatch, DegreeTooLarge, ParseError

logger = logging.getLogger(__name__)

DEFAULT_DEGREE_CAP = 8


class Partition(tuple):
    """A weakly decreasing tuple of positive integers.

    Serves both as a cycle type (conjugacy class of S_p) and as the
    signature labelling an irreducible representation.
    """

    def __new__(cls, parts: Sequence[int] = ()):
        parts = tuple(int(x) for x in parts)
        if any(x < 1 for x in parts):
            raise ValueError(f"Partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"Partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def from_parts(cls, parts: Sequence[int]) -> "Partition":
        """Build a partition from parts in any order."""
        return cls(sorted(parts, reverse=True))

    @property
    def weight(self) -> int:
        return sum(self)

    def multiplicities(self) -> Dict[int, int]:
        return dict(Counter(self))

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for part in self if part > j) for j in range(self[0]))

    def __repr__(self) -> str:
        return f"Partition({tuple(self)!r})"

    def __str__(self) -> str:
        return format_partition(self)


class Permutation:
    """A bijection of {1..p} in one-line notation."""

    __slots__ = ("_images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"Not a permutation of 1..{len(images)}: {images}")
        self._images = images

    @classmethod
    def _trusted(cls, images: Tuple[int, ...]) -> "Permutation":
        obj = object.__new__(cls)
        obj._images = images
        return obj

    @classmethod
    def identity(cls, p: int) -> "Permutation":
        return cls._trusted(tuple(range(1, p + 1)))

    @property
    def images(self) -> Tuple[int, ...]:
        return self._images

    @property
    def degree(self) -> int:
        return len(self._images)

    @property
    def is_identity(self) -> bool:
        return all(image == x for x, image in enumerate(self._images, start=1))

    def __call__(self, x: int) -> int:
        return self._images[x - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self._images)
        for x, image in enumerate(self._images, start=1):
            inv[image - 1] = x
        return Permutation._trusted(tuple(inv))

    def cycles(self, include_fixed: bool = False) -> List[Tuple[int, ...]]:
        """Disjoint cycles, each starting at its smallest point."""
        seen = set()
        result = []
        for start in range(1, len(self._images) + 1):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            x = self._images[start - 1]
            while x != start:
                cycle.append(x)
                seen.add(x)
                x = self._images[x - 1]
            if len(cycle) > 1 or include_fixed:
                result.append(tuple(cycle))
        return result

    def support(self) -> frozenset:
        """The set of moved points."""
        return frozenset(x for x, image in enumerate(self._images, start=1) if image != x)

    def cycle_type(self) -> Partition:
        return cycle_type_of(self._images)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._images == other._images

    def __hash__(self) -> int:
        return hash(self._images)

    def __repr__(self) -> str:
        return f"Permutation({list(self._images)!r})"

    def __str__(self) -> str:
        return format_cycles(self)


def identity(p: int) -> Permutation:
    return Permutation.identity(p)


def compose(p1: Permutation, p2: Permutation) -> Permutation:
    """The product p1 * p2, mapping x to p1(p2(x))."""
    if p1.degree != p2.degree:
        raise DegreeMismatch(f"Cannot compose permutations of degree {p1.degree} and {p2.degree}")
    left = p1.images
    return Permutation._trusted(tuple(left[image - 1] for image in p2.images))


def inverse(q: Permutation) -> Permutation:
    return q.inverse()


def cycle_type(q: Permutation) -> Partition:
    return q.cycle_type()


def cycle_type_of(images: Sequence[int]) -> Partition:
    """Cycle type of a permutation given as a sequence of 1-based images."""
    p = len(images)
    seen = [False] * p
    lengths = []
    for start in range(p):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = images[x] - 1
            length += 1
        lengths.append(length)
    lengths.sort(reverse=True)
    return Partition(lengths)


def permutation_of_type(c: Sequence[int]) -> Permutation:
    """A representative of the class c: consecutive cycles (1..c1)(c1+1..c1+c2)..."""
    images = []
    start = 1
    for length in Partition.from_parts(c):
        images.extend(range(start + 1, start + length))
        images.append(start)
        start += length
    return Permutation._trusted(tuple(images))


def centralizer_order(c: Sequence[int]) -> int:
    """Order of the centralizer of an element of cycle type c: prod j^a_j a_j!."""
    return prod(j ** a * factorial(a) for j, a in Counter(c).items())


def class_size(c: Sequence[int]) -> int:
    """Number of elements of S_p with cycle type c."""
    return factorial(sum(c)) // centralizer_order(c)


def enumerate_sp(p: int, cap: int = DEFAULT_DEGREE_CAP) -> Iterator[Permutation]:
    """Yield every element of S_p exactly once.

    Raises:
        DegreeTooLarge: If p exceeds the enumeration cap.
    """
    if p < 0:
        raise ValueError("degree must be nonnegative")
    if p > cap:
        raise DegreeTooLarge(f"Refusing to enumerate S_{p}: degree cap is {cap}")
    for images in itertools.permutations(range(1, p + 1)):
        yield Permutation._trusted(images)


def young_blocks(indices: Sequence[Hashable]) -> List[Tuple[int, ...]]:
    """Positions (1-based) grouped by equal value, in first-occurrence order."""
    blocks: Dict[Hashable, List[int]] = {}
    for position, value in enumerate(indices, start=1):
        blocks.setdefault(value, []).append(position)
    return [tuple(block) for block in blocks.values()]


def young_subgroup_order(indices: Sequence[Hashable]) -> int:
    return prod(factorial(len(block)) for block in young_blocks(indices))


def young_subgroup(indices: Sequence[Hashable], cap: int = DEFAULT_DEGREE_CAP) -> List[Permutation]:
    """The position permutations that leave the value sequence unchanged.

    The group is the direct product of the symmetric groups on the blocks of
    equal values; the identity is always listed first.

    Raises:
        DegreeTooLarge: If the group order exceeds cap!.
    """
    blocks = young_blocks(indices)
    order = prod(factorial(len(block)) for block in blocks)
    if order > factorial(cap):
        raise DegreeTooLarge(f"Young subgroup of order {order} exceeds {cap}!")
    p = len(indices)
    group = []
    for arrangement in itertools.product(*(itertools.permutations(block) for block in blocks)):
        images = list(range(1, p + 1))
        for block, image in zip(blocks, arrangement):
            for x, y in zip(block, image):
                images[x - 1] = y
        group.append(Permutation._trusted(tuple(images)))
    return group


@lru_cache(maxsize=None)
def _partitions(p: int, largest: int) -> Tuple[Tuple[int, ...], ...]:
    if p == 0:
        return ((),)
    result = []
    for k in range(min(p, largest), 0, -1):
        for rest in _partitions(p - k, k):
            result.append((k,) + rest)
    return tuple(result)


def partitions_of(p: int) -> List[Partition]:
    """All partitions of p in reverse lexicographic order, e.g. (3), (2,1), (1,1,1)."""
    if p < 0:
        raise ValueError("cannot partition a negative integer")
    return [Partition(parts) for parts in _partitions(p, p)]


def format_partition(c: Sequence[int]) -> str:
    """Exponent notation, e.g. (2,1^2)."""
    pieces = []
    for part, group in itertools.groupby(c):
        count = len(list(group))
        pieces.append(str(part) if count == 1 else f"{part}^{count}")
    return "(" + ",".join(pieces) + ")"


_PARTITION_ITEM = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+)\s*)?$")


def parse_partition(text: str) -> Partition:
    """Parse "2,1", "(2,1^2)" or "2 1 1" into a Partition."""
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    if not body.strip():
        return Partition()
    parts: List[int] = []
    offset = 0
    for item in re.split(r"[,\s]+", body.strip()):
        match = _PARTITION_ITEM.match(item)
        if not match or int(match.group(1)) < 1:
            raise ParseError(f"Invalid partition item {item!r}", text.find(item, offset))
        offset = text.find(item, offset) + len(item)
        parts.extend([int(match.group(1))] * int(match.group(2) or 1))
    return Partition.from_parts(parts)


def format_cycles(q: Permutation) -> str:
    """Cycle notation without fixed points, e.g. "(1 2)(3 4)"; "e" for the identity."""
    cycles = q.cycles()
    if not cycles:
        return "e"
    return "".join("(" + " ".join(str(x) for x in cycle) + ")" for cycle in cycles)


def parse_cycles(text: str, p: int) -> Permutation:
    """Parse cycle notation such as "(1 2)(3 4)", "(1,2,3)" or "e" into S_p."""
    stripped = text.strip()
    if stripped in ("", "e", "()"):
        return Permutation.identity(p)
    images = list(range(1, p + 1))
    seen = set()
    position = 0
    for match in re.finditer(r"\(([^()]*)\)|(\S)", text):
        if match.group(2) is not None:
            raise ParseError(f"Unexpected character {match.group(2)!r} in cycle notation", match.start())
        position = match.start()
        points = [token for token in re.split(r"[,\s]+", match.group(1).strip()) if token]
        cycle = []
        for token in points:
            if not token.isdigit():
                raise ParseError(f"Invalid cycle entry {token!r}", position)
            x = int(token)
            if not 1 <= x <= p:
                raise ParseError(f"Point {x} outside 1..{p}", position)
            if x in seen:
                raise ParseError(f"Point {x} appears twice", position)
            seen.add(x)
            cycle.append(x)
        for x, y in zip(cycle, cycle[1:] + cycle[:1]):
            images[x - 1] = y
    return Permutation._trusted(tuple(images))
