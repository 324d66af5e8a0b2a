"""Characters and dimensions of S_p and U(n) irreducible representations.

Characters come from the Murnaghan-Nakayama rule on beta-sets (bead
positions on an abacus). U(n) dimensions are built from the content/hook
product, which is a polynomial in n; the Vandermonde ratio is available as an
independent integer-point check.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Dict, List, Sequence, Tuple

from haarint.errors import DegreeTooLarge, WeightMismatch
from haarint.ratfield import RationalFunction, from_factored
from haarint.symgroup import DEFAULT_DEGREE_CAP, Partition, class_size, partitions_of

logger = logging.getLogger(__name__)


def _beta_set(f: Sequence[int]) -> Tuple[int, ...]:
    length = len(f)
    return tuple(part + length - 1 - i for i, part in enumerate(f))


@lru_cache(maxsize=None)
def _mn_character(beads: frozenset, cycles: Tuple[int, ...]) -> int:
    if not cycles:
        return 1
    r, rest = cycles[0], cycles[1:]
    total = 0
    for bead in beads:
        target = bead - r
        if target < 0 or target in beads:
            continue
        crossed = sum(1 for other in beads if target < other < bead)
        moved = (beads - {bead}) | {target}
        total += (-1) ** crossed * _mn_character(moved, rest)
    return total


def character(f: Sequence[int], c: Sequence[int]) -> int:
    """The character of the irreducible f of S_p on the class c.

    Raises:
        WeightMismatch: If f and c are partitions of different integers.
    """
    f, c = Partition(f), Partition.from_parts(c)
    if f.weight != c.weight:
        raise WeightMismatch(f"Signature {f} has weight {f.weight} but class {c} has weight {c.weight}")
    return _mn_character(frozenset(_beta_set(f)), tuple(c))


def hook_lengths(f: Sequence[int]) -> List[int]:
    """Hook lengths of the Young diagram of f, row by row."""
    f = Partition(f)
    columns = f.conjugate()
    return [f[i] - j + columns[j] - i - 1 for i in range(len(f)) for j in range(f[i])]


def dim_sp(f: Sequence[int]) -> int:
    """Dimension of the S_p irreducible f by the hook-length formula."""
    f = Partition(f)
    return factorial(f.weight) // prod(hook_lengths(f))


def dim_un(f: Sequence[int]) -> RationalFunction:
    """Dimension of the U(n) irreducible f: prod over cells (n + j - i) / prod hooks."""
    f = Partition(f)
    contents = Counter(j - i for i in range(len(f)) for j in range(f[i]))
    return from_factored(Fraction(1, prod(hook_lengths(f))), sorted(contents.items()))


def dim_un_vandermonde(f: Sequence[int], n0: int) -> int:
    """Dimension of the U(n0) irreducible f as a ratio of Vandermonde determinants."""
    f = Partition(f)
    if len(f) > n0:
        return 0
    padded = list(f) + [0] * (n0 - len(f))
    shifted = [padded[i] + n0 - 1 - i for i in range(n0)]
    top = prod(shifted[i] - shifted[j] for i in range(n0) for j in range(i + 1, n0))
    bottom = prod(j - i for i in range(n0) for j in range(i + 1, n0))
    return top // bottom


@dataclass(frozen=True)
class CharacterTable:
    """Character table of S_p.

    Rows are signatures in reverse lexicographic order; columns are classes
    starting from the identity class (1^p).
    """

    degree: int
    rows: Tuple[Partition, ...]
    columns: Tuple[Partition, ...]
    values: Tuple[Tuple[int, ...], ...]
    class_sizes: Tuple[int, ...]

    def value(self, f: Sequence[int], c: Sequence[int]) -> int:
        return self.values[self.rows.index(Partition(f))][self.columns.index(Partition.from_parts(c))]

    def dimensions(self) -> Dict[Partition, int]:
        return {f: row[0] for f, row in zip(self.rows, self.values)}

    def is_orthogonal(self) -> bool:
        """Check row orthogonality weighted by class sizes and column orthogonality."""
        order = factorial(self.degree)
        for a, row_a in enumerate(self.values):
            for b, row_b in enumerate(self.values):
                total = sum(size * x * y for size, x, y in zip(self.class_sizes, row_a, row_b))
                if total != (order if a == b else 0):
                    return False
        for k, size_k in enumerate(self.class_sizes):
            for m in range(len(self.columns)):
                total = sum(row[k] * row[m] for row in self.values)
                if total != (order // size_k if k == m else 0):
                    return False
        return True


def character_table(p: int, cap: int = DEFAULT_DEGREE_CAP) -> CharacterTable:
    """Build the character table of S_p.

    Raises:
        DegreeTooLarge: If p exceeds the degree cap.
    """
    if p > cap:
        raise DegreeTooLarge(f"Character table of S_{p} exceeds the degree cap {cap}")
    rows = tuple(partitions_of(p))
    columns = tuple(reversed(rows))
    values = tuple(tuple(character(f, c) for c in columns) for f in rows)
    logger.debug(f"Built character table of S_{p} with {len(rows)} classes")
    return CharacterTable(
        degree=p,
        rows=rows,
        columns=columns,
        values=values,
        class_sizes=tuple(class_size(c) for c in columns),
    )
