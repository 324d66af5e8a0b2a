"""Exception hierarchy for the haarint package.

Library code raises these; the command-line front end maps them onto exit
codes.
"""


class HaarIntError(ValueError):
    """Base class for every failure raised by haarint."""


class DivisionByZero(HaarIntError, ZeroDivisionError):
    """Division by the zero rational function."""


class PoleAtValue(HaarIntError):
    """A rational function was evaluated where its denominator vanishes."""

    def __init__(self, value, n0):
        super().__init__(f"{value} has a pole at n = {n0}")
        self.n0 = n0


class DegreeMismatch(HaarIntError):
    """Two permutations of different degree were combined."""


class DegreeTooLarge(HaarIntError):
    """A computation exceeds the configured degree cap or work budget."""


class WeightMismatch(HaarIntError):
    """A signature and a class label are partitions of different integers."""


class InvalidClosedGraph(HaarIntError):
    """A closed double-fan whose solid and dotted line totals disagree."""


class InvalidExchange(HaarIntError):
    """A permutation that does not map the column labels onto J_Q."""


class IndexOutOfRange(HaarIntError):
    """An index label falls outside 1..n for a concrete dimension n."""


class CrossCheckMismatch(HaarIntError):
    """A closed-form value disagrees with the group-theoretical engine."""


class ParseError(HaarIntError):
    """Malformed integral or closed-form text.

    Attributes:
        position: Zero-based character offset of the offending input.
    """

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position
