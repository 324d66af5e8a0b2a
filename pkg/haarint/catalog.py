"""Catalog of named reference diagrams.

Entries are loaded from a JSON file (by default the one shipped in
``haarint/data``) and carry the integral text, an optional closed-form
expression and the exact expected value in factored form.
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from haarint.integrals import IntegralSpec, parse_integral
from haarint.ratfield import Polynomial, RationalFunction, from_factored
from haarint.verify import SuiteItem

logger = logging.getLogger(__name__)

DEFAULT_DIAGRAMS_FILE = Path(__file__).parent / "data" / "diagrams.json"


def expected_value(entry: Dict[str, Any]) -> Optional[RationalFunction]:
    """The expected value of a catalog entry: constant * num(n) * prod (n + a)^m."""
    expected = entry.get("expected")
    if expected is None:
        return None
    value = from_factored(Fraction(expected["constant"]), [tuple(root) for root in expected.get("roots", [])])
    if "num" in expected:
        value = value * RationalFunction(Polynomial(int(c) for c in expected["num"]))
    return value


class DiagramCatalog:
    """Loads and serves the reference diagrams, grouped by category."""

    def __init__(self, diagrams_file: Union[str, Path, None] = None):
        """Initialize the DiagramCatalog.

        Args:
            diagrams_file: Path to the JSON file of diagram entries.
        """
        self.diagrams_file = Path(diagrams_file) if diagrams_file else DEFAULT_DIAGRAMS_FILE
        self.diagrams = self._load_diagrams()

        self.diagrams_by_category: Dict[str, List[Dict[str, Any]]] = {}
        for diagram in self.diagrams:
            self.diagrams_by_category.setdefault(diagram["category"], []).append(diagram)

        logger.debug(f"Loaded {len(self.diagrams)} diagrams from {self.diagrams_file}")

    def _load_diagrams(self) -> List[Dict[str, Any]]:
        try:
            with open(self.diagrams_file, "r", encoding="utf-8") as f:
                diagrams = json.load(f)
        except Exception as e:
            logger.error(f"Error loading diagrams from {self.diagrams_file}: {str(e)}")
            return []
        valid = []
        for diagram in diagrams:
            if "name" not in diagram or "category" not in diagram or "integral" not in diagram:
                logger.warning(f"Ignoring incomplete diagram entry: {diagram!r}")
                continue
            valid.append(diagram)
        return valid

    def get_diagrams(self, category: Optional[str] = None) -> List[Dict[str, Any]]:
        """Entries of one category, or all entries when no category is given."""
        if category is None:
            return list(self.diagrams)
        if category not in self.diagrams_by_category:
            logger.warning(f"No diagrams found for category: {category}")
            return []
        return list(self.diagrams_by_category[category])

    def get_diagram(self, name: str) -> Optional[Dict[str, Any]]:
        for diagram in self.diagrams:
            if diagram["name"] == name:
                return diagram
        logger.warning(f"No diagram named {name}")
        return None

    def get_categories(self) -> List[str]:
        return list(self.diagrams_by_category)

    def spec(self, name: str) -> Optional[IntegralSpec]:
        diagram = self.get_diagram(name)
        return parse_integral(diagram["integral"]) if diagram else None

    def acceptance_suite(self) -> List[SuiteItem]:
        """Entries flagged for the Monte-Carlo acceptance run."""
        return [
            SuiteItem(diagram["name"], parse_integral(diagram["integral"]), expected_value(diagram))
            for diagram in self.diagrams
            if diagram.get("acceptance")
        ]
