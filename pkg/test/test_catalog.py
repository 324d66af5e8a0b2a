import json

import pytest

from haarint.catalog import DiagramCatalog, expected_value
from haarint.closedforms import evaluate_closed, parse_closed
from haarint.integrals import evaluate_spec, parse_integral
from haarint.ratfield import ZERO, Polynomial, RationalFunction, from_factored

CATALOG = DiagramCatalog()


def test_categories():
    assert set(CATALOG.get_categories()) == {
        "primitive",
        "stack",
        "special_double_fan",
        "fan",
        "non_orderly",
        "double_fan",
        "vanishing",
    }
    assert len(CATALOG.get_diagrams("primitive")) == 1 + 2 + 3 + 5 + 7
    assert len(CATALOG.get_diagrams()) == len(CATALOG.diagrams)


def test_missing_entries():
    assert CATALOG.get_diagrams("no such category") == []
    assert CATALOG.get_diagram("no such diagram") is None
    assert CATALOG.spec("no such diagram") is None


def test_expected_value():
    assert expected_value({"expected": {"constant": "-2", "roots": [[0, -1]]}}) == from_factored(-2, [(0, -1)])
    with_num = {"expected": {"constant": "1/2", "num": ["4", "2", "1"], "roots": [[3, -1]]}}
    assert expected_value(with_num) == RationalFunction(Polynomial([4, 2, 1]), Polynomial([6, 2]))
    assert expected_value({"expected": {"constant": "0"}}) == ZERO
    assert expected_value({}) is None


@pytest.mark.parametrize("entry", CATALOG.get_diagrams(), ids=lambda entry: entry["name"])
def test_catalog_values(entry):
    assert evaluate_spec(parse_integral(entry["integral"])) == expected_value(entry)


@pytest.mark.parametrize(
    "entry", [entry for entry in CATALOG.get_diagrams() if "closed" in entry], ids=lambda entry: entry["name"]
)
def test_catalog_closed_forms(entry):
    assert evaluate_closed(parse_closed(entry["closed"])) == expected_value(entry)


def test_acceptance_suite():
    suite = CATALOG.acceptance_suite()
    names = [item.name for item in suite]
    assert "sigma" in names
    assert "[Aa+2Ab][Aa]" in names
    assert "xi(1^4)" not in names
    assert all(item.expected is not None for item in suite)


def test_spec_lookup():
    assert CATALOG.spec("xi(2)") == parse_integral("conj: 1,1; 2,2; plain: 1,2; 2,1")


def test_unreadable_file_gives_empty_catalog(tmp_path):
    catalog = DiagramCatalog(tmp_path / "missing.json")
    assert catalog.get_diagrams() == []
    assert catalog.acceptance_suite() == []


def test_incomplete_entries_are_skipped(tmp_path):
    path = tmp_path / "diagrams.json"
    path.write_text(
        json.dumps(
            [
                {"name": "ok", "category": "custom", "integral": "conj: 1,1; plain: 1,1", "acceptance": True},
                {"name": "no integral", "category": "custom"},
            ]
        ),
        encoding="utf-8",
    )
    catalog = DiagramCatalog(path)
    assert [entry["name"] for entry in catalog.get_diagrams("custom")] == ["ok"]
    suite = catalog.acceptance_suite()
    assert len(suite) == 1
    assert suite[0].expected is None
