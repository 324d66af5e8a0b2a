"""Command-line front end for haarint.

Subcommands: eval, tables, classify, mc-check and closed. Results are written
to stdout; log records go to stderr. Exit codes: 0 success, 2 malformed input
or an index that does not fit, 3 work budget exceeded, 4 cross-check
mismatch, 5 Monte-Carlo check flagged, 1 any other failure.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from haarint import __version__
from haarint.catalog import DiagramCatalog
from haarint.closedforms import evaluate_closed, expression_to_spec, parse_closed
from haarint.errors import (
    CrossCheckMismatch,
    DegreeTooLarge,
    HaarIntError,
    IndexOutOfRange,
    InvalidClosedGraph,
    ParseError,
    PoleAtValue,
)
from haarint.integrals import (
    ZeroIntegral,
    canonicalize,
    class_counts,
    classify_orderly,
    evaluate_gtm,
    evaluate_spec,
    parse_integral,
)
from haarint.ratfield import RationalFunction
from haarint.report_generator import ReportGenerator, build_tables, render_json_lines, render_tables, tables_to_json
from haarint.symgroup import format_cycles
from haarint.utils import load_config, setup_logging
from haarint.verify import MonteCarloVerifier, SuiteItem

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_MISMATCH = 4
EXIT_STATISTICAL = 5


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default="config.yaml", help="Path to configuration file")
    common.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    common.add_argument(
        "--json",
        action="store_true",
        help="Emit JSON carrying the exact coefficients together with the factored text and LaTeX forms",
    )
    common.add_argument("--latex", action="store_true", help="Render values as LaTeX")

    parser = argparse.ArgumentParser(
        prog="haarint",
        description="Exact monomial integrals over U(n) with Haar measure, as rational functions of n.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    eval_parser = subparsers.add_parser(
        "eval",
        parents=[common],
        help="Evaluate a monomial integral",
        description="Print the exact value in factored form; with --json, print the coefficients and both renderings.",
    )
    eval_parser.add_argument("integral", type=str, help='Integral text such as "conj: 1,1; plain: 1,1", JSON, or - for stdin')

    tables_parser = subparsers.add_parser("tables", parents=[common], help="Print character and value tables")
    tables_parser.add_argument("--pmax", type=int, default=3, help="Largest degree to tabulate")

    classify_parser = subparsers.add_parser("classify", parents=[common], help="Show the canonical form and class counts")
    classify_parser.add_argument("integral", type=str, help="Integral text, JSON, or - for stdin")

    mc_parser = subparsers.add_parser("mc-check", parents=[common], help="Check exact values by Monte-Carlo sampling")
    mc_parser.add_argument("integral", type=str, nargs="?", help="Integral text, JSON, or - for stdin")
    mc_parser.add_argument("--suite", type=str, help="Catalog suite: 'acceptance' or a category name")
    mc_parser.add_argument("--n", type=int, nargs="+", default=[3], help="Matrix dimensions to sample at")
    mc_parser.add_argument("--samples", type=int, help="Number of Haar samples")
    mc_parser.add_argument("--seed", type=int, help="Master seed")
    mc_parser.add_argument("--jobs", type=int, help="Worker processes")
    mc_parser.add_argument("--output", type=str, help="Also write a report file (.md or .json)")

    closed_parser = subparsers.add_parser("closed", parents=[common], help="Evaluate a closed-form expression")
    closed_parser.add_argument("expression", type=str, help='e.g. "z 1 1 1", "fan 3", "stack 2 1", "[Aa+2Ab][Aa]"')
    closed_parser.add_argument("--cross-check", action="store_true", help="Re-derive the value by class counting")

    return parser.parse_args(argv)


def _read_input(text: str) -> str:
    return sys.stdin.read() if text == "-" else text


def _render(value: RationalFunction, latex: bool) -> str:
    return value.to_latex() if latex else str(value)


def _value_payload(value: RationalFunction) -> Dict[str, Any]:
    return {"value": value.to_json(), "text": str(value), "latex": value.to_latex()}


def run_eval(args: argparse.Namespace, config: Dict[str, Dict[str, Any]]) -> int:
    spec = parse_integral(_read_input(args.integral))
    ci = canonicalize(spec)
    if isinstance(ci, ZeroIntegral):
        logger.info(f"Integral vanishes: {ci.reason}")
    value = evaluate_gtm(ci, config["engine"]["max_products"], config["engine"]["degree_cap"])
    if args.json:
        print(json.dumps({"integral": spec.to_text(), **_value_payload(value)}, sort_keys=True))
    else:
        print(_render(value, args.latex))
    return EXIT_OK


def run_tables(args: argparse.Namespace, config: Dict[str, Dict[str, Any]]) -> int:
    if args.pmax < 1:
        logger.error("--pmax must be at least 1")
        return EXIT_INPUT
    tables = build_tables(args.pmax, config["engine"]["degree_cap"])
    if args.json:
        print(json.dumps(tables_to_json(tables), indent=2, sort_keys=True))
    else:
        print(render_tables(tables, args.latex))
    return EXIT_OK


def run_classify(args: argparse.Namespace, config: Dict[str, Dict[str, Any]]) -> int:
    spec = parse_integral(_read_input(args.integral))
    ci = canonicalize(spec)
    if isinstance(ci, ZeroIntegral):
        if args.json:
            print(json.dumps({"vanishing": True, "reason": ci.reason}, sort_keys=True))
        else:
            print(f"vanishing: {ci.reason}")
        return EXIT_OK

    counts = class_counts(ci, config["engine"]["max_products"], config["engine"]["degree_cap"])
    summary = {
        "p": ci.degree,
        "I": list(ci.rows),
        "J": list(ci.cols),
        "Q": format_cycles(ci.exchange),
        "order_i": ci.order_i,
        "order_j": ci.order_j,
        "order_jq": ci.order_jq,
        "orderly": classify_orderly(ci).value,
        "counts": {str(c): count for c, count in counts.counts.items()},
    }
    if args.json:
        print(json.dumps(summary, sort_keys=True))
        return EXIT_OK

    lines = [
        f"p = {ci.degree}",
        f"I = {' '.join(str(i) for i in ci.rows)}",
        f"J = {' '.join(str(j) for j in ci.cols)}",
        f"Q = {summary['Q']}",
        f"|G_I| = {ci.order_i}",
        f"|G_J| = {ci.order_j}",
        f"|G_JQ| = {ci.order_jq}",
        f"orderly = {summary['orderly']}",
    ]
    lines.extend(f"N{c} = {count}" for c, count in counts.counts.items())
    print("\n".join(lines))
    return EXIT_OK


def _suite_items(name: str) -> Optional[List[SuiteItem]]:
    catalog = DiagramCatalog()
    if name == "acceptance":
        return catalog.acceptance_suite()
    if name not in catalog.get_categories():
        return None
    return [SuiteItem(entry["name"], parse_integral(entry["integral"])) for entry in catalog.get_diagrams(name)]


def run_mc_check(args: argparse.Namespace, config: Dict[str, Dict[str, Any]]) -> int:
    if args.jobs is not None:
        config["montecarlo"]["jobs"] = args.jobs
    verifier = MonteCarloVerifier(config)

    if args.suite:
        items = _suite_items(args.suite)
        if items is None:
            logger.error(f"Unknown suite: {args.suite}")
            return EXIT_INPUT
        reports = verifier.check_suite(items, args.n, args.samples, args.seed)
    elif args.integral:
        spec = parse_integral(_read_input(args.integral))
        reports = [verifier.estimate(spec, n, args.samples, args.seed) for n in args.n]
    else:
        logger.error("mc-check needs an integral or --suite")
        return EXIT_INPUT

    print(render_json_lines(reports))
    if args.output:
        ReportGenerator().generate_report(reports, Path(args.output))

    flagged = [report for report in reports if report.flagged]
    if flagged:
        logger.error(f"{len(flagged)} of {len(reports)} checks flagged")
        return EXIT_STATISTICAL
    return EXIT_OK


def run_closed(args: argparse.Namespace, config: Dict[str, Dict[str, Any]]) -> int:
    cap = config["engine"]["degree_cap"]
    expr = parse_closed(args.expression)
    value = evaluate_closed(expr, cap)

    agreed = None
    if args.cross_check:
        reference = evaluate_spec(expression_to_spec(expr), config["engine"]["max_products"], cap)
        if reference != value:
            raise CrossCheckMismatch(f"{expr}: closed form gives {value}, class counting gives {reference}")
        agreed = True
        logger.info(f"Cross-check passed for {expr}")

    if args.json:
        print(json.dumps({"expression": str(expr), "cross_check": agreed, **_value_payload(value)}, sort_keys=True))
    else:
        print(_render(value, args.latex))
    return EXIT_OK


COMMANDS = {
    "eval": run_eval,
    "tables": run_tables,
    "classify": run_classify,
    "mc-check": run_mc_check,
    "closed": run_closed,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the application; returns the exit code."""
    args = parse_arguments(argv)
    config = load_config(args.config)
    log_level = "DEBUG" if args.verbose else config["logging"]["level"]
    setup_logging(log_level, config["logging"]["file"])
    args.json = args.json or config["output"]["format"] == "json"
    args.latex = args.latex or bool(config["output"]["latex"])

    try:
        return COMMANDS[args.command](args, config)
    except (ParseError, IndexOutOfRange, InvalidClosedGraph, PoleAtValue) as e:
        logger.error(str(e))
        return EXIT_INPUT
    except DegreeTooLarge as e:
        logger.error(str(e))
        return EXIT_BUDGET
    except CrossCheckMismatch as e:
        logger.error(str(e))
        return EXIT_MISMATCH
    except HaarIntError as e:
        logger.error(str(e))
        return EXIT_ERROR
