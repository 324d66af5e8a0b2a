"""Report Generator module for haarint.

Renders character tables, tables of integral values and Monte-Carlo reports
as plain text, Markdown, JSON and JSON lines. Output carries no timestamps,
so identical inputs always produce identical bytes.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

from haarint.closedforms import special_double_fan, stack_integral
from haarint.integrals import xi
from haarint.ratfield import RationalFunction
from haarint.reptheory import CharacterTable, character_table
from haarint.symgroup import DEFAULT_DEGREE_CAP, format_partition, partitions_of
from haarint.verify import McReport

logger = logging.getLogger(__name__)

CLASS_HEADER = "f\\c"


def render_character_table(table: CharacterTable) -> str:
    """Character table of S_p with class sizes written above the class labels."""
    first = max([len(CLASS_HEADER)] + [len(str(f)) for f in table.rows])
    cells = [str(c) for c in table.columns] + [str(size) for size in table.class_sizes]
    cells += [str(v) for row in table.values for v in row]
    width = max(len(cell) for cell in cells)

    def line(label: str, entries: Sequence[Any]) -> str:
        return label.ljust(first) + "".join("  " + str(entry).rjust(width) for entry in entries)

    lines = [f"Character table of S_{table.degree}"]
    lines.append(line("", table.class_sizes))
    lines.append(line(CLASS_HEADER, table.columns))
    lines.extend(line(str(f), row) for f, row in zip(table.rows, table.values))
    return "\n".join(lines)


def render_value_table(title: str, rows: Sequence[Tuple[str, RationalFunction]], latex: bool = False) -> str:
    """A titled two-column table of labels and exact values."""
    lines = [title]
    if not rows:
        return title
    width = max(len(label) for label, _ in rows)
    for label, value in rows:
        rendered = value.to_latex() if latex else str(value)
        lines.append(f"{label.ljust(width)}  {rendered}")
    return "\n".join(lines)


def primitive_rows(p_max: int) -> List[Tuple[str, RationalFunction]]:
    """xi[c] for every class of S_p, p = 1..p_max, identity class first."""
    return [("xi" + format_partition(c), xi(c)) for p in range(1, p_max + 1) for c in reversed(partitions_of(p))]


def stack_rows(p_max: int, cap: int = DEFAULT_DEGREE_CAP) -> List[Tuple[str, RationalFunction]]:
    rows = []
    for p in range(1, p_max + 1):
        for parts in partitions_of(p):
            label = "Xi(" + ",".join(str(part) for part in parts) + ")"
            rows.append((label, stack_integral(*parts, cap=cap)))
    return rows


def special_double_fan_rows(p_max: int, cap: int = DEFAULT_DEGREE_CAP) -> List[Tuple[str, RationalFunction]]:
    return [(f"alpha = {alpha}", special_double_fan(alpha, cap)) for alpha in range(1, p_max // 2 + 1)]


def _value_json(rows: Sequence[Tuple[str, RationalFunction]]) -> List[Dict[str, Any]]:
    return [{"label": label, "value": value.to_json(), "text": str(value)} for label, value in rows]


def _table_json(table: CharacterTable) -> Dict[str, Any]:
    return {
        "degree": table.degree,
        "rows": [str(f) for f in table.rows],
        "columns": [str(c) for c in table.columns],
        "class_sizes": list(table.class_sizes),
        "values": [list(row) for row in table.values],
    }


def build_tables(p_max: int, cap: int = DEFAULT_DEGREE_CAP) -> Dict[str, Any]:
    """Collect every table up to degree p_max.

    Raises:
        DegreeTooLarge: If p_max exceeds the degree cap.
    """
    tables = [character_table(p, cap) for p in range(1, p_max + 1)]
    logger.info(f"Built tables up to p={p_max}")
    return {
        "character_tables": tables,
        "primitive": primitive_rows(p_max),
        "stack": stack_rows(p_max, cap),
        "special_double_fan": special_double_fan_rows(p_max, cap),
    }


def render_tables(tables: Dict[str, Any], latex: bool = False) -> str:
    blocks = [render_character_table(table) for table in tables["character_tables"]]
    blocks.append(render_value_table("Primitive integrals", tables["primitive"], latex))
    blocks.append(render_value_table("Stack integrals", tables["stack"], latex))
    blocks.append(render_value_table("Special double fans [Aa]^alpha[Ab]^alpha", tables["special_double_fan"], latex))
    return "\n\n".join(blocks)


def tables_to_json(tables: Dict[str, Any]) -> Dict[str, Any]:
    return {
        "character_tables": [_table_json(table) for table in tables["character_tables"]],
        "primitive": _value_json(tables["primitive"]),
        "stack": _value_json(tables["stack"]),
        "special_double_fan": _value_json(tables["special_double_fan"]),
    }


def render_json_lines(reports: Sequence[McReport]) -> str:
    """One JSON object per report, keys sorted."""
    return "\n".join(json.dumps(report.to_dict(), sort_keys=True) for report in reports)


class ReportGenerator:
    """Writes Monte-Carlo verification reports to disk.

    The format follows the output suffix: ``.json`` for a JSON document,
    anything else for Markdown.
    """

    def generate_report(self, reports: Sequence[McReport], output_path: Union[str, Path]) -> None:
        """Generate a report of Monte-Carlo results.

        Args:
            reports: The reports to write.
            output_path: Path to save the report to.
        """
        output_path = Path(output_path)
        try:
            if output_path.suffix.lower() == ".json":
                self._generate_json_report(reports, output_path)
            else:
                self._generate_markdown_report(reports, output_path)
            logger.info(f"Report generated successfully: {output_path}")
        except OSError as e:
            logger.error(f"Error generating report: {str(e)}")
            raise

    def _generate_markdown_report(self, reports: Sequence[McReport], output_path: Path) -> None:
        flagged = [report for report in reports if report.flagged]

        report = ["# Monte-Carlo Verification Report", ""]
        report.append("## Summary")
        report.append(f"- **Checks Run**: {len(reports)}")
        report.append(f"- **Flagged**: {len(flagged)}")
        report.append("")

        report.append("## Results")
        if not reports:
            report.append("*No checks run.*")
        else:
            report.append("| name | n | samples | estimate | stderr | exact | z | z (imag) | status |")
            report.append("|---|---|---|---|---|---|---|---|---|")
            for item in reports:
                report.append(self._markdown_row(item))
        report.append("")

        errors = [item for item in reports if item.error]
        if errors:
            report.append("## Errors")
            for item in errors:
                report.append(f"- **{item.name}** at n={item.n}: {item.error}")
            report.append("")

        with open(output_path, "w", encoding="utf-8") as f:
            f.write("\n".join(report))

    @staticmethod
    def _markdown_row(item: McReport) -> str:
        exact = "-" if item.symbolic_value is None else str(item.symbolic_value)
        z = "-" if item.z_score is None else f"{item.z_score:.2f}"
        z_imag = "-" if item.z_imag is None else f"{item.z_imag:.2f}"
        status = "FLAGGED" if item.flagged else "ok"
        name = item.name or item.integral.to_text()
        return (
            f"| {name} | {item.n} | {item.samples} | {item.estimate.real:.6g} | {item.stderr:.3g} "
            f"| {exact} | {z} | {z_imag} | {status} |"
        )

    def _generate_json_report(self, reports: Sequence[McReport], output_path: Path) -> None:
        results = {
            "checks": len(reports),
            "flagged": sum(1 for report in reports if report.flagged),
            "reports": [report.to_dict() for report in reports],
        }
        with open(output_path, "w", encoding="utf-8") as f:
            json.dump(results, f, indent=2)
