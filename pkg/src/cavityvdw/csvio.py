"""Bit-exact CSV output for scan results and the matching reader.

Format: one header row of column names; one data row per grid point with
floats rendered to 17 significant digits (lossless for 64-bit floats); a
trailing summary block of "# key = value" comment lines; LF line endings.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Tuple, Union

from .errors import MalformedSummary, MissingColumn
from .scans import ScanResult


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def render_scan_csv(r: ScanResult) -> str:
    lines = [",".join(r.columns)]
    for row in r.rows:
        lines.append(",".join(format_value(row[c]) for c in r.columns))
    for key, value in r.summary.items():
        lines.append(f"# {key} = {format_value(value)}")
    return "\n".join(lines) + "\n"


def write_scan_csv(r: ScanResult, path: Union[str, Path]) -> None:
    Path(path).write_text(render_scan_csv(r), encoding="utf-8", newline="\n")


def _parse_cell(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_scan_csv(text: str) -> Tuple[List[str], List[Dict[str, object]], Dict[str, object]]:
    """Parse CSV text into (columns, rows, summary); values typed best-effort."""
    lines = [ln for ln in text.split("\n") if ln != ""]
    if not lines:
        raise MissingColumn("empty CSV")
    columns = lines[0].split(",")
    rows: List[Dict[str, object]] = []
    summary: Dict[str, object] = {}
    for ln in lines[1:]:
        if ln.startswith("#"):
            body = ln[1:].strip()
            if "=" not in body:
                raise MalformedSummary(f"summary line without '=': {ln!r}")
            key, _, value = body.partition("=")
            summary[key.strip()] = _parse_cell(value.strip())
            continue
        cells = ln.split(",")
        if len(cells) != len(columns):
            raise MissingColumn(f"row has {len(cells)} cells, header has {len(columns)}")
        rows.append({c: _parse_cell(v) for c, v in zip(columns, cells)})
    return columns, rows, summary
