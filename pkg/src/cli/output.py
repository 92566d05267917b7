"""
Result Serialization
CSV and JSON writers with locale-independent 12-significant-digit numbers.
"""

import csv
import io
import json
import sys
from typing import Any, Dict, List, Optional, Sequence

from src import __version__
from src.utils.helpers import format_number

SIGNIFICANT_DIGITS = 12


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_number(value, SIGNIFICANT_DIGITS)
    if hasattr(value, "value"):  # enums
        return str(value.value)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, bool) or isinstance(value, int):
        return value
    if isinstance(value, float):
        return float(format_number(value, SIGNIFICANT_DIGITS))
    if hasattr(value, "value"):
        return value.value
    return value


def render_csv(records: Sequence[Dict[str, Any]], columns: Sequence[str]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for record in records:
        writer.writerow([_cell(record[c]) for c in columns])
    return buffer.getvalue()


def render_json(
    records: Sequence[Dict[str, Any]],
    columns: Sequence[str],
    meta: Dict[str, Any],
) -> str:
    payload = {
        "meta": {"version": __version__, **meta},
        "records": [{c: _json_value(r[c]) for c in columns} for r in records],
    }
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def write_records(
    records: List[Dict[str, Any]],
    columns: Sequence[str],
    fmt: str,
    meta: Dict[str, Any],
    path: Optional[str] = None,
) -> None:
    """Write records to a file or stdout in the chosen format."""
    text = render_json(records, columns, meta) if fmt == "json" else render_csv(records, columns)
    if path:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
