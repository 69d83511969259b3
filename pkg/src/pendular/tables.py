"""Tabular results with deterministic CSV/JSON serialization.

CSV layout: one `# schema=<name>` comment line, a header line, then data
rows.  '.' decimal, ',' separator, LF line endings, floats at 12 significant
digits, so identical inputs serialize to identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable


@dataclass(frozen=True)
class Table:
    schema: str
    columns: tuple[str, ...]
    rows: list[tuple]

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def _format_value(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int,)):
        return str(value)
    if isinstance(value, float):
        if value == 0.0:  # avoid '-0' artifacts
            return "0"
        return f"{value:.12g}"
    return str(value)


def render_csv(table: Table) -> str:
    buf = io.StringIO()
    buf.write(f"# schema={table.schema}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_format_value(v) for v in row])
    return buf.getvalue()


def _json_value(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, float):
        # Round-trips exactly while keeping payloads readable.
        return float(f"{value:.12g}")
    return value


def render_json(table: Table, metadata: dict | None = None) -> str:
    payload = {
        "schema_version": table.schema,
        "columns": list(table.columns),
        "rows": [[_json_value(v) for v in row] for row in table.rows],
        "metadata": metadata or {},
    }
    return json.dumps(payload, indent=2) + "\n"


def render(table: Table, fmt: str, metadata: dict | None = None) -> str:
    if fmt == "csv":
        return render_csv(table)
    if fmt == "json":
        return render_json(table, metadata)
    raise ValueError(f"unknown output format {fmt!r}")


def concat(tables: Iterable[Table]) -> Table:
    """Concatenate tables sharing one schema."""
    tables = list(tables)
    first = tables[0]
    rows: list[tuple] = []
    for t in tables:
        if t.schema != first.schema or t.columns != first.columns:
            raise ValueError("cannot concatenate tables with different schemas")
        rows.extend(t.rows)
    return Table(schema=first.schema, columns=first.columns, rows=rows)
