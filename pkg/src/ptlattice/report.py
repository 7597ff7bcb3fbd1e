"""Deterministic CSV report bundles.

A bundle is a plain-text artifact: '#'-prefixed header lines, then one or
more named tables, each introduced by a '# table: <name>' line followed by
a CSV header row and data rows.  Floats are rendered with repr-faithful
precision ('%.17g') so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field


def format_value(value) -> str:
    """Render one cell: shortest float form that round-trips, else str()."""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return "%.17g" % value
    if isinstance(value, int):
        return str(value)
    if hasattr(value, "item"):  # numpy scalar
        return format_value(value.item())
    return str(value)


@dataclass(frozen=True)
class Table:
    """One named CSV table: column names plus rows of cells."""

    name: str
    columns: tuple
    rows: tuple

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"table {self.name!r}: row width {len(row)} != "
                    f"{len(self.columns)} columns"
                )


@dataclass
class ReportBundle:
    """Header key/value lines plus an ordered list of tables."""

    header: list = field(default_factory=list)
    tables: list = field(default_factory=list)

    def add_header(self, key: str, value) -> None:
        self.header.append((str(key), format_value(value)))

    def add_table(self, table: Table) -> None:
        self.tables.append(table)

    def to_csv(self) -> str:
        out = io.StringIO()
        for key, value in self.header:
            out.write(f"# {key}: {value}\n")
        for table in self.tables:
            out.write(f"# table: {table.name}\n")
            out.write(",".join(table.columns) + "\n")
            for row in table.rows:
                out.write(",".join(format_value(cell) for cell in row) + "\n")
        return out.getvalue()

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())
