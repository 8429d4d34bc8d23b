"""CSV input layer: schema validation and config-hash extraction.

Experiment CSVs start with a comment line like
`# review-lottery v0.1.0 config=sha256:abcdef123456` followed by a
header row. Rendering fails loudly on missing columns or empty tables
rather than plotting partial data.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from pathlib import Path

_HASH_RE = re.compile(r"config=sha256:([0-9a-f]+)")


class FigureDataError(ValueError):
    """Missing column, empty table, or unreadable input."""


@dataclass(frozen=True)
class Table:
    path: Path
    config_hash: str
    columns: tuple
    rows: tuple  # tuple of dicts, values are raw strings

    def floats(self, column: str):
        """Column as floats; empty cells become nan."""
        out = []
        for row in self.rows:
            cell = row[column]
            out.append(math.nan if cell == "" else float(cell))
        return out


def read_table(path) -> Table:
    path = Path(path)
    if not path.exists():
        raise FigureDataError(f"input CSV not found: {path}")
    lines = path.read_text().splitlines()
    config_hash = ""
    while lines and lines[0].startswith("#"):
        match = _HASH_RE.search(lines[0])
        if match:
            config_hash = match.group(1)
        lines = lines[1:]
    if not lines:
        raise FigureDataError(f"{path}: no header row")
    rows = tuple(csv.DictReader(lines))
    columns = tuple(csv.reader([lines[0]]).__next__())
    if not rows:
        raise FigureDataError(f"{path}: no data rows")
    return Table(path, config_hash, columns, rows)


def require_columns(table: Table, needed, figure_id: str):
    for col in needed:
        if col not in table.columns:
            raise FigureDataError(
                f"{figure_id}: column {col!r} missing from {table.path}")
