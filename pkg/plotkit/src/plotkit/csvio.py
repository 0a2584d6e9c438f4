"""Reader for the sweep-table CSV dialect.

Dialect: optional ``# key=value`` metadata lines, one header row, then
comma-separated records with ``.`` decimal point and LF endings.  Cells are
decoded as int, float, empty (None) or string, in that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class SchemaError(ValueError):
    """Input table does not match the columns a figure kind needs."""


@dataclass
class Table:
    columns: list[str]
    rows: list[list]
    meta: dict[str, str] = field(default_factory=dict)

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def _decode(cell: str):
    if cell == "":
        return None
    try:
        return int(cell)
    except ValueError:
        pass
    try:
        return float(cell)
    except ValueError:
        return cell


def read_table(path: str) -> Table:
    meta: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[list] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line.lstrip("# ").partition("=")
                meta[key] = value
                continue
            if header is None:
                header = line.split(",")
                continue
            cells = line.split(",")
            if len(cells) != len(header):
                raise SchemaError(
                    f"{path}: row with {len(cells)} cells under {len(header)} columns"
                )
            rows.append([_decode(cell) for cell in cells])
    if header is None:
        raise SchemaError(f"{path}: no header row found")
    return Table(header, rows, meta)


def require_columns(table: Table, expected: tuple[str, ...], kind: str) -> None:
    """Raise SchemaError spelling out the column diff for the figure kind."""
    missing = [name for name in expected if name not in table.columns]
    extra = [name for name in table.columns if name not in expected]
    if missing:
        raise SchemaError(
            f"columns do not match figure kind {kind!r}: "
            f"missing {missing}, unexpected {extra or 'none'}, found {table.columns}"
        )
    if not table.rows:
        raise SchemaError(f"no data rows to plot for figure kind {kind!r}")
