"""Schema metadata and CSV-backed table data.

The catalog is declared in a JSON file (tables, fields, dtypes, primary
keys) and each table's rows come from a CSV data file. On load we build a
value index over every primary-key column, holding cell values in a
canonical text form so that subset checks between key columns of different
tables are exact. Everything is immutable after load.

Identifier comparison is case-insensitive throughout, but declared casing
is preserved because generated SQL must echo it.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import CatalogError

DTYPES = ("integer", "decimal", "text", "date-text")

_INT_RE = re.compile(r"[+-]?\d+")
_NUM_RE = re.compile(r"[+-]?\d+(\.\d+)?")

# number | text | None; None marks an empty (null) cell
Cell = int | float | str | None


def canonical_text(cell: str) -> str:
    """Canonical text form of a raw CSV cell, for the value index.

    Numbers lose leading zeros and trailing decimal zeros ("007" -> "7",
    "211.00" -> "211", "0.50" -> "0.5"); text is kept verbatim. Comparison
    -time case folding is the executor's job, not the index's.
    """
    if _INT_RE.fullmatch(cell):
        return str(int(cell))
    if _NUM_RE.fullmatch(cell):
        value = float(cell)
        if value.is_integer():
            return str(int(value))
        return repr(value)
    return cell


def _typed_cell(cell: str, dtype: str) -> Cell:
    if cell == "":
        return None
    if dtype == "integer" and _INT_RE.fullmatch(cell):
        return int(cell)
    if dtype == "decimal" and _NUM_RE.fullmatch(cell):
        value = float(cell)
        return int(value) if value.is_integer() else value
    return cell


@dataclass(frozen=True)
class FieldDef:
    name: str
    dtype: str


@dataclass(frozen=True)
class TableDef:
    name: str
    primary_key: str
    fields: tuple[FieldDef, ...]
    data_file: str

    def field_names(self) -> list[str]:
        return [f.name for f in self.fields]

    def field(self, name: str) -> FieldDef | None:
        lname = name.lower()
        for f in self.fields:
            if f.name.lower() == lname:
                return f
        return None

    def field_index(self, name: str) -> int:
        lname = name.lower()
        for i, f in enumerate(self.fields):
            if f.name.lower() == lname:
                return i
        raise CatalogError(f"table {self.name!r} has no field {name!r}",
                           code="unknown-field")


class SchemaCatalog:
    """Tables, their typed rows, and the primary-key value index."""

    def __init__(self, tables: tuple[TableDef, ...],
                 rows: dict[str, list[tuple[Cell, ...]]],
                 raw_rows: dict[str, list[tuple[str, ...]]]):
        self.tables = tables
        self._by_name = {t.name.lower(): t for t in tables}
        self._rows = rows            # keyed by lowercase table name
        self._raw_rows = raw_rows    # untyped cells, canonical-text source
        self._value_index: dict[tuple[str, str], tuple[str, ...]] = {}
        for t in tables:
            key = (t.name.lower(), t.primary_key.lower())
            self._value_index[key] = self._column_text(t, t.primary_key)

    def _column_text(self, table: TableDef, field_name: str) -> tuple[str, ...]:
        idx = table.field_index(field_name)
        return tuple(canonical_text(row[idx])
                     for row in self._raw_rows[table.name.lower()])

    def table(self, name: str) -> TableDef:
        t = self._by_name.get(name.lower())
        if t is None:
            raise CatalogError(f"unknown table {name!r}", code="unknown-table")
        return t

    def has_table(self, name: str) -> bool:
        return name.lower() in self._by_name

    def table_names(self) -> list[str]:
        return [t.name for t in self.tables]

    def rows(self, name: str) -> list[tuple[Cell, ...]]:
        return self._rows[self.table(name).name.lower()]

    def tables_with_field(self, field_name: str) -> set[str]:
        """Every table declaring ``field_name`` (case-insensitive)."""
        return {t.name for t in self.tables if t.field(field_name) is not None}

    def value_set(self, table: str, field_name: str) -> tuple[str, ...]:
        """Multiset of a column's values in canonical text form.

        Primary-key columns are served from the index built at load time;
        any other column is computed on demand.
        """
        t = self.table(table)
        if t.field(field_name) is None:
            raise CatalogError(f"table {t.name!r} has no field {field_name!r}",
                               code="unknown-field")
        key = (t.name.lower(), field_name.lower())
        indexed = self._value_index.get(key)
        if indexed is not None:
            return indexed
        return self._column_text(t, field_name)


def _parse_table_def(entry: dict, source: str) -> TableDef:
    try:
        name = str(entry["name"])
        primary_key = str(entry["primaryKey"])
        data_file = str(entry["dataFile"])
        fields = tuple(FieldDef(name=str(f["name"]), dtype=str(f["dtype"]))
                       for f in entry["fields"])
    except (KeyError, TypeError) as exc:
        raise CatalogError(f"{source}: malformed table entry: {exc}",
                           code="malformed-format") from exc
    seen = set()
    for f in fields:
        if not f.name:
            raise CatalogError(f"{source}: table {name!r} has an unnamed field",
                               code="malformed-format")
        if f.dtype not in DTYPES:
            raise CatalogError(
                f"{source}: table {name!r} field {f.name!r} has unknown dtype "
                f"{f.dtype!r}", code="invalid-dtype")
        if f.name.lower() in seen:
            raise CatalogError(f"{source}: table {name!r} declares field "
                               f"{f.name!r} twice", code="duplicate-field")
        seen.add(f.name.lower())
    if primary_key.lower() not in seen:
        raise CatalogError(
            f"{source}: table {name!r} primary key {primary_key!r} is not a "
            f"declared field", code="unknown-primary-key")
    return TableDef(name=name, primary_key=primary_key, fields=fields,
                    data_file=data_file)


def _read_csv(table: TableDef, path: Path) -> tuple[list, list]:
    if not path.is_file():
        raise CatalogError(f"data file not found for table {table.name!r}: "
                           f"{path}", code="missing-file")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CatalogError(f"{path}: empty CSV (no header row)",
                               code="header-mismatch") from None
        declared = {f.name.lower(): f for f in table.fields}
        got = [h.strip() for h in header]
        got_lower = [h.lower() for h in got]
        missing = sorted(set(declared) - set(got_lower))
        extra = sorted(set(got_lower) - set(declared))
        if missing or extra:
            raise CatalogError(
                f"{path}: header does not match declared fields of "
                f"{table.name!r} (missing: {missing or 'none'}, "
                f"extra: {extra or 'none'})", code="header-mismatch")
        # column positions in declared field order
        positions = [got_lower.index(f.name.lower()) for f in table.fields]
        typed_rows, raw_rows = [], []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(got):
                raise CatalogError(
                    f"{path}:{lineno}: expected {len(got)} cells, got "
                    f"{len(row)}", code="malformed-format")
            raw = tuple(row[p].strip() for p in positions)
            raw_rows.append(raw)
            typed_rows.append(tuple(
                _typed_cell(cell, f.dtype)
                for cell, f in zip(raw, table.fields)))
    return typed_rows, raw_rows


def load_catalog(catalog_path: str | Path, data_dir: str | Path) -> SchemaCatalog:
    """Load the catalog file and every referenced CSV data file."""
    catalog_path = Path(catalog_path)
    data_dir = Path(data_dir)
    if not catalog_path.is_file():
        raise CatalogError(f"catalog file not found: {catalog_path}",
                           code="missing-file")
    try:
        raw = json.loads(catalog_path.read_text(encoding="utf-8"))
        entries = raw["tables"]
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise CatalogError(f"catalog file {catalog_path} is malformed: {exc}",
                           code="malformed-format") from exc

    tables: list[TableDef] = []
    seen = set()
    for entry in entries:
        t = _parse_table_def(entry, str(catalog_path))
        if t.name.lower() in seen:
            raise CatalogError(f"duplicate table {t.name!r} in catalog",
                               code="duplicate-table")
        seen.add(t.name.lower())
        tables.append(t)

    rows: dict[str, list] = {}
    raw_rows: dict[str, list] = {}
    for t in tables:
        typed, raw_cells = _read_csv(t, data_dir / t.data_file)
        rows[t.name.lower()] = typed
        raw_rows[t.name.lower()] = raw_cells
    return SchemaCatalog(tuple(tables), rows, raw_rows)
