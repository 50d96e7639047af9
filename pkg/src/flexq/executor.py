"""Miniature in-memory evaluator for resolved queries.

Computes the cartesian product of the base and join tables restricted by
primary-key equality, then filters by the conditions. Text equality is
case-insensitive (mixed-case values must still match), ordering operators
require numbers on both sides, and null cells fail every comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .catalog import Cell, SchemaCatalog
from .errors import ExecuteError
from .parser import NUMBER_RE
from .resolver import ResolvedQuery


@dataclass(frozen=True)
class ResultSet:
    columns: tuple[tuple[str, str], ...]   # (source table, field name)
    rows: tuple[tuple[Cell, ...], ...]

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def to_dict(self) -> dict:
        return {
            "columns": [{"table": t, "field": f} for t, f in self.columns],
            "rows": [list(row) for row in self.rows],
            "rowCount": self.row_count,
        }


def _as_number(value: Cell) -> int | float | None:
    if isinstance(value, (int, float)):
        return value
    if isinstance(value, str) and NUMBER_RE.fullmatch(value):
        f = float(value)
        return int(f) if f.is_integer() else f
    return None


def compare(cell: Cell, operator: str, literal: str) -> bool:
    """Evaluate one predicate against a cell.

    Numbers compare numerically whenever both sides parse as numbers;
    equality falls back to case-insensitive text, ordering operators on
    non-numeric operands are a type-mismatch error, and null cells are
    false under every operator.
    """
    if cell is None:
        return False
    a = _as_number(cell)
    b = _as_number(literal)
    if a is not None and b is not None:
        if operator == "EQ":
            return a == b
        if operator == "NEQ":
            return a != b
        if operator == "GT":
            return a > b
        if operator == "LT":
            return a < b
        if operator == "GTE":
            return a >= b
        return a <= b
    if operator in ("EQ", "NEQ"):
        equal = str(cell).casefold() == literal.casefold()
        return equal if operator == "EQ" else not equal
    raise ExecuteError(
        f"operator {operator} needs numeric operands, got {cell!r} and "
        f"{literal!r}", code="type-mismatch")


def _cells_equal(a: Cell, b: Cell) -> bool:
    # join-key equality; nulls never join
    if a is None or b is None:
        return False
    na, nb = _as_number(a), _as_number(b)
    if na is not None and nb is not None:
        return na == nb
    return str(a).casefold() == str(b).casefold()


def execute(rq: ResolvedQuery, cat: SchemaCatalog) -> ResultSet:
    """Run a resolved query against the catalog's CSV-backed rows.

    Column order is the base table's fields followed by each join table's
    fields; row order follows the base table's CSV order, then each join
    table's, so results are stable.
    """
    base = cat.table(rq.base_table.bound)
    join_defs = [cat.table(t) for t, _ in rq.join_tables]

    columns = [(base.name, f.name) for f in base.fields]
    for jd in join_defs:
        columns.extend((jd.name, f.name) for f in jd.fields)

    # per-condition cell position within the concatenated row
    offsets = {base.name.lower(): 0}
    offset = len(base.fields)
    for jd in join_defs:
        offsets[jd.name.lower()] = offset
        offset += len(jd.fields)
    cond_cells = [
        offsets[c.table.lower()]
        + cat.table(c.table).field_index(c.field.bound)
        for c in rq.conditions
    ]

    base_pk = base.field_index(base.primary_key)
    join_keys = [jd.field_index(jf)
                 for jd, (_, jf) in zip(join_defs, rq.join_tables)]

    rows = []
    join_rows = [cat.rows(jd.name) for jd in join_defs]
    for base_row in cat.rows(base.name):
        for combo in product(*join_rows):
            if not all(_cells_equal(base_row[base_pk], jrow[jk])
                       for jrow, jk in zip(combo, join_keys)):
                continue
            full = base_row + tuple(cell for jrow in combo for cell in jrow)
            if all(compare(full[pos], c.operator, c.literal)
                   for pos, c in zip(cond_cells, rq.conditions)):
                rows.append(full)
    return ResultSet(columns=tuple(columns), rows=tuple(rows))
