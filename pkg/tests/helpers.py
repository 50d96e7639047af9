"""Independent oracles and small catalog builders shared across tests.

The distance oracles enumerate edit sequences through the mathematical
recurrences directly (memoized plain recursion), never a DP matrix, so
they stay independent of the implementations they check. The executor
oracle materializes the full cartesian product and filters it naively
with its own comparison logic.
"""

from __future__ import annotations

import json
import re
from functools import lru_cache

from flexq.catalog import SchemaCatalog, load_catalog


@lru_cache(maxsize=None)
def lev_oracle(a: str, b: str) -> int:
    a, b = a.casefold(), b.casefold()
    if not a:
        return len(b)
    if not b:
        return len(a)
    cost = 0 if a[0] == b[0] else 1
    return min(cost + lev_oracle(a[1:], b[1:]),
               1 + lev_oracle(a[1:], b),
               1 + lev_oracle(a, b[1:]))


@lru_cache(maxsize=None)
def osa_oracle(a: str, b: str) -> int:
    a, b = a.casefold(), b.casefold()
    if not a:
        return len(b)
    if not b:
        return len(a)
    cost = 0 if a[0] == b[0] else 1
    best = min(cost + osa_oracle(a[1:], b[1:]),
               1 + osa_oracle(a[1:], b),
               1 + osa_oracle(a, b[1:]))
    if len(a) >= 2 and len(b) >= 2 and a[0] == b[1] and a[1] == b[0]:
        best = min(best, 1 + osa_oracle(a[2:], b[2:]))
    return best


def write_catalog(root, tables: dict[str, dict]) -> SchemaCatalog:
    """Materialize an in-memory catalog description as files and load it.

    ``tables`` maps table name -> {"primaryKey": str, "fields": [(name,
    dtype)], "rows": [tuple of strings]}.
    """
    entries = []
    for name, spec in tables.items():
        entries.append({
            "name": name,
            "primaryKey": spec["primaryKey"],
            "dataFile": f"{name}.csv",
            "fields": [{"name": f, "dtype": d} for f, d in spec["fields"]],
        })
        header = ",".join(f for f, _ in spec["fields"])
        lines = [header] + [",".join(str(c) for c in row)
                            for row in spec["rows"]]
        (root / f"{name}.csv").write_text("\n".join(lines) + "\n",
                                          encoding="utf-8")
    (root / "catalog.json").write_text(json.dumps({"tables": entries}),
                                       encoding="utf-8")
    return load_catalog(root / "catalog.json", root)


_NUM = re.compile(r"[+-]?\d+(\.\d+)?")


def _as_float(value):
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str) and _NUM.fullmatch(value):
        return float(value)
    return None


def naive_compare(cell, op, literal):
    if cell is None:
        return False
    a, b = _as_float(cell), _as_float(literal)
    if a is not None and b is not None:
        return {"EQ": a == b, "NEQ": a != b, "GT": a > b,
                "LT": a < b, "GTE": a >= b, "LTE": a <= b}[op]
    if op == "EQ":
        return str(cell).casefold() == str(literal).casefold()
    if op == "NEQ":
        return str(cell).casefold() != str(literal).casefold()
    raise ValueError(f"ordering operator {op} on non-numeric operands")


def naive_execute(rq, cat: SchemaCatalog):
    """Cartesian-product-then-filter oracle; returns rows as a list."""
    base = cat.table(rq.base_table.bound)
    join_defs = [cat.table(t) for t, _ in rq.join_tables]
    frames = [cat.rows(base.name)] + [cat.rows(j.name) for j in join_defs]

    offsets, offset = {}, 0
    for d in [base] + join_defs:
        offsets[d.name] = offset
        offset += len(d.fields)

    def cell(row, table_name, field_name):
        d = cat.table(table_name)
        return row[offsets[d.name] + d.field_index(field_name)]

    # expand the product iteratively to keep this dumb and obvious
    rows = [tuple(r) for r in frames[0]]
    for frame in frames[1:]:
        rows = [r + tuple(extra) for r in rows for extra in frame]

    out = []
    for row in rows:
        ok = True
        for (jt, jf) in rq.join_tables:
            a = cell(row, base.name, base.primary_key)
            b = cell(row, jt, jf)
            if a is None or b is None:
                ok = False
            elif _as_float(a) is not None and _as_float(b) is not None:
                ok = _as_float(a) == _as_float(b)
            else:
                ok = str(a).casefold() == str(b).casefold()
            if not ok:
                break
        if not ok:
            continue
        for c in rq.conditions:
            if not naive_compare(cell(row, c.table, c.field.bound),
                                 c.operator, c.literal):
                ok = False
                break
        if ok:
            out.append(row)
    return out
