"""Deterministic SQL rendering for resolved queries.

Emits the implicit-join dialect shape: SELECT * with one alias per table
and primary-key equality predicates, uppercase keywords, single spaces.
Text literals are always single-quoted (with internal quotes doubled);
numeric literals are bare.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass

from .parser import NUMBER_RE
from .resolver import ResolvedQuery

OP_SQL = {"EQ": "=", "NEQ": "!=", "GT": ">", "LT": "<",
          "GTE": ">=", "LTE": "<="}

DIALECT_NOTE = "paper-implicit-join"


@dataclass(frozen=True)
class SqlText:
    text: str
    dialect_note: str = DIALECT_NOTE


def render_literal(literal: str) -> str:
    if NUMBER_RE.fullmatch(literal):
        return literal
    return "'" + literal.replace("'", "''") + "'"


def _alias(i: int) -> str:
    return string.ascii_uppercase[i]


def build_sql(rq: ResolvedQuery) -> SqlText:
    """Render a resolved query; equal inputs give byte-identical SQL."""
    tables = [rq.base_table.bound] + [t for t, _ in rq.join_tables]
    aliases = {t.lower(): _alias(i) for i, t in enumerate(tables)}
    from_clause = ", ".join(f"{t} AS {aliases[t.lower()]}" for t in tables)

    predicates = []
    base_alias = aliases[rq.base_table.bound.lower()]
    for table, join_field in rq.join_tables:
        predicates.append(f"{base_alias}.{join_field} = "
                          f"{aliases[table.lower()]}.{join_field}")
    for cond in rq.conditions:
        predicates.append(f"{aliases[cond.table.lower()]}.{cond.field.bound} "
                          f"{OP_SQL[cond.operator]} "
                          f"{render_literal(cond.literal)}")

    text = f"SELECT * FROM {from_clause}"
    if predicates:
        text += " WHERE " + " AND ".join(predicates)
    return SqlText(text=text)


_OPERATOR_SPACING = re.compile(r"\s*(>=|<=|!=|=|>|<)\s*")


def canonical_sql(text: str) -> str:
    """Comparison form: lowercase, collapsed whitespace, no spaces around
    comparison operators. Used wherever two SQL spellings must be judged
    equivalent."""
    text = " ".join(text.lower().split())
    return _OPERATOR_SPACING.sub(r"\1", text)
