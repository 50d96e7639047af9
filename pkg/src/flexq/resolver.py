"""Binds parsed queries to catalog tables and fields.

Table resolution runs a three-stage cascade over the display tokens: exact
name match, then synonym (semantic) match, then fuzzy match by edit
distance. Related tables are discovered through the base table's primary
-key field name and refined by a value-subset check, and each condition's
field is located with the same cascade over base-then-refined tables. The
result carries a human-readable trace of every stage.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .catalog import SchemaCatalog
from .errors import ResolveError
from .lexicon import Lexicon
from .matching import best_match, damerau_levenshtein, levenshtein
from .parser import Condition, QueryIR


@dataclass(frozen=True)
class MatchConfig:
    """Knobs for the fuzzy fallback step."""

    max_distance: int = 2
    use_damerau: bool = False

    @property
    def distance_fn(self):
        return damerau_levenshtein if self.use_damerau else levenshtein


@dataclass(frozen=True)
class Binding:
    surface: str        # the token the user typed
    bound: str          # canonical identifier from the catalog
    method: str         # exact | semantic | fuzzy
    distance: int = 0

    def describe(self) -> str:
        if self.method == "fuzzy":
            return (f"{self.method} match {self.bound!r} for {self.surface!r} "
                    f"(distance {self.distance})")
        return f"{self.method} match {self.bound!r} for {self.surface!r}"

    def to_dict(self) -> dict:
        return {"surface": self.surface, "bound": self.bound,
                "method": self.method, "distance": self.distance}

    @classmethod
    def from_dict(cls, raw: dict) -> "Binding":
        return cls(surface=raw["surface"], bound=raw["bound"],
                   method=raw["method"], distance=int(raw["distance"]))


@dataclass(frozen=True)
class TraceStep:
    stage: str
    input: str
    outcome: str

    def to_dict(self) -> dict:
        return {"stage": self.stage, "input": self.input,
                "outcome": self.outcome}

    @classmethod
    def from_dict(cls, raw: dict) -> "TraceStep":
        return cls(stage=raw["stage"], input=raw["input"],
                   outcome=raw["outcome"])


@dataclass(frozen=True)
class ResolvedCondition:
    table: str
    field: Binding
    operator: str
    literal: str

    def to_dict(self) -> dict:
        return {"table": self.table, "field": self.field.to_dict(),
                "operator": self.operator, "literal": self.literal}

    @classmethod
    def from_dict(cls, raw: dict) -> "ResolvedCondition":
        return cls(table=raw["table"], field=Binding.from_dict(raw["field"]),
                   operator=raw["operator"], literal=raw["literal"])


@dataclass(frozen=True)
class ResolvedQuery:
    base_table: Binding
    join_tables: tuple[tuple[str, str], ...]   # (table, shared join field)
    conditions: tuple[ResolvedCondition, ...]
    trace: tuple[TraceStep, ...] = ()

    def to_dict(self) -> dict:
        return {
            "baseTable": self.base_table.to_dict(),
            "joinTables": [{"table": t, "joinField": f}
                           for t, f in self.join_tables],
            "conditions": [c.to_dict() for c in self.conditions],
            "trace": [s.to_dict() for s in self.trace],
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ResolvedQuery":
        return cls(
            base_table=Binding.from_dict(raw["baseTable"]),
            join_tables=tuple((j["table"], j["joinField"])
                              for j in raw["joinTables"]),
            conditions=tuple(ResolvedCondition.from_dict(c)
                             for c in raw["conditions"]),
            trace=tuple(TraceStep.from_dict(s) for s in raw["trace"]),
        )


def _nearest(needle_tokens, names, config) -> list[tuple[str, int]]:
    # candidate list for error messages: best distance per name, sorted
    out = []
    for name in names:
        d = min(config.distance_fn(tok, name) for tok in needle_tokens)
        out.append((name, d))
    out.sort(key=lambda pair: (pair[1], pair[0].lower()))
    return out[:5]


def table_candidates(display_tokens, cat: SchemaCatalog, lex: Lexicon,
                     config: MatchConfig = MatchConfig()) -> list[Binding]:
    """Every plausible table binding, best first.

    Exact matches (in token order) rank before semantic ones, which rank
    before fuzzy ones ordered by distance; each table appears once, under
    its best method.
    """
    if not cat.tables:
        return []
    ordered: list[Binding] = []
    bound_tables: set[str] = set()

    def push(binding: Binding):
        if binding.bound.lower() not in bound_tables:
            bound_tables.add(binding.bound.lower())
            ordered.append(binding)

    for tok in display_tokens:
        if cat.has_table(tok):
            push(Binding(surface=tok, bound=cat.table(tok).name,
                         method="exact"))
    for tok in display_tokens:
        for table in lex.tables_for_synonym(tok):
            if cat.has_table(table):
                push(Binding(surface=tok, bound=cat.table(table).name,
                             method="semantic"))
    fuzzy: list[tuple[int, str, str]] = []
    for tok in display_tokens:
        for m in best_match(tok, cat.table_names(), config.max_distance,
                            config.distance_fn):
            fuzzy.append((m.distance, m.candidate, tok))
    for distance, table, tok in sorted(fuzzy,
                                       key=lambda t: (t[0], t[1].lower())):
        push(Binding(surface=tok, bound=table, method="fuzzy",
                     distance=distance))
    return ordered


def resolve_table(display_tokens, cat: SchemaCatalog, lex: Lexicon,
                  config: MatchConfig = MatchConfig()) -> Binding:
    """First of the cascade's table bindings, or unresolvable-table."""
    candidates = table_candidates(display_tokens, cat, lex, config)
    if not candidates:
        raise ResolveError(
            f"no table matches {' '.join(display_tokens)!r}",
            code="unresolvable-table",
            candidates=_nearest(display_tokens, cat.table_names(), config))
    return candidates[0]


def related_tables(base: str, cat: SchemaCatalog) -> set[str]:
    """Other tables carrying the base table's primary-key field name."""
    pk = cat.table(base).primary_key
    return {t for t in cat.tables_with_field(pk)
            if t.lower() != base.lower()}


def refine_by_values(candidates: set[str], base: str,
                     cat: SchemaCatalog) -> set[str]:
    """Keep candidates whose key-column values all occur in the base table.

    Distinct values are compared (child tables legitimately repeat foreign
    keys); the check is over canonical text so numeric spellings agree.
    """
    pk = cat.table(base).primary_key
    base_values = set(cat.value_set(base, pk))
    return {t for t in candidates
            if set(cat.value_set(t, pk)) <= base_values}


def _ordered_refined(base: str, cat: SchemaCatalog) -> list[str]:
    refined = refine_by_values(related_tables(base, cat), base, cat)
    return [t.name for t in cat.tables if t.name in refined]


def resolve_field(cond: Condition, base: Binding, refined: list[str],
                  cat: SchemaCatalog, lex: Lexicon,
                  config: MatchConfig = MatchConfig()
                  ) -> tuple[str, Binding]:
    """Locate the condition's field: exact in the base table, exact in each
    refined table (catalog order), synonym match, then fuzzy over the
    union of base and refined field names.

    Raises unresolvable-field when every stage fails and ambiguous-field
    when the fuzzy minimum is achieved by two different fields.
    """
    if not cond.field_phrase:
        raise ResolveError("condition names no field", code="unresolvable-field")
    search_tables = [base.bound] + list(refined)

    for tok in cond.field_phrase:
        f = cat.table(base.bound).field(tok)
        if f is not None:
            return base.bound, Binding(surface=tok, bound=f.name,
                                       method="exact")
    for table in refined:
        for tok in cond.field_phrase:
            f = cat.table(table).field(tok)
            if f is not None:
                return table, Binding(surface=tok, bound=f.name,
                                      method="exact")
    for table in search_tables:
        for f in cat.table(table).fields:
            synonyms = lex.field_synonym_words(table, f.name)
            for tok in cond.field_phrase:
                if tok.lower() in synonyms:
                    return table, Binding(surface=tok, bound=f.name,
                                          method="semantic")

    pool = [(table, f.name) for table in search_tables
            for f in cat.table(table).fields]
    hits: list[tuple[int, str, str, str]] = []  # (distance, table, field, tok)
    for tok in cond.field_phrase:
        for table, fname in pool:
            d = config.distance_fn(tok, fname)
            if d <= config.max_distance:
                hits.append((d, table, fname, tok))
    if not hits:
        raise ResolveError(
            f"no field matches {' '.join(cond.field_phrase)!r} in "
            f"{', '.join(search_tables)}",
            code="unresolvable-field",
            candidates=_nearest(cond.field_phrase,
                                [f"{t}.{f}" for t, f in pool], config))
    hits.sort(key=lambda h: (h[0], h[1].lower(), h[2].lower()))
    minimum = hits[0][0]
    winners = {(t, f) for d, t, f, _ in hits if d == minimum}
    if len(winners) > 1:
        names = sorted(f"{t}.{f}" for t, f in winners)
        raise ResolveError(
            f"{' '.join(cond.field_phrase)!r} matches {' and '.join(names)} "
            f"at the same distance {minimum}",
            code="ambiguous-field",
            candidates=[(n, minimum) for n in names])
    d, table, fname, tok = hits[0]
    return table, Binding(surface=tok, bound=fname, method="fuzzy",
                          distance=d)


def _resolve_with_base(ir: QueryIR, base: Binding, cat: SchemaCatalog,
                       lex: Lexicon, config: MatchConfig) -> ResolvedQuery:
    trace = [TraceStep("resolve-table", " ".join(ir.display_tokens),
                       base.describe())]
    base_def = cat.table(base.bound)

    if not ir.conditions:
        trace.append(TraceStep("conditions", "", "none; selecting all rows"))
        return ResolvedQuery(base_table=base, join_tables=(), conditions=(),
                             trace=tuple(trace))

    related = related_tables(base.bound, cat)
    trace.append(TraceStep(
        "related-tables", f"{base_def.name}.{base_def.primary_key}",
        "candidates: " + (", ".join(sorted(related)) or "none")))
    refined_set = refine_by_values(related, base.bound, cat)
    for t in sorted(related):
        kept = t in refined_set
        trace.append(TraceStep(
            "refine-by-values", t,
            f"{'kept' if kept else 'eliminated'}: {base_def.primary_key} "
            f"values {'are a subset of' if kept else 'are not a subset of'} "
            f"{base_def.name}'s"))
    refined = [t.name for t in cat.tables if t.name in refined_set]

    conditions = []
    for cond in ir.conditions:
        table, binding = resolve_field(cond, base, refined, cat, lex, config)
        trace.append(TraceStep("resolve-field", " ".join(cond.field_phrase),
                               f"{table}.{binding.bound}: {binding.describe()}"))
        conditions.append(ResolvedCondition(
            table=cat.table(table).name, field=binding,
            operator=cond.operator, literal=cond.literal))

    referenced = {c.table.lower() for c in conditions}
    join_tables = tuple((t, base_def.primary_key) for t in refined
                        if t.lower() in referenced)
    if join_tables:
        outcome = (f"joining {', '.join(t for t, _ in join_tables)} on "
                   f"{base_def.primary_key}")
    else:
        outcome = "no join needed"
    trace.append(TraceStep("join-tables", ", ".join(refined) or "none",
                           outcome))
    return ResolvedQuery(base_table=base, join_tables=join_tables,
                         conditions=tuple(conditions), trace=tuple(trace))


def resolve(ir: QueryIR, cat: SchemaCatalog, lex: Lexicon,
            config: MatchConfig = MatchConfig()) -> ResolvedQuery:
    """Bind the whole query: table cascade, related-table discovery and
    refinement, then field resolution per condition. Join tables are
    trimmed to those actually hosting a condition."""
    base = resolve_table(ir.display_tokens, cat, lex, config)
    return _resolve_with_base(ir, base, cat, lex, config)


def resolve_candidates(ir: QueryIR, cat: SchemaCatalog, lex: Lexicon,
                       config: MatchConfig = MatchConfig()
                       ) -> Iterator[ResolvedQuery]:
    """Alternative resolutions in preference order, for blocklist retries.

    The first yielded value is the one :func:`resolve` would return; later
    ones rebind the table to the next-ranked cascade candidate. Candidates
    whose fields cannot be resolved are skipped.
    """
    candidates = table_candidates(ir.display_tokens, cat, lex, config)
    if not candidates:
        raise ResolveError(
            f"no table matches {' '.join(ir.display_tokens)!r}",
            code="unresolvable-table",
            candidates=_nearest(ir.display_tokens, cat.table_names(), config))
    for i, base in enumerate(candidates):
        try:
            yield _resolve_with_base(ir, base, cat, lex, config)
        except ResolveError:
            if i == 0:   # the primary resolution must fail loudly
                raise
