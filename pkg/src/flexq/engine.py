"""Wires the full loop: knowledge lookup, parse, resolve, SQL, feedback.

The engine is the one object the HTTP service, the CLI, and the REPL all
drive. It owns the loaded catalog, the current lexicon, and the knowledge
store, and implements the replay and blocklist behaviour around the pure
pipeline functions.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from . import parser, resolver, sqlgen
from .catalog import SchemaCatalog, load_catalog
from .config import Settings
from .errors import KnowledgeError, ParseError, ResolveError
from .executor import ResultSet, execute
from .knowledge import KnowledgeEntry, KnowledgeStore, normalize_query
from .lexicon import Lexicon, add_conjunction, load_lexicon, save_lexicon
from .resolver import TraceStep

SOURCE_PIPELINE = "pipeline"
SOURCE_KNOWLEDGE = "knowledge-base"

# candidate resolutions tried before giving up on dodging a blocklist
_MAX_ALTERNATIVES = 25

# offered when a query fails and no conjunction was recognized: the user
# may simply be using a pivot word the lexicon has not learned yet
REMEDY_ADD_CONJUNCTION = {
    "action": "add-conjunction",
    "endpoint": "POST /api/lexicon/conjunctions",
    "cli": "flexq add-conjunction <word>",
    "hint": "no conjunction was recognized in the query; if one of its "
            "words separates what to display from the criteria, teach it "
            "to the lexicon",
}


@dataclass
class TranslateResult:
    query_id: str
    sql: str
    source: str
    trace: list[TraceStep]
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "query_id": self.query_id,
            "sql": self.sql,
            "source": self.source,
            "trace": [s.to_dict() for s in self.trace],
            "warnings": list(self.warnings),
        }


class Engine:
    def __init__(self, catalog: SchemaCatalog, lexicon: Lexicon,
                 store: KnowledgeStore, settings: Settings):
        self.catalog = catalog
        self.lexicon = lexicon
        self.store = store
        self.settings = settings
        self._lexicon_lock = threading.Lock()

    @classmethod
    def from_settings(cls, settings: Settings) -> "Engine":
        catalog = load_catalog(settings.catalog_path, settings.data_dir)
        lexicon = load_lexicon(settings.lexicon_path)
        store = KnowledgeStore(settings.kb_path)
        return cls(catalog, lexicon, store, settings)

    def translate(self, raw: str) -> TranslateResult:
        """Knowledge-base lookup first; on a miss, the full pipeline.

        Every pipeline translation is recorded as a pending knowledge
        entry. SQL the user rejected for this query is skipped in favour
        of the next-ranked resolution when one exists.
        """
        if not raw or not raw.strip():
            raise ParseError("query is empty", code="empty-query")
        key = normalize_query(raw)
        hit = self.store.lookup(key)
        if hit is not None:
            step = TraceStep("knowledge-base", key,
                             f"hit: replaying accepted sql "
                             f"(accepts={hit.accepts})")
            return TranslateResult(query_id=hit.entry_id, sql=hit.sql,
                                   source=SOURCE_KNOWLEDGE, trace=[step])

        lexicon = self.lexicon
        config = self.settings.match_config
        try:
            ir = parser.parse(raw, lexicon)
        except ParseError as exc:
            self._suggest_conjunction(raw, exc)
            raise
        blocked = self.store.blocked_sql(key)
        steps = [TraceStep("knowledge-base", key, "miss")]
        warnings: list[str] = []

        if not blocked:
            try:
                rq = resolver.resolve(ir, self.catalog, lexicon, config)
            except ResolveError as exc:
                self._suggest_conjunction(raw, exc)
                raise
            sql = sqlgen.build_sql(rq)
        else:
            rq, sql, skipped = None, None, 0
            first_rq, first_sql = None, None
            for candidate in resolver.resolve_candidates(
                    ir, self.catalog, lexicon, config):
                candidate_sql = sqlgen.build_sql(candidate)
                if first_rq is None:
                    first_rq, first_sql = candidate, candidate_sql
                if candidate_sql.text not in blocked:
                    rq, sql = candidate, candidate_sql
                    break
                skipped += 1
                steps.append(TraceStep(
                    "blocklist", key,
                    f"skipped rejected sql for table "
                    f"{candidate.base_table.bound!r}"))
                if skipped >= _MAX_ALTERNATIVES:
                    break
            if rq is None:
                rq, sql = first_rq, first_sql
                warnings.append(
                    "every resolution for this query was rejected earlier; "
                    "returning the best-ranked one anyway")
                steps.append(TraceStep(
                    "blocklist", key,
                    "no alternative resolution left; keeping the rejected "
                    "sql"))

        entry_id = self.store.record(key, sql.text, rq)
        return TranslateResult(query_id=entry_id, sql=sql.text,
                               source=SOURCE_PIPELINE,
                               trace=steps + list(rq.trace),
                               warnings=warnings)

    def _suggest_conjunction(self, raw: str, exc) -> None:
        """Attach the add-conjunction remedy when the query has no
        recognized conjunction (the pivot word may just be unknown)."""
        if exc.code not in ("empty-display", "unresolvable-table"):
            return
        try:
            tokens = parser.tokenize(raw)
        except ParseError:
            return
        if parser.detect_conjunction(tokens, self.lexicon) is None:
            exc.remedy = REMEDY_ADD_CONJUNCTION

    def execute_id(self, query_id: str) -> ResultSet:
        entry = self.store.get(query_id)
        if entry is None:
            raise KnowledgeError(f"unknown query id {query_id!r}",
                                 code="unknown-entry")
        return execute(entry.resolved, self.catalog)

    def feedback_id(self, query_id: str, verdict: str,
                    note: str | None = None) -> KnowledgeEntry:
        return self.store.feedback(query_id, verdict, note)

    def add_conjunction_word(self, word: str) -> Lexicon:
        """Grow the conjunction set and persist the lexicon."""
        with self._lexicon_lock:
            updated = add_conjunction(self.lexicon, word)
            if updated is not self.lexicon:
                save_lexicon(updated, self.settings.lexicon_path)
                self.lexicon = updated
            return self.lexicon

    def schema_summary(self) -> dict:
        return {
            "tables": [
                {
                    "name": t.name,
                    "primaryKey": t.primary_key,
                    "fields": [{"name": f.name, "dtype": f.dtype}
                               for f in t.fields],
                    "rowCount": len(self.catalog.rows(t.name)),
                }
                for t in self.catalog.tables
            ]
        }

    def kb_entries(self, key: str) -> list[dict]:
        return [e.summary() for e in self.store.entries_for(key)]
