"""Editable training structures consulted by the pipeline.

A :class:`Lexicon` bundles the expression-mapping rules (conditional phrases
to comparison operators), the conjunction set that splits a query into its
display and criteria parts, the stop-word set, and the table/field synonym
sets used for semantic matching. All words are lowercased at load time;
matching elsewhere is case-insensitive by construction.

Lexicons are immutable: mutation helpers return a new value, so a loaded
lexicon can be shared freely across request handlers.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import LexiconError

OPERATOR_CODES = ("EQ", "NEQ", "GT", "LT", "GTE", "LTE")

_WORD_FORBIDDEN = set(string.punctuation)


@dataclass(frozen=True)
class ExpressionRule:
    """One conditional phrase ("greater than") and its operator code."""

    phrase: tuple[str, ...]
    operator: str


@dataclass(frozen=True)
class Lexicon:
    expression_rules: tuple[ExpressionRule, ...] = ()
    conjunctions: frozenset[str] = frozenset()
    stop_words: frozenset[str] = frozenset()
    table_synonyms: dict[str, frozenset[str]] = field(default_factory=dict)
    field_synonyms: dict[tuple[str, str], frozenset[str]] = field(default_factory=dict)

    def rule_first_words(self) -> frozenset[str]:
        return frozenset(r.phrase[0] for r in self.expression_rules)

    def rules_longest_first(self) -> tuple[ExpressionRule, ...]:
        """Rules ordered for greedy matching: longest phrase wins ties."""
        return tuple(sorted(self.expression_rules,
                            key=lambda r: (-len(r.phrase), r.phrase)))

    def is_stop_word(self, word: str) -> bool:
        return word.lower() in self.stop_words

    def tables_for_synonym(self, word: str) -> list[str]:
        """Canonical table names whose synonym set contains ``word``."""
        w = word.lower()
        return [t for t, syns in self.table_synonyms.items() if w in syns]

    def field_synonym_words(self, table: str, field_name: str) -> frozenset[str]:
        return self.field_synonyms.get((table.lower(), field_name.lower()),
                                       frozenset())


def _check_word(word: str, where: str) -> str:
    if not word:
        raise LexiconError(f"{where}: empty word", code="invariant-violation")
    if word != word.lower():
        raise LexiconError(f"{where}: {word!r} is not lowercase",
                           code="invariant-violation")
    if any(ch in _WORD_FORBIDDEN for ch in word):
        raise LexiconError(f"{where}: {word!r} contains punctuation",
                           code="invariant-violation")
    return word


def validate_lexicon(lex: Lexicon) -> Lexicon:
    """Enforce every lexicon invariant; violations raise, never auto-fix."""
    seen: set[tuple[str, ...]] = set()
    for rule in lex.expression_rules:
        if not rule.phrase:
            raise LexiconError("expression rule with empty phrase",
                               code="invariant-violation")
        for word in rule.phrase:
            _check_word(word, f"expression phrase {' '.join(rule.phrase)!r}")
        if rule.operator not in OPERATOR_CODES:
            raise LexiconError(
                f"expression phrase {' '.join(rule.phrase)!r}: unknown operator "
                f"{rule.operator!r}", code="invariant-violation")
        if rule.phrase in seen:
            raise LexiconError(
                f"duplicate expression phrase {' '.join(rule.phrase)!r}",
                code="invariant-violation")
        seen.add(rule.phrase)

    first_words = lex.rule_first_words()
    for name, words in (("conjunction", lex.conjunctions),
                        ("stop word", lex.stop_words)):
        for word in words:
            _check_word(word, name)
            if word in first_words:
                raise LexiconError(
                    f"{name} {word!r} collides with an expression phrase's "
                    f"first word", code="invariant-violation")

    for table, syns in lex.table_synonyms.items():
        if table.lower() in syns:
            raise LexiconError(
                f"table synonyms for {table!r} contain the canonical name",
                code="invariant-violation")
    for (table, fname), syns in lex.field_synonyms.items():
        if fname.lower() in syns:
            raise LexiconError(
                f"field synonyms for {table}.{fname} contain the canonical name",
                code="invariant-violation")
    return lex


def add_conjunction(lex: Lexicon, word: str) -> Lexicon:
    """Return a lexicon whose conjunction set contains ``word``.

    Idempotent and monotone. Rejects words that would make expression
    mapping ambiguous (word equals some rule's first word).
    """
    word = word.strip().lower()
    _check_word(word, "conjunction")
    if word in lex.rule_first_words():
        raise LexiconError(
            f"conjunction {word!r} collides with an expression phrase's first "
            f"word", code="ambiguity")
    if word in lex.conjunctions:
        return lex
    return replace(lex, conjunctions=lex.conjunctions | {word})


def load_lexicon(path: str | Path) -> Lexicon:
    """Load and validate a lexicon from its JSON file format."""
    path = Path(path)
    if not path.is_file():
        raise LexiconError(f"lexicon file not found: {path}", code="file-missing")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise LexiconError(f"lexicon file {path} is not valid JSON: {exc}",
                           code="malformed-format") from exc
    return lexicon_from_dict(raw, source=str(path))


def lexicon_from_dict(raw: dict, source: str = "<dict>") -> Lexicon:
    if not isinstance(raw, dict):
        raise LexiconError(f"{source}: top level must be a JSON object",
                           code="malformed-format")
    try:
        rules = tuple(
            ExpressionRule(phrase=tuple(entry["phrase"].lower().split()),
                           operator=str(entry["operator"]))
            for entry in raw.get("expressionRules", ())
        )
        conjunctions = frozenset(w.lower() for w in raw.get("conjunctions", ()))
        stop_words = frozenset(w.lower() for w in raw.get("stopWords", ()))
        table_syn = {
            table.lower(): frozenset(w.lower() for w in words)
            for table, words in raw.get("tableSynonyms", {}).items()
        }
        field_syn = {}
        for key, words in raw.get("fieldSynonyms", {}).items():
            table, _, fname = key.partition(".")
            if not table or not fname:
                raise LexiconError(
                    f"{source}: field synonym key {key!r} must be "
                    f"'table.field'", code="malformed-format")
            field_syn[(table.lower(), fname.lower())] = frozenset(
                w.lower() for w in words)
    except (KeyError, TypeError, AttributeError) as exc:
        raise LexiconError(f"{source}: malformed lexicon entry: {exc}",
                           code="malformed-format") from exc
    return validate_lexicon(Lexicon(
        expression_rules=rules,
        conjunctions=conjunctions,
        stop_words=stop_words,
        table_synonyms=table_syn,
        field_synonyms=field_syn,
    ))


def lexicon_to_dict(lex: Lexicon) -> dict:
    return {
        "expressionRules": [
            {"phrase": " ".join(r.phrase), "operator": r.operator}
            for r in lex.expression_rules
        ],
        "conjunctions": sorted(lex.conjunctions),
        "stopWords": sorted(lex.stop_words),
        "tableSynonyms": {t: sorted(ws)
                          for t, ws in sorted(lex.table_synonyms.items())},
        "fieldSynonyms": {f"{t}.{f}": sorted(ws)
                          for (t, f), ws in sorted(lex.field_synonyms.items())},
    }


def save_lexicon(lex: Lexicon, path: str | Path) -> None:
    """Persist so that ``load_lexicon(path)`` round-trips to an equal value."""
    path = Path(path)
    try:
        path.write_text(json.dumps(lexicon_to_dict(lex), indent=2) + "\n",
                        encoding="utf-8")
    except OSError as exc:
        raise LexiconError(f"cannot write lexicon to {path}: {exc}",
                           code="io-failure") from exc
