"""Turns a raw flexible query into a structured intermediate form.

The pipeline front half: whitespace tokenization, conjunction detection,
display/criteria partition, expression mapping of conditional phrases to
operator codes, and stop-word removal on the display side. The output
:class:`QueryIR` is everything the resolver needs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .lexicon import Lexicon

_TRAILING_PUNCT = ".,;?!"
_QUOTES = "'\""
_SYMBOL_SPLIT = re.compile(r"(>=|<=|!=|=|>|<)")

SYMBOL_OPS = {">=": "GTE", "<=": "LTE", "!=": "NEQ",
              "=": "EQ", ">": "GT", "<": "LT"}

NUMBER_RE = re.compile(r"[+-]?\d+(\.\d+)?")


@dataclass(frozen=True)
class Condition:
    """One criteria clause: the user's field words, operator, literal."""

    field_phrase: tuple[str, ...]
    operator: str
    literal: str


@dataclass(frozen=True)
class QueryIR:
    raw: str
    tokens: tuple[str, ...]            # the full token universe, in order
    display_tokens: tuple[str, ...]    # display part after stop-word removal
    conjunction: str                   # "" when the query has none
    conditions: tuple[Condition, ...]


def tokenize(raw: str) -> list[str]:
    """Whitespace-split tokens with trailing sentence punctuation stripped.

    Original casing is preserved; callers lowercase for matching.
    """
    if not raw or not raw.strip():
        raise ParseError("query is empty", code="empty-query")
    tokens = []
    for piece in raw.split():
        piece = piece.rstrip(_TRAILING_PUNCT)
        if piece:
            tokens.append(piece)
    if not tokens:
        raise ParseError("query is empty after punctuation stripping",
                         code="empty-query")
    return tokens


def detect_conjunction(tokens: list[str], lex: Lexicon) -> tuple[int, str] | None:
    """First token found in the conjunction set, or None."""
    for i, tok in enumerate(tokens):
        if tok.lower() in lex.conjunctions:
            return i, tok.lower()
    return None


def partition(tokens: list[str], conj_index: int) -> tuple[list[str], list[str]]:
    """Split tokens around the conjunction; it belongs to neither side."""
    if conj_index == 0:
        raise ParseError("query starts with its conjunction, so nothing "
                         "names what to display", code="empty-display")
    return tokens[:conj_index], tokens[conj_index + 1:]


def remove_stopwords(tokens: list[str], lex: Lexicon) -> list[str]:
    return [t for t in tokens if t.lower() not in lex.stop_words]


def _split_symbols(tokens: list[str]) -> list[str]:
    # "unitprice>200" -> ["unitprice", ">", "200"]; quoted tokens are left
    # alone so symbols inside quoted literals survive
    out: list[str] = []
    for tok in tokens:
        if tok and tok[0] in _QUOTES:
            out.append(tok)
            continue
        out.extend(p for p in _SYMBOL_SPLIT.split(tok) if p)
    return out


def _match_phrase(tokens_lower: list[str], start: int, phrase: tuple[str, ...],
                  lex: Lexicon) -> int | None:
    """End index if ``phrase`` matches at ``start``, skipping stop words
    between phrase words, else None."""
    if tokens_lower[start] != phrase[0]:
        return None
    j, k = start, 0
    while j < len(tokens_lower) and k < len(phrase):
        if tokens_lower[j] == phrase[k]:
            j += 1
            k += 1
        elif tokens_lower[j] in lex.stop_words:
            j += 1
        else:
            return None
    return j if k == len(phrase) else None


def _find_operator(tokens: list[str], lex: Lexicon
                   ) -> tuple[str, int, int] | None:
    """Best (operator, start, end) in a criteria segment.

    The longest expression phrase wins; at equal length the leftmost match
    wins. Symbolic operators count as one-word phrases.
    """
    tokens_lower = [t.lower() for t in tokens]
    matches: list[tuple[int, int, int, str]] = []  # (-words, start, end, op)
    for rule in lex.rules_longest_first():
        for i in range(len(tokens)):
            end = _match_phrase(tokens_lower, i, rule.phrase, lex)
            if end is not None:
                matches.append((-len(rule.phrase), i, end, rule.operator))
                break  # leftmost occurrence of this phrase is enough
    for i, tok in enumerate(tokens):
        op = SYMBOL_OPS.get(tok)
        if op is not None:
            matches.append((-1, i, i + 1, op))
    if not matches:
        return None
    _, start, end, op = min(matches)
    return op, start, end


def _take_literal(tokens: list[str], start: int, segment_text: str
                  ) -> tuple[str, int]:
    """Literal beginning at ``start``; quoted literals may span tokens."""
    if start >= len(tokens):
        raise ParseError(f"no literal after the operator in: {segment_text}",
                         code="missing-literal")
    first = tokens[start]
    if first and first[0] in _QUOTES:
        quote = first[0]
        parts = []
        j = start
        closed = False
        while j < len(tokens):
            tok = tokens[j]
            parts.append(tok)
            # the opening token only closes the literal with a quote
            # beyond position 0 ("'London'" closes, "'New" does not)
            if tok.endswith(quote) and (j > start or len(tok) > 1):
                closed = True
                break
            j += 1
        literal = " ".join(parts).strip(quote)
        end = j + 1 if closed else len(tokens)
    else:
        literal = first
        end = start + 1
    if not literal:
        raise ParseError(f"empty literal in: {segment_text}",
                         code="missing-literal")
    return literal, end


def map_expressions(criteria_tokens: list[str], lex: Lexicon) -> list[Condition]:
    """Structured conditions from the criteria part.

    Conditions are split on the token "and" before scanning. Within each
    segment the operator comes from the longest matching expression phrase
    (phrase words must be contiguous once intervening stop words are
    dropped) or from a symbolic operator, which may arrive glued to its
    operands. Tokens left of the operator, minus stop words, form the field
    phrase; the token right of it is the literal (quoted literals may span
    several tokens).
    """
    if not criteria_tokens:
        raise ParseError("criteria part is empty", code="no-operator-found")
    segments: list[list[str]] = [[]]
    for tok in criteria_tokens:
        if tok.lower() == "and":
            segments.append([])
        else:
            segments[-1].append(tok)

    conditions = []
    for segment in segments:
        segment_text = " ".join(segment)
        tokens = _split_symbols(segment)
        found = _find_operator(tokens, lex)
        if found is None:
            raise ParseError(f"no comparison operator found in: "
                             f"{segment_text or '<empty>'}",
                             code="no-operator-found")
        op, start, end = found
        field_phrase = tuple(remove_stopwords(tokens[:start], lex))
        literal, _ = _take_literal(tokens, end, segment_text)
        conditions.append(Condition(field_phrase=field_phrase, operator=op,
                                    literal=literal))
    return conditions


def parse(raw: str, lex: Lexicon) -> QueryIR:
    """tokenize -> detect_conjunction -> partition -> map_expressions ->
    stop-word removal on the display part."""
    tokens = tokenize(raw)
    found = detect_conjunction(tokens, lex)
    if found is None:
        # no criteria: the whole query names what to display
        display_raw, conjunction, conditions = tokens, "", []
    else:
        index, conjunction = found
        display_raw, criteria_raw = partition(tokens, index)
        conditions = map_expressions(criteria_raw, lex)
    display = remove_stopwords(display_raw, lex)
    if not display:
        raise ParseError("nothing names what to display once stop words are "
                         "removed", code="empty-display")
    return QueryIR(raw=raw, tokens=tuple(tokens),
                   display_tokens=tuple(display), conjunction=conjunction,
                   conditions=tuple(conditions))
