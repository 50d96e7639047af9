"""Edit distances and ranked fuzzy candidate selection.

Two distances are offered: classic Levenshtein (insert/delete/substitute)
and its restricted Damerau variant (optimal string alignment), which adds
adjacent transposition as a single operation. Both case-fold their inputs
before comparing. ``best_match`` ranks a candidate set by distance with a
lexicographic tie-break so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import MatchingError


def levenshtein(a: str, b: str) -> int:
    """Minimum single-character inserts/deletes/substitutes from a to b."""
    a, b = a.casefold(), b.casefold()
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(
                previous[j] + 1,            # delete from a
                current[j - 1] + 1,         # insert into a
                previous[j - 1] + (ca != cb),
            ))
        previous = current
    return previous[-1]


def damerau_levenshtein(a: str, b: str) -> int:
    """Levenshtein plus adjacent transposition (restricted variant).

    This is the optimal-string-alignment form: a transposed pair cannot be
    edited again, so e.g. ("ca", "abc") costs 3, not 2.
    """
    a, b = a.casefold(), b.casefold()
    if a == b:
        return 0
    rows = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        rows[i][0] = i
    for j in range(len(b) + 1):
        rows[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            best = min(rows[i - 1][j] + 1,
                       rows[i][j - 1] + 1,
                       rows[i - 1][j - 1] + cost)
            if (i > 1 and j > 1 and a[i - 1] == b[j - 2]
                    and a[i - 2] == b[j - 1]):
                best = min(best, rows[i - 2][j - 2] + 1)
            rows[i][j] = best
    return rows[-1][-1]


@dataclass(frozen=True)
class MatchResult:
    candidate: str
    distance: int
    rank: int  # dense: candidates at equal distance share a rank


def best_match(needle: str, candidates: Iterable[str], max_distance: int,
               distance_fn: Callable[[str, str], int] = levenshtein,
               ) -> list[MatchResult]:
    """All candidates within ``max_distance`` of ``needle``, best first.

    Sorted by (distance, candidate); ranks are dense over distances. An
    empty candidate set is a caller bug, not an empty answer.
    """
    pool = list(candidates)
    if not pool:
        raise MatchingError("best_match called with no candidates",
                            code="empty-candidate-set")
    scored = sorted(
        ((distance_fn(needle, c), c) for c in pool),
        key=lambda pair: (pair[0], pair[1].lower(), pair[1]),
    )
    results: list[MatchResult] = []
    rank = 0
    last_distance: int | None = None
    for distance, candidate in scored:
        if distance > max_distance:
            break
        if distance != last_distance:
            rank += 1
            last_distance = distance
        results.append(MatchResult(candidate=candidate, distance=distance,
                                   rank=rank))
    return results
