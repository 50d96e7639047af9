"""Self-learning store for past translations and user verdicts.

State lives in an append-only JSON-lines journal: one ``record`` event per
new (query key, sql) pair and one ``feedback`` event per verdict. In-memory
state is the fold of the journal, so restarts reconstruct it exactly.
Entry ids are derived from the (key, sql) pair, which makes recording
idempotent across replays.

Accepted entries replay on later translations of the same key; rejected
ones act as a blocklist steering the resolver to its next-ranked candidate.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import KnowledgeError
from .resolver import ResolvedQuery

_TERMINAL_PUNCT = ".,;?!"

PENDING = "pending"
ACCEPTED = "accepted"
REJECTED = "rejected"


def normalize_query(raw: str) -> str:
    """Lookup key: lowercase, terminal punctuation stripped, whitespace
    collapsed."""
    if not raw or not raw.strip():
        raise KnowledgeError("query is empty", code="empty-after-normalization")
    key = " ".join(raw.lower().split()).rstrip(_TERMINAL_PUNCT).strip()
    if not key:
        raise KnowledgeError(
            f"query {raw!r} is empty after normalization",
            code="empty-after-normalization")
    return key


def entry_id_for(key: str, sql: str) -> str:
    digest = hashlib.sha1(f"{key}\n{sql}".encode("utf-8")).hexdigest()
    return digest[:12]


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class KnowledgeEntry:
    entry_id: str
    key: str
    sql: str
    resolved: ResolvedQuery
    accepts: int = 0
    rejects: int = 0
    status: str = PENDING
    created_at: str = ""
    updated_at: str = ""
    notes: list[str] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "query_id": self.entry_id,
            "key": self.key,
            "sql": self.sql,
            "status": self.status,
            "accepts": self.accepts,
            "rejects": self.rejects,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
        }


class KnowledgeStore:
    """Journal-backed entry store; mutations go through a single writer."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries: dict[str, KnowledgeEntry] = {}
        if self.path.exists():
            self._replay()

    def _replay(self) -> None:
        with self.path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    event = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise KnowledgeError(
                        f"{self.path}:{lineno}: bad journal line: {exc}",
                        code="storage-io") from exc
                self._apply(event)

    def _apply(self, event: dict) -> KnowledgeEntry:
        kind = event.get("event")
        if kind == "record":
            entry = self._entries.get(event["id"])
            if entry is None:
                entry = KnowledgeEntry(
                    entry_id=event["id"], key=event["key"], sql=event["sql"],
                    resolved=ResolvedQuery.from_dict(event["resolved"]),
                    created_at=event["ts"], updated_at=event["ts"])
                self._entries[entry.entry_id] = entry
            return entry
        if kind == "feedback":
            entry = self._entries.get(event["id"])
            if entry is None:
                raise KnowledgeError(
                    f"feedback for unknown entry {event['id']!r}",
                    code="unknown-entry")
            verdict = event["verdict"]
            if verdict == "accept":
                entry.accepts += 1
                entry.status = ACCEPTED
            else:
                entry.rejects += 1
                # an entry someone accepted stays accepted; history wins
                if entry.accepts == 0:
                    entry.status = REJECTED
            if event.get("note"):
                entry.notes.append(event["note"])
            entry.updated_at = event["ts"]
            return entry
        raise KnowledgeError(f"unknown journal event {kind!r}",
                             code="storage-io")

    def _append(self, event: dict) -> None:
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(event) + "\n")
        except OSError as exc:
            raise KnowledgeError(f"cannot append to journal {self.path}: "
                                 f"{exc}", code="storage-io") from exc

    def record(self, key: str, sql: str, resolved: ResolvedQuery) -> str:
        """Create (or find) the entry for this (key, sql) pair."""
        entry_id = entry_id_for(key, sql)
        with self._lock:
            if entry_id in self._entries:
                return entry_id
            event = {"event": "record", "id": entry_id, "key": key,
                     "sql": sql, "resolved": resolved.to_dict(), "ts": _now()}
            self._apply(event)
            self._append(event)
        return entry_id

    def feedback(self, entry_id: str, verdict: str,
                 note: str | None = None) -> KnowledgeEntry:
        if verdict not in ("accept", "reject"):
            raise KnowledgeError(f"verdict must be accept or reject, got "
                                 f"{verdict!r}", code="bad-verdict")
        with self._lock:
            if entry_id not in self._entries:
                raise KnowledgeError(f"unknown entry {entry_id!r}",
                                     code="unknown-entry")
            event = {"event": "feedback", "id": entry_id, "verdict": verdict,
                     "note": note, "ts": _now()}
            entry = self._apply(event)
            self._append(event)
        return entry

    def get(self, entry_id: str) -> KnowledgeEntry | None:
        return self._entries.get(entry_id)

    def entries_for(self, key: str) -> list[KnowledgeEntry]:
        return sorted((e for e in self._entries.values() if e.key == key),
                      key=lambda e: e.created_at)

    def lookup(self, key: str) -> KnowledgeEntry | None:
        """Best accepted entry for a key: most accepts, then most recent."""
        accepted = [e for e in self._entries.values()
                    if e.key == key and e.status == ACCEPTED]
        if not accepted:
            return None
        return max(accepted, key=lambda e: (e.accepts, e.updated_at))

    def blocked_sql(self, key: str) -> set[str]:
        """SQL texts the user rejected for this key."""
        return {e.sql for e in self._entries.values()
                if e.key == key and e.status == REJECTED}
