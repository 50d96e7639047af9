import json

import pytest

from flexq.errors import KnowledgeError
from flexq.knowledge import (ACCEPTED, PENDING, REJECTED, KnowledgeStore,
                             entry_id_for, normalize_query)
from flexq.resolver import Binding, ResolvedQuery


@pytest.fixture
def store(tmp_path):
    return KnowledgeStore(tmp_path / "kb.jsonl")


def sample_rq(table="suppliers"):
    return ResolvedQuery(base_table=Binding(table, table, "exact", 0),
                         join_tables=(), conditions=())


class TestNormalizeQuery:
    def test_lowercase_and_terminal_punctuation(self):
        assert normalize_query(
            "List supplier details where city is equal to London.") == \
            "list supplier details where city is equal to london"

    def test_whitespace_collapse(self):
        assert normalize_query("  LIST   orders  ") == "list orders"

    def test_punctuation_only_fails(self):
        with pytest.raises(KnowledgeError) as err:
            normalize_query(".")
        assert err.value.code == "empty-after-normalization"

    def test_idempotent(self):
        key = normalize_query("List orders WHERE x = 1.")
        assert normalize_query(key) == key


class TestRecord:
    def test_new_entry_is_pending(self, store):
        entry_id = store.record("list suppliers", "SELECT 1", sample_rq())
        entry = store.get(entry_id)
        assert entry.status == PENDING
        assert entry.accepts == 0 and entry.rejects == 0
        assert entry.created_at and entry.updated_at

    def test_repeat_returns_same_id_unchanged(self, store):
        first = store.record("k", "SELECT 1", sample_rq())
        again = store.record("k", "SELECT 1", sample_rq())
        assert first == again
        assert store.get(first).accepts == 0

    def test_same_key_different_sql_is_a_second_entry(self, store):
        a = store.record("k", "SELECT 1", sample_rq())
        b = store.record("k", "SELECT 2", sample_rq())
        assert a != b
        assert len(store.entries_for("k")) == 2

    def test_id_derives_from_key_and_sql(self):
        assert entry_id_for("k", "SELECT 1") == entry_id_for("k", "SELECT 1")
        assert entry_id_for("k", "SELECT 1") != entry_id_for("k", "SELECT 2")


class TestFeedback:
    def test_accept_pending(self, store):
        eid = store.record("k", "SELECT 1", sample_rq())
        entry = store.feedback(eid, "accept")
        assert entry.status == ACCEPTED and entry.accepts == 1

    def test_reject_pending(self, store):
        eid = store.record("k", "SELECT 1", sample_rq())
        entry = store.feedback(eid, "reject")
        assert entry.status == REJECTED and entry.rejects == 1

    def test_reject_after_accept_keeps_accepted(self, store):
        eid = store.record("k", "SELECT 1", sample_rq())
        store.feedback(eid, "accept")
        store.feedback(eid, "accept")
        entry = store.feedback(eid, "reject")
        assert entry.status == ACCEPTED
        assert entry.accepts == 2 and entry.rejects == 1

    def test_unknown_entry(self, store):
        with pytest.raises(KnowledgeError) as err:
            store.feedback("nope", "accept")
        assert err.value.code == "unknown-entry"

    def test_bad_verdict(self, store):
        eid = store.record("k", "SELECT 1", sample_rq())
        with pytest.raises(KnowledgeError) as err:
            store.feedback(eid, "maybe")
        assert err.value.code == "bad-verdict"

    def test_note_stored_verbatim(self, store):
        eid = store.record("k", "SELECT 1", sample_rq())
        store.feedback(eid, "reject", note="wrong table entirely")
        assert store.get(eid).notes == ["wrong table entirely"]


class TestLookup:
    def test_no_accepted_entries(self, store):
        store.record("k", "SELECT 1", sample_rq())
        assert store.lookup("k") is None

    def test_single_accepted(self, store):
        eid = store.record("k", "SELECT 1", sample_rq())
        store.feedback(eid, "accept")
        assert store.lookup("k").entry_id == eid

    def test_highest_accepts_wins(self, store):
        low = store.record("k", "SELECT 1", sample_rq())
        high = store.record("k", "SELECT 2", sample_rq())
        store.feedback(low, "accept")
        for _ in range(3):
            store.feedback(high, "accept")
        assert store.lookup("k").entry_id == high

    def test_rejected_entries_are_a_blocklist(self, store):
        eid = store.record("k", "SELECT 1", sample_rq())
        store.feedback(eid, "reject")
        assert store.lookup("k") is None
        assert store.blocked_sql("k") == {"SELECT 1"}


class TestPersistence:
    def test_round_trip_preserves_everything(self, store, tmp_path):
        a = store.record("k", "SELECT 1", sample_rq())
        b = store.record("k2", "SELECT 2", sample_rq("orders"))
        store.feedback(a, "accept")
        store.feedback(b, "reject", note="no")

        reloaded = KnowledgeStore(store.path)
        for eid in (a, b):
            original, copy = store.get(eid), reloaded.get(eid)
            assert original.summary() == copy.summary()
            assert original.resolved == copy.resolved
            assert original.notes == copy.notes

    def test_journal_is_json_lines(self, store):
        eid = store.record("k", "SELECT 1", sample_rq())
        store.feedback(eid, "accept")
        lines = store.path.read_text().splitlines()
        events = [json.loads(line) for line in lines]
        assert [e["event"] for e in events] == ["record", "feedback"]
        assert all("ts" in e for e in events)

    def test_corrupt_journal_line_is_an_error(self, tmp_path):
        path = tmp_path / "kb.jsonl"
        path.write_text("{not json}\n")
        with pytest.raises(KnowledgeError) as err:
            KnowledgeStore(path)
        assert err.value.code == "storage-io"
