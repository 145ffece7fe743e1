import json

import pytest

from clonewatch.errors import SchemaViolation, TornWrite
from clonewatch.store import Store


def test_cache_round_trip(tmp_path):
    store = Store(tmp_path)
    store.cache_put("pages", "http://x.test/", b"hello bytes")
    assert store.cache_get("pages", "http://x.test/") == b"hello bytes"


def test_cache_miss(tmp_path):
    assert Store(tmp_path).cache_get("pages", "absent") is None


def test_cache_ttl_zero_never_returned(tmp_path):
    store = Store(tmp_path)
    store.cache_put("pages", "k", b"v", ttl=0)
    assert store.cache_get("pages", "k") is None


def test_cache_namespaces_isolated(tmp_path):
    store = Store(tmp_path)
    store.cache_put("a", "k", b"1")
    store.cache_put("b", "k", b"2")
    assert store.cache_get("a", "k") == b"1"
    assert store.cache_get("b", "k") == b"2"


def test_corrupt_entry_is_a_miss(tmp_path):
    store = Store(tmp_path)
    store.cache_put("pages", "k", b"value")
    path = store._cache_path("pages", "k")
    entry = json.loads(path.read_text())
    entry["value_hex"] = b"tampered".hex()
    path.write_text(json.dumps(entry))
    assert store.cache_get("pages", "k") is None


def test_ledger_sequences(tmp_path):
    store = Store(tmp_path)
    seqs = [store.ledger_append("r1", "IterationClosed", {"iteration": i}, "t")
            for i in range(3)]
    assert seqs == [1, 2, 3]
    events = store.ledger_events("r1")
    assert [e.seq for e in events] == [1, 2, 3]
    assert [e.payload["iteration"] for e in events] == [0, 1, 2]


def test_ledger_scan_resumes_numbering(tmp_path):
    store = Store(tmp_path)
    store.ledger_append("r1", "IterationClosed", {"iteration": 1}, "t")
    fresh = Store(tmp_path)  # new process, same files
    assert fresh.ledger_append("r1", "IterationClosed", {"iteration": 2}, "t") == 2


def test_ledger_empty_run(tmp_path):
    assert Store(tmp_path).ledger_events("missing") == []


def test_ledger_rejects_unknown_kind(tmp_path):
    with pytest.raises(SchemaViolation):
        Store(tmp_path).ledger_append("r1", "NotAKind", {}, "t")


def test_ledger_rejects_unserializable_payload(tmp_path):
    with pytest.raises(SchemaViolation):
        Store(tmp_path).ledger_append("r1", "IterationClosed", {"x": object()}, "t")


def test_torn_tail_is_dropped(tmp_path):
    store = Store(tmp_path)
    for i in range(3):
        store.ledger_append("r1", "IterationClosed", {"iteration": i}, "t")
    path = store._events_path("r1")
    raw = path.read_bytes()
    path.write_bytes(raw + b'{"run_id": "r1", "seq": 4, "kind": "Iterat')
    events = Store(tmp_path).ledger_events("r1")
    assert [e.seq for e in events] == [1, 2, 3]


def test_truncation_at_line_boundary_replays_prefix(tmp_path):
    store = Store(tmp_path)
    for i in range(5):
        store.ledger_append("r1", "IterationClosed", {"iteration": i}, "t")
    path = store._events_path("r1")
    lines = path.read_text().splitlines(keepends=True)
    for cut in range(len(lines) + 1):
        path.write_text("".join(lines[:cut]))
        events = Store(tmp_path).ledger_events("r1")
        assert [e.seq for e in events] == list(range(1, cut + 1))


def test_checksum_mismatch_raises_torn_write(tmp_path):
    store = Store(tmp_path)
    store.ledger_append("r1", "IterationClosed", {"iteration": 1}, "t")
    store.ledger_append("r1", "IterationClosed", {"iteration": 2}, "t")
    path = store._events_path("r1")
    lines = path.read_text().splitlines()
    lines[0] = lines[0].replace('"iteration":1', '"iteration":9')
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(TornWrite):
        Store(tmp_path).ledger_events("r1")
