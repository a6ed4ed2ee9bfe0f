from concurrent.futures import ThreadPoolExecutor

import pytest

from xaidesk.errors import BackendUnavailableError
from xaidesk.rehydrate import Rehydrator
from xaidesk.store import ArtifactRecord, Provenance, RagSummary, new_artifact_id
from xaidesk.vindex import VectorIndex

from support import CountingStore

PROBE_QUERIES = [
    "most important words",
    "growth positive sentiment",
    "weak plunge negative",
    "dataset distribution",
    "saliency image heat",
    "occlusion importance",
    "lime ranking",
    "top keywords per class",
    "baseline confidence",
    "strong earnings",
    "profit beats expectations",
    "neutral steady outlook",
    "asset level counts",
    "headline sentiment",
    "word importance scores",
    "explanation comparison",
    "evaluation metrics",
    "hallucination rate",
    "citations per response",
    "record revenue outlook",
]


def seed_store(store, user_id, n):
    topics = [
        "growth strong positive", "plunge weak negative", "steady stable neutral",
        "profit beats bank", "record revenue outlook", "dataset rows distribution",
        "saliency image patch", "importance scores words", "lime ranking features",
        "occlusion drop confidence",
    ]
    for i in range(n):
        artifact_id = new_artifact_id(timestamp_ms=1_000_000 + i)
        record = ArtifactRecord(
            artifact_id=artifact_id,
            user_id=user_id,
            plot_type="text_occlusion" if i % 2 == 0 else "text_lime",
            title=f"Explanation {i}",
            summary_for_rag=RagSummary(
                text=f"Target: positive. Top words: {topics[i % len(topics)]} item{i}",
                keywords=["occlusion" if i % 2 == 0 else "lime", f"kw{i}"],
                numeric_facts={"baseline": 0.9},
            ),
            provenance=Provenance(model="m", xai_method="occlusion", timestamp="2026-01-01T00:00:00Z"),
            payload_refs=[],
        )
        store.put_artifact(user_id, record, [])


def index_with_store(fs_store):
    index = VectorIndex()
    return index, Rehydrator(fs_store, index)


def rebuild_live(index, store, user_id):
    for record in store.list_metadata(user_id):
        entry = index.make_entry(
            record.artifact_id,
            record.summary_for_rag.text,
            record.plot_type,
            record.summary_for_rag.keywords,
        )
        index.upsert(user_id, entry)


def snapshot(index, user_id, queries, k=10):
    return {
        q: [(e.artifact_id, s) for e, s in index.search(user_id, q, k)] for q in queries
    }


class TestRehydration:
    def test_warm_collection_short_circuits_without_store_access(self, fs_store):
        counting = CountingStore(fs_store)
        index = VectorIndex()
        rehydrator = Rehydrator(counting, index)
        index.upsert("u", index.make_entry("a", "warm entry", "t", []))
        assert rehydrator.rehydrate_if_empty("u") == 0
        assert counting.scans == 0

    def test_empty_store_empty_collection_returns_zero(self, fs_store):
        index, rehydrator = index_with_store(fs_store)
        assert rehydrator.rehydrate_if_empty("ghost") == 0
        assert index.collection_size("ghost") == 0

    def test_fifteen_artifacts_rehydrate_and_search_identically(self, fs_store):
        seed_store(fs_store, "u", 15)
        index, rehydrator = index_with_store(fs_store)
        # live index as it would look before the simulated restart
        rebuild_live(index, fs_store, "u")
        before = snapshot(index, "u", PROBE_QUERIES)

        index.clear("u")  # simulated restart: RAM gone, storage intact
        assert rehydrator.rehydrate_if_empty("u") == 15
        after = snapshot(index, "u", PROBE_QUERIES)

        for query in PROBE_QUERIES:
            assert [i for i, _ in after[query]] == [i for i, _ in before[query]]
            for (_, a), (_, b) in zip(after[query], before[query]):
                assert a == pytest.approx(b, abs=1e-9)

    def test_second_call_is_a_noop(self, fs_store):
        seed_store(fs_store, "u", 5)
        index, rehydrator = index_with_store(fs_store)
        assert rehydrator.rehydrate_if_empty("u") == 5
        assert rehydrator.rehydrate_if_empty("u") == 0

    def test_single_flight_under_concurrency(self, fs_store):
        seed_store(fs_store, "u", 20)
        counting = CountingStore(fs_store)
        index = VectorIndex()
        rehydrator = Rehydrator(counting, index)
        with ThreadPoolExecutor(max_workers=8) as pool:
            counts = list(pool.map(lambda _: rehydrator.rehydrate_if_empty("u"), range(8)))
        assert counting.scans == 1
        assert sorted(counts, reverse=True)[0] == 20
        assert sum(counts) == 20  # everyone else saw a warm collection
        assert index.collection_size("u") == 20

    def test_partial_failure_clears_collection(self, fs_store):
        seed_store(fs_store, "u", 5)
        failing = CountingStore(fs_store, fail_gets=True)
        index = VectorIndex()
        rehydrator = Rehydrator(failing, index)
        with pytest.raises(BackendUnavailableError):
            rehydrator.rehydrate_if_empty("u")
        assert index.collection_size("u") == 0
        # next call retries and succeeds once the backend recovers
        failing.fail_gets = False
        assert rehydrator.rehydrate_if_empty("u") == 5

    def test_users_rehydrate_independently(self, fs_store):
        seed_store(fs_store, "a", 3)
        seed_store(fs_store, "b", 4)
        index, rehydrator = index_with_store(fs_store)
        assert rehydrator.rehydrate_if_empty("a") == 3
        assert rehydrator.rehydrate_if_empty("b") == 4
        assert index.collection_size("a") == 3
        assert index.collection_size("b") == 4
