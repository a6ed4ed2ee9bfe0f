"""Acceptance criteria, one test per criterion.

Each test prints a single pass/fail line (visible with ``pytest -s`` or on
failure); tolerances are pinned inline. Run with:

    pytest tests/test_acceptance.py -v -s
"""

import time
from contextlib import contextmanager
from importlib import resources

import numpy as np
import pytest
from starlette.testclient import TestClient

from xaidesk.explainers import (
    Attribution,
    ExplanationResult,
    compare_methods,
    lime_explain,
    occlusion_explain,
    saliency_map,
)
from xaidesk.faithfulness import (
    aggregate_rows,
    evaluate_response,
    load_ground_truth,
    load_queries,
    run_eval_suite,
)
from xaidesk.faithfulness.extract import quoted_tokens
from xaidesk.faithfulness.scoring import stored_vocabulary
from xaidesk.gateway import ConstantDetector, RegionMeanDetector, load_lexicon
from xaidesk.rag import ExtractiveGenerator
from xaidesk.rehydrate import Rehydrator
from xaidesk.service import AppConfig, create_app
from xaidesk.store import ArtifactStore, FilesystemBackend, S3Backend, new_artifact_id
from xaidesk.vindex import VectorIndex

from s3double import start_double
from support import ConstantClassifier, LinearProbeClassifier
from test_lime import oracle_wls_coefficients
from test_occlusion import oracle_occlusion
from test_rehydrate import PROBE_QUERIES, rebuild_live, seed_store, snapshot
from test_store import make_record, payloads_for

DEMO_CSV = resources.files("xaidesk.data").joinpath("demo_headlines.csv").read_bytes()


@contextmanager
def criterion(number: int, description: str):
    try:
        yield
    except BaseException:
        print(f"[criterion {number:02d}] FAIL: {description}")
        raise
    print(f"[criterion {number:02d}] PASS: {description}")


# 25 texts, each at most 8 tokens, over the bundled lexicon's vocabulary
ORACLE_CORPUS = [
    "strong growth in oncology pipeline",
    "weak holiday sales plunge again",
    "steady demand for shipping services",
    "record revenue and upbeat outlook",
    "profit beats expectations at the bank",
    "warns of losses amid rising costs",
    "routine maintenance schedule announced today",
    "shares rallies after strong earnings surprise",
    "regulators fine energy group over breach",
    "stable payout policy maintains confidence",
    "recalls vehicles after brake failure",
    "strong profit growth",
    "weak weak weak",
    "growth plunge growth weak",
    "upbeat outlook despite rising costs",
    "approval wins strong demand",
    "steady steady strong growth",
    "losses losses and more losses",
    "one two three four five",
    "Strong, GROWTH! plunge?",
    "record record record profit",
    "fine fine fine",
    "demand outlook revenue earnings surprise",
    "breach emissions failure recalls warns",
    "maintains stable routine schedule steady",
]


def test_criterion_01_occlusion_oracle_equivalence():
    with criterion(1, "occlusion matches brute-force leave-one-out on 25 texts to 1e-9 in <5s"):
        model = load_lexicon()
        assert len(ORACLE_CORPUS) == 25
        assert all(len(t.split()) <= 8 for t in ORACLE_CORPUS)
        started = time.perf_counter()
        for text in ORACLE_CORPUS:
            target, baseline, expected = oracle_occlusion(
                text, model.weights, model.label_set, model.temperature
            )
            result = occlusion_explain(model, text)
            assert result.target_class == target
            assert abs(result.baseline_confidence - baseline) <= 1e-9
            by_position = {a.position: a.importance for a in result.attributions}
            assert len(by_position) == len(expected)
            for position, importance in enumerate(expected):
                assert abs(by_position[position] - importance) <= 1e-9
        elapsed = time.perf_counter() - started
        assert elapsed < 5.0, f"took {elapsed:.2f}s"


def test_criterion_02_constant_model_zero_attribution():
    with criterion(2, "occlusion importances are exactly 0 for a constant classifier"):
        model = ConstantClassifier({"neg": 0.25, "neu": 0.25, "pos": 0.5})
        for text in ORACLE_CORPUS[:5]:
            result = occlusion_explain(model, text)
            assert all(a.importance == 0.0 for a in result.attributions)


def test_criterion_03_lime_linear_oracle_recovery():
    with criterion(3, "lime recovers the closed-form WLS solution within 0.02, ranking exact, <10s"):
        started = time.perf_counter()
        betas = {"up": 0.10, "down": -0.05, "flat": 0.02}
        model = LinearProbeClassifier(betas=betas)
        oracle = oracle_wls_coefficients(betas)
        result = lime_explain(model, "up down flat", k=3, n_samples=2000, seed=7)
        by_position = {a.position: a.importance for a in result.attributions}
        for position, expected in enumerate(oracle):
            assert abs(by_position[position] - expected) <= 0.02
        assert [a.position for a in result.attributions] == [0, 1, 2]
        elapsed = time.perf_counter() - started
        assert elapsed < 10.0, f"took {elapsed:.2f}s"


def test_criterion_04_reproducibility_bitwise():
    with criterion(4, "identical seeds/params give bitwise-identical serializations, both methods"):
        model = load_lexicon()
        text = "strong growth in oncology pipeline"
        kwargs = dict(sample_id="d:0", created_at="2026-01-01T00:00:00Z")
        occ_a = occlusion_explain(model, text, **kwargs)
        occ_b = occlusion_explain(model, text, **kwargs)
        assert occ_a.to_json() == occ_b.to_json()
        lime_a = lime_explain(model, text, k=7, n_samples=500, seed=11, **kwargs)
        lime_b = lime_explain(model, text, k=7, n_samples=500, seed=11, **kwargs)
        assert lime_a.to_json() == lime_b.to_json()


def test_criterion_05_rehydration_equivalence(tmp_path):
    with criterion(5, "50 artifacts: snapshot == post-rehydration results; count 50 then 0"):
        store = ArtifactStore(FilesystemBackend(tmp_path / "store"))
        seed_store(store, "u", 50)
        index = VectorIndex()
        rehydrator = Rehydrator(store, index)
        rebuild_live(index, store, "u")
        before = snapshot(index, "u", PROBE_QUERIES, k=10)
        assert len(PROBE_QUERIES) == 20

        index.clear("u")
        assert rehydrator.rehydrate_if_empty("u") == 50
        after = snapshot(index, "u", PROBE_QUERIES, k=10)
        for query in PROBE_QUERIES:
            assert [i for i, _ in after[query]] == [i for i, _ in before[query]]
            for (_, a), (_, b) in zip(after[query], before[query]):
                assert abs(a - b) <= 1e-9
        assert rehydrator.rehydrate_if_empty("u") == 0


def test_criterion_06_rehydration_scaling_trend(tmp_path):
    with criterion(6, "rehydration wall time over N in {15,50,100} fits a linear trend, R^2 >= 0.9"):
        sizes = [15, 50, 100]
        means = []
        for n in sizes:
            store = ArtifactStore(FilesystemBackend(tmp_path / f"store-{n}"))
            seed_store(store, "u", n)
            index = VectorIndex()
            rehydrator = Rehydrator(store, index)
            runs = []
            for _ in range(5):
                index.clear("u")
                started = time.perf_counter()
                count = rehydrator.rehydrate_if_empty("u")
                runs.append(time.perf_counter() - started)
                assert count == n
            means.append(sum(runs) / len(runs))
        x = np.array(sizes, dtype=float)
        y = np.array(means)
        slope, intercept = np.polyfit(x, y, 1)
        predicted = slope * x + intercept
        ss_res = float(((y - predicted) ** 2).sum())
        ss_tot = float(((y - y.mean()) ** 2).sum())
        r_squared = 1.0 - ss_res / ss_tot
        assert slope > 0, f"negative trend: {means}"
        assert r_squared >= 0.9, f"R^2 {r_squared:.3f} with means {means}"


def test_criterion_07_faithfulness_fixture_exactness():
    with criterion(7, "hand-labeled 12-response transcript scores exactly its hand-computed values"):
        import transcript_fixture as fx

        rows = []
        for query, response, expected in fx.responses():
            row = evaluate_response(query, response, fx.TRUTH)
            assert {k: row[k] for k in expected} == expected, query.id
            rows.append(row)
        categories = {q.category for q, _, _, _ in fx.TRANSCRIPT}
        assert categories == {"single_method", "comparative", "adversarial", "dataset_level"}
        assert len(rows) >= 12
        report = aggregate_rows(rows, strategy="naive")
        assert report.grounding_completeness == 17 / 18
        assert report.hallucination_rate == 2 / 16
        assert report.citations_per_response == 11 / 12
        # the module-example fixtures are present: 0.5 completeness and 2 citations
        assert any(
            r["numeric_claims"] == 2 and r["grounded_claims"] == 1 for r in rows
        )
        assert any(r["citation_count"] == 2 for r in rows)


@pytest.fixture
def demo_environment(tmp_path):
    """Demo corpus ingested and explained, ready for the eval suite."""
    app = create_app(AppConfig(data_dir=str(tmp_path / "demo-data")))
    client = TestClient(app)
    dataset_id = client.post(
        "/datasets", files={"file": ("demo.csv", DEMO_CSV, "text/csv")}
    ).json()["dataset_id"]
    for row_id in (0, 9):
        client.post("/explain/occlusion", json={"dataset_id": dataset_id, "row_id": row_id})
        client.post(
            "/explain/lime",
            json={"dataset_id": dataset_id, "row_id": row_id, "k": 7, "n_samples": 500, "seed": 0},
        )
    state = app.state.xai
    return state


def test_criterion_08_extractive_suite_property(demo_environment):
    with criterion(8, "30-query suite: hallucination 0.0, grounding 1.0, citations c>=n, <30s"):
        state = demo_environment
        queries = load_queries()
        assert len(queries) == 30
        split = {
            "single_method": 10,
            "comparative": 5,
            "adversarial": 5,
            "dataset_level": 10,
        }
        counts = {}
        for query in queries:
            counts[query.category] = counts.get(query.category, 0) + 1
        assert counts == split

        truth = load_ground_truth()
        vocabulary = stored_vocabulary(state.store, "default")
        generator = ExtractiveGenerator()
        started = time.perf_counter()
        reports = {
            strategy: run_eval_suite(
                queries, strategy, generator, "default",
                engine=state.engine, truth=truth, extra_vocabulary=vocabulary,
            )
            for strategy in ("naive", "constrained")
        }
        elapsed = time.perf_counter() - started
        for strategy, report in reports.items():
            assert report.hallucination_rate == 0.0, strategy
            assert report.grounding_completeness == 1.0, strategy
            assert report.n_queries == 30
        assert (
            reports["constrained"].citations_per_response
            >= reports["naive"].citations_per_response
        )
        assert elapsed < 30.0, f"took {elapsed:.2f}s"


def test_criterion_09_adversarial_probes_never_echoed(demo_environment):
    with criterion(9, "no adversarial response mentions the probed non-existent feature"):
        state = demo_environment
        adversarial = [q for q in load_queries() if q.category == "adversarial"]
        assert len(adversarial) == 5
        generator = ExtractiveGenerator()
        for query in adversarial:
            probes = quoted_tokens(query.text)
            assert probes, f"query {query.id} must quote its probe feature"
            response = state.engine.answer(
                "default", query.text, strategy="constrained", generator=generator
            )
            lowered = response.text.lower()
            for probe in probes:
                assert probe not in lowered, f"{query.id} echoed {probe!r}"


def _run_storage_contract(store: ArtifactStore) -> dict:
    """The shared sequence of observations both backends must satisfy."""
    observations = {}
    record = make_record("carol", new_artifact_id(timestamp_ms=5_000))
    store.put_artifact("carol", record, payloads_for(record))
    observations["get_equals_put"] = (
        store.get_artifact("carol", record.artifact_id).to_json() == record.to_json()
    )
    for i in range(5):
        extra = make_record("carol", new_artifact_id(timestamp_ms=6_000 + i), with_payload=False)
        store.put_artifact("carol", extra, [])
    store.put_artifact(
        "dave", make_record("dave", new_artifact_id(timestamp_ms=7_000), with_payload=False), []
    )
    carol = store.list_metadata("carol")
    observations["count"] = len(carol)
    observations["sorted"] = [r.artifact_id for r in carol] == sorted(
        r.artifact_id for r in carol
    )
    observations["isolated"] = all(r.user_id == "carol" for r in carol) and (
        len(store.list_metadata("dave")) == 1
    )
    observations["payloads_never_dangle"] = all(
        store.get_blob(ref) is not None for r in carol for ref in r.payload_refs
    )
    try:
        store.get_artifact("carol", "01NOPE")
        observations["missing_raises"] = False
    except Exception:
        observations["missing_raises"] = True
    return observations


def test_criterion_10_storage_contract_parity(tmp_path):
    with criterion(10, "identical storage contract suite passes on filesystem and S3 double"):
        fs = ArtifactStore(FilesystemBackend(tmp_path / "fs"))
        double = start_double(page_size=3)
        try:
            s3 = ArtifactStore(
                S3Backend(double.endpoint, access_key="ak", secret_key="sk", bucket_prefix="acc-")
            )
            fs_obs = _run_storage_contract(fs)
            s3_obs = _run_storage_contract(s3)
        finally:
            double.shutdown()
        expected = {
            "get_equals_put": True,
            "count": 6,
            "sorted": True,
            "isolated": True,
            "payloads_never_dangle": True,
            "missing_raises": True,
        }
        assert fs_obs == expected
        assert s3_obs == expected


def test_criterion_11_saliency_localization():
    with criterion(11, "bright-patch heat argmax inside the bright region; constant detector all-zero"):
        image = np.zeros((8, 8))
        image[4:6, 2:4] = 1.0
        detector = RegionMeanDetector(region=(4, 6, 2, 4))
        result = saliency_map(detector, image, patch_size=2, stride=2, fill=0.0)
        row, col = np.unravel_index(result.heat.argmax(), result.heat.shape)
        assert 4 <= row < 6 and 2 <= col < 4
        constant = saliency_map(ConstantDetector(0.7), image, patch_size=2, stride=2)
        assert not constant.heat.any()


def test_criterion_12_triangulation_arithmetic():
    with criterion(12, "paper token sets at k=2 give top_k_overlap exactly 1/3"):
        occlusion = ExplanationResult(
            sample_id="s",
            method="occlusion",
            target_class="positive",
            baseline_confidence=0.9,
            attributions=[Attribution("strong", 2, 0.312), Attribution("growth", 3, 0.287)],
        )
        lime = ExplanationResult(
            sample_id="s",
            method="lime",
            target_class="positive",
            baseline_confidence=0.9,
            attributions=[
                Attribution("growth", 3, 0.289),
                Attribution("forecasts", 1, 0.201),
                Attribution("strong", 2, 0.195),
            ],
        )
        report = compare_methods(occlusion, lime, k=2)
        assert report.top_k_overlap == 1 / 3


def test_criterion_13_end_to_end_restart(tmp_path):
    with criterion(13, "ingest+explain, restart service, /chat cites both methods with no reindexing"):
        data_dir = str(tmp_path / "e2e-data")

        first = TestClient(create_app(AppConfig(data_dir=data_dir)))
        dataset_id = first.post(
            "/datasets", files={"file": ("demo.csv", DEMO_CSV, "text/csv")}
        ).json()["dataset_id"]
        occ = first.post(
            "/explain/occlusion", json={"dataset_id": dataset_id, "row_id": 0}
        ).json()
        lim = first.post(
            "/explain/lime",
            json={"dataset_id": dataset_id, "row_id": 0, "k": 7, "n_samples": 500, "seed": 0},
        ).json()
        del first  # process killed; in-memory index and handles are gone

        second = TestClient(create_app(AppConfig(data_dir=data_dir)))
        response = second.post(
            "/chat",
            json={"question": "Do the XAI methods agree on the most important words?"},
        )
        assert response.status_code == 200
        payload = response.json()
        assert "According to occlusion" in payload["text"]
        assert "According to LIME" in payload["text"]
        assert {occ["artifact_id"], lim["artifact_id"]} <= set(payload["cited_artifact_ids"])
        # the answer quotes real importance values from the stored artifacts
        assert payload["faithfulness"]["ungrounded_values"] == []
