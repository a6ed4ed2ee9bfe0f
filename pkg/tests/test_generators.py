import httpx
import pytest

from xaidesk.errors import GeneratorUnavailableError
from xaidesk.faithfulness import EvalQuery, run_eval_suite
from xaidesk.rag import RagEngine, RemoteGenerator, build_prompt
from xaidesk.rag.generators import ExtractiveGenerator
from xaidesk.rehydrate import Rehydrator
from xaidesk.vindex import RemoteEmbedder, VectorIndex

import transcript_fixture as fx


class TestRemoteGenerator:
    def test_wire_format_single_chat_completion_call(self):
        captured = {}

        def handler(request: httpx.Request) -> httpx.Response:
            import json

            captured.update(json.loads(request.read()))
            captured["auth"] = request.headers.get("Authorization")
            return httpx.Response(
                200, json={"choices": [{"message": {"content": "an answer"}}]}
            )

        generator = RemoteGenerator("http://llm/v1/chat/completions", api_key="sk-test", model="m1")
        generator._client = httpx.Client(transport=httpx.MockTransport(handler))
        bundle = build_prompt([fx.DOC_OCC], "what words?", "constrained")
        assert generator.generate(bundle) == "an answer"
        assert captured["temperature"] == 0
        assert captured["model"] == "m1"
        assert [m["role"] for m in captured["messages"]] == ["system", "user"]
        assert "what words?" in captured["messages"][1]["content"]
        assert captured["auth"] == "Bearer sk-test"

    def test_network_failure_raises_generator_unavailable(self):
        def handler(request: httpx.Request) -> httpx.Response:
            raise httpx.ConnectError("down")

        generator = RemoteGenerator("http://llm/v1/chat/completions")
        generator._client = httpx.Client(transport=httpx.MockTransport(handler))
        with pytest.raises(GeneratorUnavailableError):
            generator.generate(build_prompt([], "q", "naive"))


class TestRemoteEmbedder:
    def test_normalizes_received_vector(self):
        def handler(request: httpx.Request) -> httpx.Response:
            return httpx.Response(200, json={"embeddings": [[3.0, 4.0]]})

        embedder = RemoteEmbedder("http://embed")
        embedder._client = httpx.Client(transport=httpx.MockTransport(handler))
        vector = embedder("hello")
        assert vector.tolist() == [0.6, 0.8]


class FlakyGenerator:
    """Fails with an outage after a fixed number of successful answers."""

    identifier = "flaky"

    def __init__(self, succeed: int):
        self.remaining = succeed

    def generate(self, bundle):
        if self.remaining <= 0:
            raise GeneratorUnavailableError("remote generator down")
        self.remaining -= 1
        return ExtractiveGenerator().generate(bundle)


class TestPartialReport:
    def test_outage_aborts_with_partial_incomplete_report(self, fs_store):
        index = VectorIndex()
        engine = RagEngine(fs_store, index, Rehydrator(fs_store, index))
        queries = [
            EvalQuery(id=f"q{i}", text="anything", category="single_method") for i in range(5)
        ]
        report = run_eval_suite(
            queries, "naive", FlakyGenerator(succeed=2), "u", engine=engine
        )
        assert report.complete is False
        assert report.n_queries == 2
        assert len(report.per_query) == 2

    def test_healthy_run_is_complete(self, fs_store):
        index = VectorIndex()
        engine = RagEngine(fs_store, index, Rehydrator(fs_store, index))
        queries = [EvalQuery(id="q0", text="anything", category="dataset_level")]
        report = run_eval_suite(
            queries, "naive", ExtractiveGenerator(), "u", engine=engine
        )
        assert report.complete is True
        assert report.n_queries == 1


def test_rehydration_count_logged(fs_store, caplog):
    import logging

    from test_rehydrate import seed_store

    seed_store(fs_store, "u", 15)
    index = VectorIndex()
    rehydrator = Rehydrator(fs_store, index)
    with caplog.at_level(logging.INFO, logger="xaidesk.rehydrate"):
        assert rehydrator.rehydrate_if_empty("u") == 15
    assert any("rehydrated 15 artifacts" in message for message in caplog.messages)
