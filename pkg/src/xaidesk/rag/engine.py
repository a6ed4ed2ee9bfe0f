"""Question answering over stored explanation artifacts.

Pipeline: transparent rehydration, cosine retrieval, prompt assembly under a
naive or constrained strategy (the document rendering is identical for both,
isolating the system prompt as the only variable), pluggable generation, and
per-user in-memory conversation history.
"""

from __future__ import annotations

import threading
from collections import deque

from ..faithfulness.extract import find_method_citations
from ..rehydrate import Rehydrator
from ..store import ArtifactStore
from ..vindex import VectorIndex
from .generators import AnswerGenerator, method_phrase
from .types import ChatResponse, ChatTurn, PromptBundle, RetrievedDoc

DEFAULT_K = 6
HISTORY_LIMIT = 20  # turns per user; history is ephemeral by design

NAIVE_SYSTEM_PROMPT = "Answer the user's question based on the following context."

CONSTRAINED_SYSTEM_PROMPT = (
    "Answer the user's question using only the context documents. You must:\n"
    "(i) cite specific XAI artifacts by method and explanation type;\n"
    "(ii) distinguish between LIME and occlusion results when both are present;\n"
    "(iii) include numeric values (confidence scores, importance weights) directly "
    "from the retrieved documents;\n"
    "(iv) state when evidence is insufficient rather than speculating."
)

_METHOD_TERMS_BY_TAG = {
    "text_occlusion": "occlusion",
    "text_lime": "lime",
    "vision_saliency": "saliency",
}


def build_prompt(
    docs: list[RetrievedDoc],
    question: str,
    strategy: str = "constrained",
    history: list[ChatTurn] | None = None,
) -> PromptBundle:
    if strategy not in ("naive", "constrained"):
        raise ValueError(f"unknown strategy {strategy!r}")
    system_prompt = CONSTRAINED_SYSTEM_PROMPT if strategy == "constrained" else NAIVE_SYSTEM_PROMPT
    return PromptBundle(
        strategy=strategy,
        system_prompt=system_prompt,
        docs=list(docs),
        question=question,
        history=list(history or []),
    )


class RagEngine:
    def __init__(self, store: ArtifactStore, index: VectorIndex, rehydrator: Rehydrator):
        self.store = store
        self.index = index
        self.rehydrator = rehydrator
        self._history: dict[str, deque[ChatTurn]] = {}
        self._history_lock = threading.Lock()

    def retrieve_context(self, user_id: str, question: str, k: int = DEFAULT_K) -> list[RetrievedDoc]:
        """Rehydrate if needed, then search; docs carry full numeric facts."""
        self.rehydrator.rehydrate_if_empty(user_id)
        hits = self.index.search(user_id, question, k)
        docs = []
        for entry, score in hits:
            record = self.store.get_artifact(user_id, entry.artifact_id)
            docs.append(
                RetrievedDoc(
                    artifact_id=record.artifact_id,
                    plot_type=record.plot_type,
                    title=record.title,
                    summary_text=record.summary_for_rag.text,
                    keywords=list(record.summary_for_rag.keywords),
                    numeric_facts=dict(record.summary_for_rag.numeric_facts),
                    score=score,
                )
            )
        return docs

    def history(self, user_id: str) -> list[ChatTurn]:
        with self._history_lock:
            return list(self._history.get(user_id, ()))

    def _append_history(self, user_id: str, turn: ChatTurn) -> None:
        with self._history_lock:
            self._history.setdefault(user_id, deque(maxlen=HISTORY_LIMIT)).append(turn)

    def cited_ids(self, text: str, docs: list[RetrievedDoc]) -> list[str]:
        """Map method attributions (and literal title mentions) back to docs.

        Uses the same method-citation scan as the faithfulness module so both
        count identically.
        """
        cited_methods = {method for method, _ in find_method_citations(text)}
        lowered = text.lower()
        cited = []
        for doc in docs:
            term = _METHOD_TERMS_BY_TAG.get(doc.plot_type)
            if term is not None:
                hit = term in cited_methods
            else:
                hit = method_phrase(doc.plot_type).lower() in lowered
            if not hit and doc.title:
                hit = doc.title.lower() in lowered
            if hit:
                cited.append(doc.artifact_id)
        return cited

    def answer(
        self,
        user_id: str,
        question: str,
        strategy: str = "constrained",
        generator: AnswerGenerator | None = None,
        k: int | None = None,
    ) -> ChatResponse:
        from .generators import ExtractiveGenerator

        generator = generator or ExtractiveGenerator()
        docs = self.retrieve_context(user_id, question, k or DEFAULT_K)
        bundle = build_prompt(docs, question, strategy, self.history(user_id))
        text = generator.generate(bundle)
        response = ChatResponse(
            text=text,
            cited_artifact_ids=self.cited_ids(text, docs),
            strategy=strategy,
            retrieved=docs,
        )
        self._append_history(user_id, ChatTurn(question=question, answer=text))
        return response
