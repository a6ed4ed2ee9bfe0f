"""Answer generators: a deterministic extractive one and a remote LLM client.

The extractive generator only ever emits content copied from the retrieved
documents, which guarantees zero hallucinated features and fully grounded
numeric claims by construction; it is the default whenever no remote
generator is configured.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import httpx

from ..errors import GeneratorUnavailableError
from ..faithfulness.extract import attributed_tokens
from .types import PromptBundle, RetrievedDoc

NO_EVIDENCE_TEXT = (
    "The retrieved explanations do not contain enough evidence to answer this question."
)

_METHOD_PHRASES = {
    "text_occlusion": "occlusion",
    "text_lime": "LIME",
    "vision_saliency": "saliency",
    "dataset_summary": "the dataset summary",
    "faithfulness_report": "the faithfulness report",
}


def method_phrase(plot_type: str) -> str:
    return _METHOD_PHRASES.get(plot_type, plot_type.replace("_", " "))


def format_number(value: float) -> str:
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def summary_tokens(doc: RetrievedDoc) -> list[str]:
    """Attributed tokens parsed from a "token (+score)" style summary."""
    return attributed_tokens(doc.summary_text)


def _doc_sentence(doc: RetrievedDoc) -> str:
    sentence = f"According to {method_phrase(doc.plot_type)}, {doc.summary_text}"
    if not sentence.endswith((".", "!", "?")):
        sentence += "."
    if doc.numeric_facts:
        facts = ", ".join(
            f"{name} = {format_number(value)}" for name, value in sorted(doc.numeric_facts.items())
        )
        sentence += f" Numeric facts: {facts}."
    return sentence


def _comparison_sentence(docs: list[RetrievedDoc]) -> str | None:
    """Shared and disjoint top tokens across method-tagged documents."""
    by_method: dict[str, set[str]] = {}
    for doc in docs:
        tokens = summary_tokens(doc)
        if tokens:
            by_method.setdefault(method_phrase(doc.plot_type), set()).update(tokens)
    if len(by_method) < 2:
        return None

    methods = sorted(by_method)
    shared = sorted(
        token
        for token in set.union(*by_method.values())
        if sum(token in tokens for tokens in by_method.values()) >= 2
    )

    def quote(tokens: list[str], limit: int = 4) -> str:
        return ", ".join(f"'{t}'" for t in tokens[:limit])

    joined_methods = " and ".join(methods)
    if shared:
        parts = [f"Comparing methods: both {joined_methods} identified {quote(shared)} as important."]
    else:
        parts = [f"Comparing methods: {joined_methods} identified no shared top tokens."]
    for method in methods:
        unique = sorted(by_method[method] - set(shared))
        if unique:
            parts.append(f"{method} alone ranked {quote(unique)}.")
    return " ".join(parts)


def extractive_generate(bundle: PromptBundle) -> str:
    """Deterministic answer assembled purely from the retrieved documents."""
    if not bundle.docs:
        return NO_EVIDENCE_TEXT
    sentences = [_doc_sentence(doc) for doc in bundle.docs]  # docs arrive best-score first
    if bundle.strategy == "constrained":
        comparison = _comparison_sentence(bundle.docs)
        if comparison:
            sentences.append(comparison)
    return " ".join(sentences)


@runtime_checkable
class AnswerGenerator(Protocol):
    identifier: str

    def generate(self, bundle: PromptBundle) -> str: ...


@dataclass(frozen=True)
class ExtractiveGenerator:
    identifier: str = "extractive"

    def generate(self, bundle: PromptBundle) -> str:
        return extractive_generate(bundle)


def render_docs(docs: list[RetrievedDoc]) -> str:
    """Context block shared verbatim by both prompting strategies."""
    blocks = []
    for i, doc in enumerate(docs, start=1):
        facts = "; ".join(
            f"{name} = {format_number(value)}" for name, value in sorted(doc.numeric_facts.items())
        )
        blocks.append(
            f"[{i}] {doc.title}\n"
            f"method tag: {doc.plot_type}\n"
            f"summary: {doc.summary_text}\n"
            f"numeric facts: {facts if facts else 'none'}"
        )
    return "\n\n".join(blocks)


class RemoteGenerator:
    """Chat-completion client: one call, system + user messages, temperature 0."""

    identifier = "remote"

    def __init__(self, endpoint: str, api_key: str = "", model: str = "", timeout: float = 60.0):
        self.endpoint = endpoint
        self.api_key = api_key
        self.model = model
        self._client = httpx.Client(timeout=timeout)

    def generate(self, bundle: PromptBundle) -> str:
        history = "".join(
            f"Previous question: {turn.question}\nPrevious answer: {turn.answer}\n"
            for turn in bundle.history
        )
        user_message = (
            f"Context documents:\n{render_docs(bundle.docs) if bundle.docs else '(none)'}\n\n"
            f"{history}Question: {bundle.question}"
        )
        payload = {
            "model": self.model,
            "temperature": 0,
            "messages": [
                {"role": "system", "content": bundle.system_prompt},
                {"role": "user", "content": user_message},
            ],
        }
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else {}
        try:
            response = self._client.post(self.endpoint, json=payload, headers=headers)
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise GeneratorUnavailableError(f"generator endpoint failed: {exc}") from exc
        return response.json()["choices"][0]["message"]["content"]
