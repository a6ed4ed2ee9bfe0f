"""Data types flowing through the retrieval-augmented chat pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class RetrievedDoc:
    """One retrieved artifact summary, carried verbatim from its record."""

    artifact_id: str
    plot_type: str
    title: str
    summary_text: str
    keywords: list[str]
    numeric_facts: dict[str, float]
    score: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "artifact_id": self.artifact_id,
            "plot_type": self.plot_type,
            "title": self.title,
            "summary_text": self.summary_text,
            "keywords": list(self.keywords),
            "numeric_facts": dict(self.numeric_facts),
            "score": self.score,
        }


@dataclass(frozen=True)
class ChatTurn:
    question: str
    answer: str


@dataclass
class PromptBundle:
    strategy: str  # "naive" | "constrained"
    system_prompt: str
    docs: list[RetrievedDoc]
    question: str
    history: list[ChatTurn] = field(default_factory=list)


@dataclass
class ChatResponse:
    text: str
    cited_artifact_ids: list[str]
    strategy: str
    retrieved: list[RetrievedDoc]

    def __post_init__(self):
        retrieved_ids = {doc.artifact_id for doc in self.retrieved}
        if not set(self.cited_artifact_ids) <= retrieved_ids:
            raise ValueError("cited_artifact_ids must be a subset of retrieved ids")
