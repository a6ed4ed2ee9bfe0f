"""Faithfulness scoring of generated answers against retrieved artifacts.

Three rule-based checks per response: grounding completeness (numeric claims
traceable to retrieved artifacts or ground truth), hallucination rate
(important-feature mentions absent from every retrieved document) and
citation behavior (explicit method attributions). Aggregates are
micro-averaged over a query suite.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Iterable, Sequence

from ..errors import GeneratorUnavailableError
from ..rag.types import ChatResponse, RetrievedDoc
from .extract import (
    RULESET_VERSION,
    attributed_tokens,
    count_method_citations,
    doc_token_set,
    extract_feature_mentions,
    extract_numeric_claims,
)

GROUNDING_TOLERANCE = 5e-4  # equality at 3 decimal places

CATEGORIES = ("single_method", "comparative", "adversarial", "dataset_level")


@dataclass(frozen=True)
class EvalQuery:
    id: str
    text: str
    category: str

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ValueError(f"unknown category {self.category!r}")


@dataclass
class GroundTruthPack:
    """Reference values the evaluator may ground claims against."""

    importance_scores: list[tuple[str, str, float]] = field(default_factory=list)
    explanation_types: set[str] = field(default_factory=set)
    dataset_facts: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        pairs = [(token, method) for token, method, _ in self.importance_scores]
        if len(pairs) != len(set(pairs)):
            raise ValueError("duplicate (token, method) pair in importance_scores")

    def tokens(self) -> set[str]:
        return {token.lower() for token, _, _ in self.importance_scores}

    def values(self) -> list[float]:
        return [value for _, _, value in self.importance_scores] + list(
            self.dataset_facts.values()
        )

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "GroundTruthPack":
        return cls(
            importance_scores=[
                (e["token"], e["method"], float(e["value"]))
                for e in data.get("importance_scores", [])
            ],
            explanation_types=set(data.get("explanation_types", [])),
            dataset_facts={k: float(v) for k, v in data.get("dataset_facts", {}).items()},
        )


def _grounding_candidates(
    docs: Sequence[RetrievedDoc], truth: GroundTruthPack | None
) -> list[float]:
    candidates: list[float] = []
    for doc in docs:
        candidates.extend(doc.numeric_facts.values())
        candidates.extend(value for value, _ in extract_numeric_claims(doc.summary_text))
    if truth is not None:
        candidates.extend(truth.values())
    return candidates


def score_grounding(
    claims: Sequence[tuple[float, str]],
    docs: Sequence[RetrievedDoc],
    truth: GroundTruthPack | None = None,
) -> tuple[int, int]:
    """(grounded, total) numeric claims.

    A claim is grounded when its value matches any numeric fact, any numeric
    literal in a retrieved summary, or any ground-truth value within 5e-4.
    """
    candidates = _grounding_candidates(docs, truth)
    grounded = sum(
        1
        for value, _ in claims
        if any(abs(value - candidate) <= GROUNDING_TOLERANCE for candidate in candidates)
    )
    return grounded, len(claims)


def audit_response(
    response: ChatResponse,
    truth: GroundTruthPack | None = None,
    extra_vocabulary: Iterable[str] = (),
) -> dict[str, Any]:
    """Full per-response audit, including the matched/unmatched value and
    token lists the UI uses for highlighting."""
    claims = extract_numeric_claims(response.text)
    candidates = _grounding_candidates(response.retrieved, truth)
    grounded_values = []
    ungrounded_values = []
    for value, _ in claims:
        if any(abs(value - candidate) <= GROUNDING_TOLERANCE for candidate in candidates):
            grounded_values.append(value)
        else:
            ungrounded_values.append(value)

    doc_tokens = [
        doc_token_set(doc.summary_text, doc.keywords, doc.title) for doc in response.retrieved
    ]
    vocabulary: set[str] = set(extra_vocabulary)
    for tokens in doc_tokens:
        vocabulary.update(tokens)
    if truth is not None:
        vocabulary.update(truth.tokens())

    mentions = extract_feature_mentions(response.text, vocabulary)
    hallucinated = [m for m in mentions if not any(m in tokens for tokens in doc_tokens)]

    return {
        "numeric_claims": len(claims),
        "grounded_claims": len(grounded_values),
        "feature_mentions": len(mentions),
        "hallucinated_features": len(hallucinated),
        "citation_count": count_method_citations(response.text),
        "grounded_values": grounded_values,
        "ungrounded_values": ungrounded_values,
        "mentioned_tokens": mentions,
        "hallucinated_tokens": hallucinated,
    }


def evaluate_response(
    query: EvalQuery,
    response: ChatResponse,
    truth: GroundTruthPack | None = None,
    extra_vocabulary: Iterable[str] = (),
) -> dict[str, Any]:
    """Assemble one per-query metrics row from the three extractors."""
    audit = audit_response(response, truth, extra_vocabulary)
    return {
        "query_id": query.id,
        "numeric_claims": audit["numeric_claims"],
        "grounded_claims": audit["grounded_claims"],
        "feature_mentions": audit["feature_mentions"],
        "hallucinated_features": audit["hallucinated_features"],
        "citation_count": audit["citation_count"],
    }


@dataclass
class FaithfulnessReport:
    grounding_completeness: float
    hallucination_rate: float
    citations_per_response: float
    per_query: list[dict[str, Any]]
    strategy: str
    n_queries: int
    complete: bool = True
    ruleset: str = RULESET_VERSION

    def to_dict(self) -> dict[str, Any]:
        return {
            "grounding_completeness": self.grounding_completeness,
            "hallucination_rate": self.hallucination_rate,
            "citations_per_response": self.citations_per_response,
            "per_query": self.per_query,
            "strategy": self.strategy,
            "n_queries": self.n_queries,
            "complete": self.complete,
            "ruleset": self.ruleset,
            "averaging": "micro",
        }

    def to_json(self) -> bytes:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")).encode("utf-8")


def aggregate_rows(rows: Sequence[dict[str, Any]], strategy: str, complete: bool = True) -> FaithfulnessReport:
    """Micro-averaged aggregation: ratios of summed counts, citations = mean.

    Conventions: zero numeric claims ground vacuously (1.0); zero feature
    mentions hallucinate nothing (0.0).
    """
    total_claims = sum(r["numeric_claims"] for r in rows)
    total_grounded = sum(r["grounded_claims"] for r in rows)
    total_mentions = sum(r["feature_mentions"] for r in rows)
    total_hallucinated = sum(r["hallucinated_features"] for r in rows)
    return FaithfulnessReport(
        grounding_completeness=total_grounded / total_claims if total_claims else 1.0,
        hallucination_rate=total_hallucinated / total_mentions if total_mentions else 0.0,
        citations_per_response=(
            sum(r["citation_count"] for r in rows) / len(rows) if rows else 0.0
        ),
        per_query=list(rows),
        strategy=strategy,
        n_queries=len(rows),
        complete=complete,
    )


def run_eval_suite(
    queries: Sequence[EvalQuery],
    strategy: str,
    generator,
    user_id: str,
    engine,
    truth: GroundTruthPack | None = None,
    k: int | None = None,
    extra_vocabulary: Iterable[str] = (),
) -> FaithfulnessReport:
    """Answer every query through the chat engine and aggregate the metrics.

    A generator outage aborts the run and returns the partial report marked
    incomplete.
    """
    rows: list[dict[str, Any]] = []
    for query in queries:
        try:
            response = engine.answer(
                user_id, query.text, strategy=strategy, generator=generator, k=k
            )
        except GeneratorUnavailableError:
            return aggregate_rows(rows, strategy, complete=False)
        rows.append(evaluate_response(query, response, truth, extra_vocabulary))
    return aggregate_rows(rows, strategy, complete=True)


def stored_vocabulary(store, user_id: str) -> set[str]:
    """Union of all tokens in the user's stored attribution summaries."""
    vocabulary: set[str] = set()
    for record in store.list_metadata(user_id):
        vocabulary.update(attributed_tokens(record.summary_for_rag.text))
    return vocabulary


def load_queries(path: str | None = None) -> list[EvalQuery]:
    """Load a query suite; defaults to the bundled 30-query suite."""
    if path is None:
        raw = resources.files("xaidesk.data").joinpath("eval_suite.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    return [EvalQuery(id=q["id"], text=q["text"], category=q["category"]) for q in json.loads(raw)]


def load_ground_truth(path: str | None = None) -> GroundTruthPack:
    if path is None:
        raw = resources.files("xaidesk.data").joinpath("ground_truth.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    return GroundTruthPack.from_dict(json.loads(raw))
