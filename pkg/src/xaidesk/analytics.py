"""Bulk dataset ingestion and dataset-level statistics.

Uploads are persisted to the datasets bucket before analysis, so a handle
can be rebuilt from storage after a restart. Statistics are fully
deterministic given the classifier and the rows.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass
from typing import Any

from .errors import MalformedCsvError, MissingColumnError, NotFoundError
from .gateway import TextClassifier, classify_batch
from .publish import rfc3339_now
from .store import ArtifactRecord, ArtifactStore, Provenance, RagSummary, StorageRef, new_artifact_id
from .textutils import norm_tokens
from .vindex import VectorIndex

UNASSIGNED_ASSET = "(unassigned)"
TOP_KEYWORDS = 10


@dataclass(frozen=True)
class DatasetRow:
    row_id: int
    text: str
    asset: str | None = None


@dataclass
class DatasetHandle:
    dataset_id: str
    rows: list[DatasetRow]
    source_ref: StorageRef


@dataclass
class DatasetStats:
    class_distribution: dict[str, int]
    top_keywords: dict[str, list[tuple[str, float]]]
    per_asset: dict[str, dict[str, int]]
    per_asset_scores: dict[str, list[float]]
    n_rows: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "class_distribution": self.class_distribution,
            "top_keywords": {
                label: [[token, score] for token, score in pairs]
                for label, pairs in self.top_keywords.items()
            },
            "per_asset": self.per_asset,
            "per_asset_scores": self.per_asset_scores,
            "n_rows": self.n_rows,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "DatasetStats":
        return cls(
            class_distribution=dict(data["class_distribution"]),
            top_keywords={
                label: [(token, float(score)) for token, score in pairs]
                for label, pairs in data["top_keywords"].items()
            },
            per_asset={a: dict(c) for a, c in data["per_asset"].items()},
            per_asset_scores={a: list(map(float, s)) for a, s in data["per_asset_scores"].items()},
            n_rows=int(data["n_rows"]),
        )


def parse_csv(raw: bytes) -> list[DatasetRow]:
    """Parse a header-first CSV with a required ``text`` column."""
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedCsvError(f"not valid UTF-8: {exc}") from exc
    reader = csv.DictReader(io.StringIO(text))
    try:
        fieldnames = reader.fieldnames
    except csv.Error as exc:
        raise MalformedCsvError(str(exc), line=1) from exc
    if not fieldnames or "text" not in fieldnames:
        raise MissingColumnError("required column 'text' is missing")
    rows = []
    try:
        for i, record in enumerate(reader):
            if record.get("text") is None:
                raise MalformedCsvError("row has no 'text' value", line=i + 2)
            rows.append(
                DatasetRow(row_id=i, text=record["text"], asset=record.get("asset") or None)
            )
    except csv.Error as exc:
        raise MalformedCsvError(str(exc), line=reader.line_num) from exc
    return rows


class DatasetService:
    """Ingestion, stats and summary persistence with a rebuildable registry."""

    def __init__(self, store: ArtifactStore, index: VectorIndex):
        self.store = store
        self.index = index
        self._handles: dict[tuple[str, str], DatasetHandle] = {}

    def _source_ref(self, user_id: str, dataset_id: str) -> StorageRef:
        return StorageRef(bucket="datasets", key=f"{user_id}/{dataset_id}.csv")

    def ingest_dataset(self, user_id: str, raw: bytes, fmt: str = "csv") -> DatasetHandle:
        if fmt != "csv":
            raise MalformedCsvError(f"unsupported format {fmt!r}")
        rows = parse_csv(raw)
        dataset_id = new_artifact_id()
        source_ref = self._source_ref(user_id, dataset_id)
        self.store.put_blob(source_ref, raw)
        handle = DatasetHandle(dataset_id=dataset_id, rows=rows, source_ref=source_ref)
        self._handles[(user_id, dataset_id)] = handle
        return handle

    def get_handle(self, user_id: str, dataset_id: str) -> DatasetHandle:
        """In-memory handle, lazily rebuilt from the persisted upload."""
        key = (user_id, dataset_id)
        if key not in self._handles:
            source_ref = self._source_ref(user_id, dataset_id)
            try:
                raw = self.store.get_blob(source_ref)
            except NotFoundError:
                raise NotFoundError(f"dataset {dataset_id}") from None
            self._handles[key] = DatasetHandle(
                dataset_id=dataset_id, rows=parse_csv(raw), source_ref=source_ref
            )
        return self._handles[key]

    def persist_summary(
        self,
        user_id: str,
        handle: DatasetHandle,
        stats: DatasetStats,
        model_id: str = "",
        artifact_id: str | None = None,
    ) -> ArtifactRecord:
        artifact_id = artifact_id or new_artifact_id()
        facts: dict[str, float] = {"n_rows": float(stats.n_rows)}
        distribution_parts = []
        for label, count in stats.class_distribution.items():
            facts[f"count_{label}"] = float(count)
            distribution_parts.append(f"{label} {count}")
        keyword_parts = []
        for label, pairs in stats.top_keywords.items():
            if pairs:
                tokens = ", ".join(token for token, _ in pairs[:3])
                keyword_parts.append(f"Top {label} keywords: {tokens}.")
        assets = sorted(a for a in stats.per_asset if a != UNASSIGNED_ASSET)
        asset_part = f" Assets covered: {', '.join(assets)}." if assets else ""
        summary = RagSummary(
            text=(
                f"Dataset {handle.dataset_id} contains {stats.n_rows} rows. "
                f"Sentiment distribution: {', '.join(distribution_parts)}. "
                + " ".join(keyword_parts)
                + asset_part
            ),
            keywords=["dataset", "statistics", "distribution"]
            + list(stats.class_distribution),
            numeric_facts=facts,
        )
        payload_ref = StorageRef(bucket="datasets", key=f"{user_id}/{artifact_id}/stats.json")
        record = ArtifactRecord(
            artifact_id=artifact_id,
            user_id=user_id,
            plot_type="dataset_summary",
            title=f"Dataset summary for {handle.dataset_id}",
            summary_for_rag=summary,
            provenance=Provenance(
                model=model_id, xai_method="dataset_statistics", timestamp=rfc3339_now()
            ),
            payload_refs=[payload_ref],
        )
        self.store.put_artifact(
            user_id, record, [(payload_ref, json.dumps(stats.to_dict(), sort_keys=True).encode())]
        )
        self.index.upsert(
            user_id,
            self.index.make_entry(artifact_id, summary.text, record.plot_type, summary.keywords),
        )
        return record


def compute_stats(handle: DatasetHandle, model: TextClassifier) -> DatasetStats:
    """Classify every row and aggregate distribution, keywords and assets."""
    predictions = classify_batch(model, [row.text for row in handle.rows])

    distribution = {label: 0 for label in model.label_set}
    per_asset: dict[str, dict[str, int]] = {}
    per_asset_scores: dict[str, list[float]] = {}
    tokens_by_class: dict[str, Counter] = {label: Counter() for label in model.label_set}

    for row, prediction in zip(handle.rows, predictions):
        label = prediction.label
        distribution[label] += 1
        tokens_by_class[label].update(norm_tokens(row.text))
        asset = row.asset or UNASSIGNED_ASSET
        if asset not in per_asset:
            per_asset[asset] = {lab: 0 for lab in model.label_set}
            per_asset_scores[asset] = []
        per_asset[asset][label] += 1
        per_asset_scores[asset].append(prediction.probabilities[label])

    top_keywords: dict[str, list[tuple[str, float]]] = {}
    totals = {label: sum(counter.values()) for label, counter in tokens_by_class.items()}
    for label, counter in tokens_by_class.items():
        in_class = totals[label]
        elsewhere = sum(totals.values()) - in_class
        if in_class == 0:
            top_keywords[label] = []
            continue
        scored = []
        for token, count in counter.items():
            other = sum(tokens_by_class[lab][token] for lab in tokens_by_class if lab != label)
            score = count / in_class - (other / elsewhere if elsewhere else 0.0)
            scored.append((token, score))
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        top_keywords[label] = scored[:TOP_KEYWORDS]

    return DatasetStats(
        class_distribution=distribution,
        top_keywords=top_keywords,
        per_asset=dict(sorted(per_asset.items())),
        per_asset_scores=dict(sorted(per_asset_scores.items())),
        n_rows=len(handle.rows),
    )
