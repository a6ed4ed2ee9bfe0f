"""Artifact metadata records and id generation.

Every explanation, plot and dataset is persisted with the same schema:
provenance fields, storage references into the payload buckets, and a
natural-language summary object used as the retrieval key.
"""

from __future__ import annotations

import json
import re
import secrets
import time
from dataclasses import dataclass, field
from typing import Any

from ..errors import SchemaViolationError

BUCKETS = ("plots", "metadata", "datasets", "text-results", "vision-results")

# Crockford base32, as used by ULID
_B32 = "0123456789ABCDEFGHJKMNPQRSTVWXYZ"
_ID_RE = re.compile(r"^[A-Za-z0-9._:-]+$")


def new_artifact_id(timestamp_ms: int | None = None) -> str:
    """Sortable ULID-style id: 10 chars of timestamp, 16 chars of randomness."""
    ms = int(time.time() * 1000) if timestamp_ms is None else timestamp_ms
    chars = []
    for _ in range(10):
        chars.append(_B32[ms & 0x1F])
        ms >>= 5
    head = "".join(reversed(chars))
    tail = "".join(secrets.choice(_B32) for _ in range(16))
    return head + tail


def check_safe_id(value: str, what: str) -> str:
    if not value or not _ID_RE.match(value):
        raise SchemaViolationError(f"{what} {value!r} is empty or contains unsafe characters")
    return value


@dataclass(frozen=True)
class StorageRef:
    bucket: str
    key: str

    def __post_init__(self):
        if self.bucket not in BUCKETS:
            raise SchemaViolationError(f"unknown bucket {self.bucket!r}")
        if not self.key:
            raise SchemaViolationError("storage key must be non-empty")

    def to_dict(self) -> dict[str, str]:
        return {"bucket": self.bucket, "key": self.key}


@dataclass(frozen=True)
class RagSummary:
    text: str
    keywords: list[str] = field(default_factory=list)
    numeric_facts: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class Provenance:
    model: str
    xai_method: str
    timestamp: str  # RFC 3339


@dataclass
class ArtifactRecord:
    artifact_id: str
    user_id: str
    plot_type: str
    title: str
    summary_for_rag: RagSummary
    provenance: Provenance
    payload_refs: list[StorageRef] = field(default_factory=list)

    def validate(self) -> None:
        check_safe_id(self.artifact_id, "artifact_id")
        check_safe_id(self.user_id, "user_id")
        if not self.plot_type:
            raise SchemaViolationError("plot_type must be non-empty")
        if not self.summary_for_rag.text:
            raise SchemaViolationError("summary_for_rag.text must be non-empty")

    def to_dict(self) -> dict[str, Any]:
        return {
            "artifact_id": self.artifact_id,
            "user_id": self.user_id,
            "plot_type": self.plot_type,
            "title": self.title,
            "summary_for_rag": {
                "text": self.summary_for_rag.text,
                "keywords": list(self.summary_for_rag.keywords),
                "numeric_facts": dict(self.summary_for_rag.numeric_facts),
            },
            "provenance": {
                "model": self.provenance.model,
                "xai_method": self.provenance.xai_method,
                "timestamp": self.provenance.timestamp,
            },
            "payload_refs": [ref.to_dict() for ref in self.payload_refs],
        }

    def to_json(self) -> bytes:
        # canonical encoding: sorted keys, compact separators, UTF-8
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ArtifactRecord":
        summary = data["summary_for_rag"]
        provenance = data["provenance"]
        return cls(
            artifact_id=data["artifact_id"],
            user_id=data["user_id"],
            plot_type=data["plot_type"],
            title=data["title"],
            summary_for_rag=RagSummary(
                text=summary["text"],
                keywords=list(summary.get("keywords", [])),
                numeric_facts=dict(summary.get("numeric_facts", {})),
            ),
            provenance=Provenance(
                model=provenance["model"],
                xai_method=provenance["xai_method"],
                timestamp=provenance.get("timestamp", ""),
            ),
            payload_refs=[
                StorageRef(bucket=ref["bucket"], key=ref["key"])
                for ref in data.get("payload_refs", [])
            ],
        )

    @classmethod
    def from_json(cls, raw: bytes | str) -> "ArtifactRecord":
        return cls.from_dict(json.loads(raw))
