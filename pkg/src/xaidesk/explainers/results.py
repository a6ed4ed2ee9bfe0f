"""Attribution result types and their canonical serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Attribution:
    token: str
    position: int
    importance: float


def sort_attributions(attributions: list[Attribution]) -> list[Attribution]:
    """Absolute importance descending, ties broken by position ascending."""
    return sorted(attributions, key=lambda a: (-abs(a.importance), a.position))


@dataclass
class ExplanationResult:
    """Per-sample attribution output of one explanation method."""

    sample_id: str
    method: str  # "occlusion" | "lime"
    target_class: str
    baseline_confidence: float
    attributions: list[Attribution]
    params: dict[str, Any] = field(default_factory=dict)
    model_id: str = ""
    created_at: str = ""

    def __post_init__(self):
        positions = [a.position for a in self.attributions]
        if len(positions) != len(set(positions)):
            raise ValueError("attribution positions must be unique")
        self.attributions = sort_attributions(self.attributions)

    def to_dict(self) -> dict[str, Any]:
        return {
            "sample_id": self.sample_id,
            "method": self.method,
            "target_class": self.target_class,
            "baseline_confidence": self.baseline_confidence,
            "attributions": [
                {"token": a.token, "position": a.position, "importance": a.importance}
                for a in self.attributions
            ],
            "params": self.params,
            "model_id": self.model_id,
            "created_at": self.created_at,
        }

    def to_json(self) -> bytes:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")).encode("utf-8")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExplanationResult":
        return cls(
            sample_id=data["sample_id"],
            method=data["method"],
            target_class=data["target_class"],
            baseline_confidence=data["baseline_confidence"],
            attributions=[
                Attribution(token=a["token"], position=a["position"], importance=a["importance"])
                for a in data["attributions"]
            ],
            params=data.get("params", {}),
            model_id=data.get("model_id", ""),
            created_at=data.get("created_at", ""),
        )

    @classmethod
    def from_json(cls, raw: bytes | str) -> "ExplanationResult":
        return cls.from_dict(json.loads(raw))
