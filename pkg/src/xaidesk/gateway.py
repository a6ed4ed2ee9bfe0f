"""Pluggable prediction contract plus a deterministic built-in classifier.

The built-in lexicon classifier keeps every downstream algorithm testable
offline; a remote HTTP classifier implements the same contract so a real
model server can be substituted without touching callers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Protocol, Sequence, runtime_checkable

import httpx
import numpy as np

from .errors import BackendUnavailableError
from .textutils import norm_tokens

PROB_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Prediction:
    """Class-probability distribution over a fixed label set.

    ``label`` is the argmax of ``probabilities`` with ties broken by
    lexicographic label order, and the probabilities sum to 1 within 1e-9.
    """

    label: str
    probabilities: dict[str, float]

    def __post_init__(self):
        total = sum(self.probabilities.values())
        if abs(total - 1.0) > PROB_TOLERANCE:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        if self.label != argmax_label(self.probabilities):
            raise ValueError(f"label {self.label!r} is not the argmax")


def argmax_label(probabilities: dict[str, float]) -> str:
    """Highest-probability label; ties go to the lexicographically smallest."""
    return min(probabilities, key=lambda lab: (-probabilities[lab], lab))


def softmax(scores: dict[str, float], temperature: float = 1.0) -> dict[str, float]:
    labels = sorted(scores)
    values = [scores[lab] / temperature for lab in labels]
    peak = max(values)
    exps = [math.exp(v - peak) for v in values]
    total = sum(exps)
    return {lab: e / total for lab, e in zip(labels, exps)}


@runtime_checkable
class TextClassifier(Protocol):
    """Deterministic text -> Prediction contract."""

    identifier: str
    label_set: tuple[str, ...]

    def predict(self, text: str) -> Prediction: ...

    def predict_batch(self, texts: Sequence[str]) -> list[Prediction]: ...


def classify(model: TextClassifier, text: str) -> Prediction:
    return model.predict(text)


def classify_batch(model: TextClassifier, texts: Sequence[str]) -> list[Prediction]:
    return model.predict_batch(texts)


@dataclass(frozen=True)
class LexiconClassifier:
    """Bag-of-words softmax classifier over signed per-label token weights.

    Unknown tokens contribute 0. Token weights are accumulated in sorted
    token order so the output is exactly invariant under token permutation.
    """

    weights: dict[str, dict[str, float]]
    label_set: tuple[str, ...] = ("negative", "neutral", "positive")
    temperature: float = 1.0
    identifier: str = "lexicon"

    def __post_init__(self):
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")

    def predict(self, text: str) -> Prediction:
        scores = {label: 0.0 for label in self.label_set}
        for token in sorted(norm_tokens(text)):
            for label, weight in self.weights.get(token, {}).items():
                if label in scores:
                    scores[label] += weight
        probabilities = softmax(scores, self.temperature)
        return Prediction(label=argmax_label(probabilities), probabilities=probabilities)

    def predict_batch(self, texts: Sequence[str]) -> list[Prediction]:
        return [self.predict(text) for text in texts]


@dataclass
class RemoteClassifier:
    """HTTP-backed classifier implementing the same contract.

    Wire format: POST ``{"texts": [...]}`` to ``endpoint`` and read back
    ``{"predictions": [{"label": ..., "probabilities": {...}}]}``.
    """

    endpoint: str
    label_set: tuple[str, ...]
    identifier: str = "remote"
    timeout: float = 30.0
    _client: httpx.Client | None = field(default=None, repr=False)

    def _http(self) -> httpx.Client:
        if self._client is None:
            self._client = httpx.Client(timeout=self.timeout)
        return self._client

    def predict(self, text: str) -> Prediction:
        return self.predict_batch([text])[0]

    def predict_batch(self, texts: Sequence[str]) -> list[Prediction]:
        if not texts:
            return []
        try:
            response = self._http().post(self.endpoint, json={"texts": list(texts)})
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise BackendUnavailableError(f"classifier endpoint failed: {exc}") from exc
        payload = response.json()
        return [
            Prediction(label=item["label"], probabilities=item["probabilities"])
            for item in payload["predictions"]
        ]


@runtime_checkable
class PatchDetector(Protocol):
    """Deterministic 2-D matrix -> confidence in [0, 1]."""

    identifier: str

    def detect(self, image: np.ndarray) -> float: ...


@dataclass(frozen=True)
class ConstantDetector:
    """Always returns the same confidence; useful as a null model."""

    confidence: float = 0.5
    identifier: str = "constant"

    def detect(self, image: np.ndarray) -> float:
        return self.confidence


@dataclass(frozen=True)
class RegionMeanDetector:
    """Confidence = mean brightness of a fixed region, clipped to [0, 1].

    ``region`` is (row_start, row_stop, col_start, col_stop). With no region
    the whole image is used.
    """

    region: tuple[int, int, int, int] | None = None
    identifier: str = "region-mean"

    def detect(self, image: np.ndarray) -> float:
        if self.region is None:
            patch = image
        else:
            r0, r1, c0, c1 = self.region
            patch = image[r0:r1, c0:c1]
        return float(np.clip(patch.mean(), 0.0, 1.0))


def load_lexicon(path: str | None = None) -> LexiconClassifier:
    """Load a lexicon classifier from JSON; defaults to the bundled one.

    File schema: ``{"identifier": ..., "labels": [...], "temperature": ...,
    "weights": {token: {label: weight}}}``.
    """
    if path is None:
        raw = resources.files("xaidesk.data").joinpath("lexicon.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    spec = json.loads(raw)
    return LexiconClassifier(
        weights=spec["weights"],
        label_set=tuple(spec["labels"]),
        temperature=float(spec.get("temperature", 1.0)),
        identifier=spec.get("identifier", "lexicon"),
    )
