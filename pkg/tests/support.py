"""Shared test helpers: deterministic fake models and small fixtures."""

from __future__ import annotations

from dataclasses import dataclass, field

from xaidesk.gateway import Prediction, argmax_label
from xaidesk.textutils import norm_tokens


@dataclass(frozen=True)
class ConstantClassifier:
    """Returns the same distribution regardless of input."""

    probabilities: dict[str, float]
    identifier: str = "constant"

    @property
    def label_set(self) -> tuple[str, ...]:
        return tuple(sorted(self.probabilities))

    def predict(self, text: str) -> Prediction:
        return Prediction(label=argmax_label(self.probabilities), probabilities=dict(self.probabilities))

    def predict_batch(self, texts):
        return [self.predict(t) for t in texts]


@dataclass(frozen=True)
class LinearProbeClassifier:
    """P(pos) is a clipped linear function of which probe tokens are present."""

    betas: dict[str, float]
    intercept: float = 0.5
    identifier: str = "linear-probe"
    label_set: tuple[str, ...] = ("neg", "pos")

    def predict(self, text: str) -> Prediction:
        present = set(norm_tokens(text))
        p = self.intercept + sum(b for tok, b in self.betas.items() if tok in present)
        p = min(1.0, max(0.0, p))
        probabilities = {"pos": p, "neg": 1.0 - p}
        return Prediction(label=argmax_label(probabilities), probabilities=probabilities)

    def predict_batch(self, texts):
        return [self.predict(t) for t in texts]


@dataclass
class CountingStore:
    """ArtifactStore proxy that counts list_metadata scans."""

    inner: object
    scans: int = 0
    fail_gets: bool = field(default=False)

    def list_metadata(self, user_id):
        self.scans += 1
        records = self.inner.list_metadata(user_id)
        if self.fail_gets:
            from xaidesk.errors import BackendUnavailableError

            raise BackendUnavailableError("injected failure")
        return records

    def __getattr__(self, name):
        return getattr(self.inner, name)
