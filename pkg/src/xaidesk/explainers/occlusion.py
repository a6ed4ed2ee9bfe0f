"""Leave-one-out word importance.

The importance of a token is the drop in target-class probability when that
token is deleted from the text and the remainder is rejoined with single
spaces.
"""

from __future__ import annotations

from ..errors import EmptyTextError
from ..gateway import TextClassifier, classify, classify_batch
from ..textutils import tokenize
from .results import Attribution, ExplanationResult


def occlusion_explain(
    model: TextClassifier,
    text: str,
    target: str | None = None,
    sample_id: str = "",
    created_at: str = "",
) -> ExplanationResult:
    """Score every token by the probability drop its removal causes.

    ``target`` defaults to the argmax class of the unperturbed prediction.
    """
    tokens = tokenize(text)
    if not tokens:
        raise EmptyTextError("occlusion requires at least one token")

    baseline = classify(model, text)
    target_class = target if target is not None else baseline.label
    baseline_confidence = baseline.probabilities[target_class]

    surfaces = [t.surface for t in tokens]
    variants = [" ".join(surfaces[:i] + surfaces[i + 1 :]) for i in range(len(surfaces))]
    predictions = classify_batch(model, variants)

    attributions = [
        Attribution(
            token=tokens[i].surface,
            position=i,
            importance=baseline_confidence - predictions[i].probabilities[target_class],
        )
        for i in range(len(tokens))
    ]

    return ExplanationResult(
        sample_id=sample_id,
        method="occlusion",
        target_class=target_class,
        baseline_confidence=baseline_confidence,
        attributions=attributions,
        params={},
        model_id=model.identifier,
        created_at=created_at,
    )
