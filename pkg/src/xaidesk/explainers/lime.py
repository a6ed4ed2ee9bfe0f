"""Local linear surrogate explanation over random word-removal perturbations.

A neighbourhood of perturbed texts is drawn with seeded Bernoulli(0.5) keep
masks, the model scores each perturbation on the target class, and a weighted
ridge regression from keep-mask indicators to those scores yields the
coefficients; the k largest-magnitude coefficients are the explanation.
"""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateNeighbourhoodError, EmptyTextError
from ..gateway import TextClassifier, classify, classify_batch
from ..textutils import tokenize
from .results import Attribution, ExplanationResult

KERNEL_WIDTH = 0.25
RIDGE_LAMBDA = 1e-3


def kernel_weights(masks: np.ndarray, width: float = KERNEL_WIDTH) -> np.ndarray:
    """exp(-d^2 / width^2) with d = cosine distance from the all-ones mask.

    For a 0/1 mask with s kept tokens out of m, cosine similarity to the
    all-ones mask is sqrt(s / m); the all-removed mask gets distance 1.
    """
    m = masks.shape[1]
    kept = masks.sum(axis=1)
    similarity = np.sqrt(kept / m)
    distance = 1.0 - similarity
    return np.exp(-(distance**2) / width**2)


def weighted_ridge(
    masks: np.ndarray,
    y: np.ndarray,
    weights: np.ndarray,
    ridge_lambda: float = RIDGE_LAMBDA,
) -> np.ndarray:
    """Coefficients of a weighted ridge fit with an unpenalized intercept."""
    n, m = masks.shape
    design = np.hstack([np.ones((n, 1)), masks.astype(float)])
    w_design = design * weights[:, None]
    gram = design.T @ w_design
    penalty = np.diag([0.0] + [ridge_lambda] * m)
    beta = np.linalg.solve(gram + penalty, w_design.T @ y)
    return beta[1:]


def _sample_masks(rng: np.random.Generator, n_samples: int, n_tokens: int) -> np.ndarray:
    return (rng.random((n_samples, n_tokens)) < 0.5).astype(np.int8)


def lime_explain(
    model: TextClassifier,
    text: str,
    k: int = 7,
    n_samples: int = 1000,
    seed: int = 0,
    target: str | None = None,
    sample_id: str = "",
    created_at: str = "",
) -> ExplanationResult:
    if k < 1:
        raise ValueError("k must be >= 1")
    if n_samples < 50:
        raise ValueError("n_samples must be >= 50")
    tokens = tokenize(text)
    if not tokens:
        raise EmptyTextError("lime requires at least one token")

    baseline = classify(model, text)
    target_class = target if target is not None else baseline.label
    baseline_confidence = baseline.probabilities[target_class]

    masks = _sample_masks(np.random.default_rng(seed), n_samples, len(tokens))
    if np.all(masks == masks[0]):
        masks = _sample_masks(np.random.default_rng(seed + 1), n_samples, len(tokens))
        if np.all(masks == masks[0]):
            raise DegenerateNeighbourhoodError(
                f"all {n_samples} masks identical for seeds {seed} and {seed + 1}"
            )

    surfaces = [t.surface for t in tokens]
    variants = [" ".join(s for s, keep in zip(surfaces, row) if keep) for row in masks]
    predictions = classify_batch(model, variants)
    y = np.array([p.probabilities[target_class] for p in predictions])

    weights = kernel_weights(masks)
    coefficients = weighted_ridge(masks, y, weights)

    ranked = sorted(range(len(tokens)), key=lambda i: (-abs(coefficients[i]), i))
    attributions = [
        Attribution(token=surfaces[i], position=i, importance=float(coefficients[i]))
        for i in ranked[: min(k, len(tokens))]
    ]

    return ExplanationResult(
        sample_id=sample_id,
        method="lime",
        target_class=target_class,
        baseline_confidence=baseline_confidence,
        attributions=attributions,
        params={
            "k": k,
            "n_samples": n_samples,
            "seed": seed,
            "kernel_width": KERNEL_WIDTH,
            "ridge_lambda": RIDGE_LAMBDA,
        },
        model_id=model.identifier,
        created_at=created_at,
    )
