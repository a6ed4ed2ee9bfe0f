"""Agreement metrics between two explanation results for the same sample."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import SampleMismatchError
from .results import Attribution, ExplanationResult


@dataclass(frozen=True)
class AgreementReport:
    top_k_overlap: float
    rank_correlation: float
    sign_agreement: float
    k: int


def _token_map(result: ExplanationResult) -> dict[str, Attribution]:
    """Case-insensitive token -> strongest attribution for that token."""
    best: dict[str, Attribution] = {}
    for attribution in result.attributions:  # already sorted strongest-first
        key = attribution.token.lower()
        if key not in best:
            best[key] = attribution
    return best


def _shared_ranks(tokens: list[str], token_map: dict[str, Attribution]) -> dict[str, int]:
    ordered = sorted(tokens, key=lambda t: (-abs(token_map[t].importance), token_map[t].position))
    return {token: rank for rank, token in enumerate(ordered, start=1)}


def _spearman(shared: list[str], a: dict[str, Attribution], b: dict[str, Attribution]) -> float:
    if not shared:
        return 0.0
    if len(shared) == 1:
        return 1.0
    ranks_a = _shared_ranks(shared, a)
    ranks_b = _shared_ranks(shared, b)
    n = len(shared)
    d2 = sum((ranks_a[t] - ranks_b[t]) ** 2 for t in shared)
    return 1.0 - 6.0 * d2 / (n * (n * n - 1))


def compare_methods(a: ExplanationResult, b: ExplanationResult, k: int) -> AgreementReport:
    """Top-k Jaccard overlap, Spearman rank correlation and sign agreement.

    Token matching is case-insensitive on the surface form. With no shared
    tokens the correlation and sign agreement are reported as 0.0; a single
    shared token trivially correlates at 1.0.
    """
    if a.sample_id != b.sample_id:
        raise SampleMismatchError(f"sample ids differ: {a.sample_id!r} vs {b.sample_id!r}")
    if k < 1:
        raise ValueError("k must be >= 1")

    top_a = {attr.token.lower() for attr in a.attributions[:k]}
    top_b = {attr.token.lower() for attr in b.attributions[:k]}
    union = top_a | top_b
    overlap = len(top_a & top_b) / len(union) if union else 0.0

    map_a = _token_map(a)
    map_b = _token_map(b)
    shared = sorted(set(map_a) & set(map_b))

    if shared:
        # (x >= 0) treats both zeros as positive, so -0.0 vs 0.0 still agree
        matching = sum(
            1 for t in shared if (map_a[t].importance >= 0) == (map_b[t].importance >= 0)
        )
        sign_agreement = matching / len(shared)
    else:
        sign_agreement = 0.0

    return AgreementReport(
        top_k_overlap=overlap,
        rank_correlation=_spearman(shared, map_a, map_b),
        sign_agreement=sign_agreement,
        k=k,
    )
