import itertools
import math

import numpy as np
import pytest

import xaidesk.explainers.lime as lime_module
from xaidesk.errors import DegenerateNeighbourhoodError, EmptyTextError
from xaidesk.explainers import lime_explain, occlusion_explain

from support import LinearProbeClassifier

BETAS = {"up": 0.10, "down": -0.05, "flat": 0.02}
TEXT = "up down flat"

# ---------------------------------------------------------------------------
# Independent oracle: closed-form weighted least squares over the full 2^3
# mask enumeration, with the kernel recomputed from its formula. No package
# code is reused.
# ---------------------------------------------------------------------------


def oracle_wls_coefficients(betas, kernel_width=0.25):
    names = list(betas)
    m = len(names)
    masks = list(itertools.product([0, 1], repeat=m))
    X, y, w = [], [], []
    for mask in masks:
        prob = 0.5 + sum(b * keep for b, keep in zip(betas.values(), mask))
        prob = min(1.0, max(0.0, prob))
        kept = sum(mask)
        distance = 1.0 - math.sqrt(kept / m)
        X.append([1.0, *mask])
        y.append(prob)
        w.append(math.exp(-(distance**2) / kernel_width**2))
    X, y, w = np.array(X), np.array(y), np.array(w)
    lhs = X.T @ (X * w[:, None])
    rhs = X.T @ (w * y)
    solution = np.linalg.solve(lhs, rhs)
    return solution[1:]  # drop intercept


class TestLinearOracleRecovery:
    def test_oracle_solution_equals_true_betas(self):
        # y is exactly linear and never clips, so WLS must recover beta
        oracle = oracle_wls_coefficients(BETAS)
        assert oracle == pytest.approx([0.10, -0.05, 0.02], abs=1e-12)

    def test_sampled_fit_recovers_oracle_within_tolerance(self):
        model = LinearProbeClassifier(betas=BETAS)
        result = lime_explain(model, TEXT, k=3, n_samples=2000, seed=7)
        oracle = oracle_wls_coefficients(BETAS)
        by_position = {a.position: a.importance for a in result.attributions}
        for position, expected in enumerate(oracle):
            assert by_position[position] == pytest.approx(expected, abs=0.02)
        # magnitude ranking exact: |0.10| > |0.05| > |0.02|
        assert [a.position for a in result.attributions] == [0, 1, 2]

    def test_target_defaults_to_argmax(self):
        model = LinearProbeClassifier(betas=BETAS)
        result = lime_explain(model, TEXT, k=3, n_samples=200, seed=1)
        assert result.target_class == "pos"
        assert result.baseline_confidence == pytest.approx(0.5 + 0.10 - 0.05 + 0.02)


class TestReproducibility:
    def test_identical_seed_bitwise_identical(self, tiny_lexicon):
        a = lime_explain(
            tiny_lexicon, "strong growth weak", k=3, n_samples=200, seed=42,
            created_at="2026-01-01T00:00:00Z",
        )
        b = lime_explain(
            tiny_lexicon, "strong growth weak", k=3, n_samples=200, seed=42,
            created_at="2026-01-01T00:00:00Z",
        )
        assert a.to_json() == b.to_json()

    def test_different_seed_differs(self, tiny_lexicon):
        a = lime_explain(tiny_lexicon, "strong growth weak", k=3, n_samples=200, seed=1)
        b = lime_explain(tiny_lexicon, "strong growth weak", k=3, n_samples=200, seed=2)
        assert [x.importance for x in a.attributions] != [x.importance for x in b.attributions]

    def test_params_recorded(self, tiny_lexicon):
        result = lime_explain(tiny_lexicon, "strong growth", k=2, n_samples=128, seed=5)
        assert result.params == {
            "k": 2,
            "n_samples": 128,
            "seed": 5,
            "kernel_width": 0.25,
            "ridge_lambda": 1e-3,
        }


class TestEdgeCases:
    def test_one_word_sign_matches_occlusion(self, tiny_lexicon):
        occlusion = occlusion_explain(tiny_lexicon, "growth")
        lime = lime_explain(tiny_lexicon, "growth", k=1, n_samples=400, seed=3)
        assert len(lime.attributions) == 1
        assert (lime.attributions[0].importance > 0) == (
            occlusion.attributions[0].importance > 0
        )

    def test_k_larger_than_tokens_returns_all(self, tiny_lexicon):
        result = lime_explain(tiny_lexicon, "strong growth", k=10, n_samples=100, seed=0)
        assert len(result.attributions) == 2

    def test_empty_text_raises(self, tiny_lexicon):
        with pytest.raises(EmptyTextError):
            lime_explain(tiny_lexicon, "", k=1, n_samples=100, seed=0)

    def test_preconditions(self, tiny_lexicon):
        with pytest.raises(ValueError):
            lime_explain(tiny_lexicon, "a b", k=0, n_samples=100, seed=0)
        with pytest.raises(ValueError):
            lime_explain(tiny_lexicon, "a b", k=1, n_samples=10, seed=0)

    def test_degenerate_masks_resample_once_then_fail(self, tiny_lexicon, monkeypatch):
        calls = []

        def constant_masks(rng, n_samples, n_tokens):
            calls.append(1)
            return np.ones((n_samples, n_tokens), dtype=np.int8)

        monkeypatch.setattr(lime_module, "_sample_masks", constant_masks)
        with pytest.raises(DegenerateNeighbourhoodError):
            lime_explain(tiny_lexicon, "a b c", k=1, n_samples=64, seed=0)
        assert len(calls) == 2  # original seed plus one reseed

    def test_degenerate_first_draw_recovers_on_reseed(self, tiny_lexicon, monkeypatch):
        real = lime_module._sample_masks
        state = {"first": True}

        def flaky_masks(rng, n_samples, n_tokens):
            if state["first"]:
                state["first"] = False
                return np.zeros((n_samples, n_tokens), dtype=np.int8)
            return real(rng, n_samples, n_tokens)

        monkeypatch.setattr(lime_module, "_sample_masks", flaky_masks)
        result = lime_explain(tiny_lexicon, "strong growth weak", k=3, n_samples=64, seed=9)
        assert len(result.attributions) == 3

    def test_all_removed_mask_scores_the_prior(self, tiny_lexicon):
        # the all-zero mask maps to the empty string; with enough samples the
        # fit still succeeds and includes that row (no crash, finite values)
        result = lime_explain(tiny_lexicon, "strong growth", k=2, n_samples=500, seed=0)
        assert all(np.isfinite(a.importance) for a in result.attributions)
