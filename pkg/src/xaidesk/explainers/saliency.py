"""Sliding-patch occlusion saliency for 2-D inputs.

A square patch slides across the image in row-major order, the detector is
re-queried with the patch region overwritten, and the confidence drop is
accumulated into every covered cell. Overlapping contributions are averaged;
cells never covered stay 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import PatchTooLargeError
from ..gateway import PatchDetector


@dataclass
class SaliencyMap:
    heat: np.ndarray
    patch_size: int
    stride: int
    baseline_confidence: float

    def to_json(self) -> bytes:
        payload = {
            "heat": self.heat.tolist(),
            "patch_size": self.patch_size,
            "stride": self.stride,
            "baseline_confidence": self.baseline_confidence,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")

    @classmethod
    def from_json(cls, raw: bytes | str) -> "SaliencyMap":
        data = json.loads(raw)
        return cls(
            heat=np.array(data["heat"], dtype=float),
            patch_size=data["patch_size"],
            stride=data["stride"],
            baseline_confidence=data["baseline_confidence"],
        )


def saliency_map(
    detector: PatchDetector,
    image: np.ndarray,
    patch_size: int,
    stride: int = 1,
    fill: float = 0.0,
) -> SaliencyMap:
    image = np.asarray(image, dtype=float)
    if image.ndim != 2:
        raise ValueError("image must be a 2-D matrix")
    rows, cols = image.shape
    if patch_size > rows or patch_size > cols:
        raise PatchTooLargeError(f"patch {patch_size} exceeds image {rows}x{cols}")
    if stride < 1:
        raise ValueError("stride must be >= 1")

    baseline = detector.detect(image)
    drops = np.zeros_like(image)
    coverage = np.zeros_like(image)

    for r in range(0, rows - patch_size + 1, stride):
        for c in range(0, cols - patch_size + 1, stride):
            perturbed = image.copy()
            perturbed[r : r + patch_size, c : c + patch_size] = fill
            drop = baseline - detector.detect(perturbed)
            drops[r : r + patch_size, c : c + patch_size] += drop
            coverage[r : r + patch_size, c : c + patch_size] += 1

    heat = np.divide(drops, coverage, out=np.zeros_like(drops), where=coverage > 0)
    return SaliencyMap(
        heat=heat, patch_size=patch_size, stride=stride, baseline_confidence=baseline
    )
