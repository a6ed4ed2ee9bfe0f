"""Per-user in-memory vector collections with cosine top-k search.

The default embedder is feature-hashing bag-of-words: each normalized token
is hashed with a fixed keyed 64-bit hash, accumulated +1/-1 into D signed
buckets, then L2-normalized. Deterministic across runs and platforms, so a
rebuilt index reproduces search scores bitwise. A hosted embedding service
can be plugged in through the same callable contract.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass
from typing import Callable, Sequence

import httpx
import numpy as np

from .errors import BackendUnavailableError
from .textutils import norm_tokens

EMBED_DIM = 256
_HASH_KEY = b"xaidesk-embed-v1"

Embedder = Callable[[str], np.ndarray]


def embed(text: str, dim: int = EMBED_DIM) -> np.ndarray:
    """Feature-hashing embedding; empty text maps to the zero vector."""
    vector = np.zeros(dim, dtype=np.float64)
    for token in norm_tokens(text):
        digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8, key=_HASH_KEY).digest()
        h = int.from_bytes(digest, "big")
        sign = 1.0 if h >> 63 == 0 else -1.0
        vector[h % dim] += sign
    norm = np.linalg.norm(vector)
    if norm > 0:
        vector /= norm
    return vector


class RemoteEmbedder:
    """HTTP embedding provider honoring the same contract as :func:`embed`.

    POST ``{"texts": [...]}`` -> ``{"embeddings": [[...], ...]}``; vectors are
    L2-normalized on receipt.
    """

    def __init__(self, endpoint: str, api_key: str = "", timeout: float = 30.0):
        self.endpoint = endpoint
        self.api_key = api_key
        self._client = httpx.Client(timeout=timeout)

    def __call__(self, text: str) -> np.ndarray:
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else {}
        try:
            response = self._client.post(self.endpoint, json={"texts": [text]}, headers=headers)
            response.raise_for_status()
        except httpx.HTTPError as exc:
            raise BackendUnavailableError(f"embedding endpoint failed: {exc}") from exc
        vector = np.asarray(response.json()["embeddings"][0], dtype=np.float64)
        norm = np.linalg.norm(vector)
        return vector / norm if norm > 0 else vector


def embedding_input(summary_text: str, keywords: Sequence[str]) -> str:
    """What gets embedded for an artifact: summary text plus keywords."""
    return " ".join([summary_text, *keywords])


@dataclass
class VectorEntry:
    artifact_id: str
    embedding: np.ndarray
    summary_text: str
    plot_type: str
    keywords: list[str]


class VectorIndex:
    """Exhaustive-scan cosine index, one collection per user."""

    def __init__(self, embedder: Embedder = embed):
        self.embedder = embedder
        self._collections: dict[str, dict[str, VectorEntry]] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _lock(self, user_id: str) -> threading.Lock:
        with self._registry_lock:
            if user_id not in self._locks:
                self._locks[user_id] = threading.Lock()
                self._collections[user_id] = {}
            return self._locks[user_id]

    def make_entry(
        self,
        artifact_id: str,
        summary_text: str,
        plot_type: str,
        keywords: Sequence[str],
    ) -> VectorEntry:
        return VectorEntry(
            artifact_id=artifact_id,
            embedding=self.embedder(embedding_input(summary_text, keywords)),
            summary_text=summary_text,
            plot_type=plot_type,
            keywords=list(keywords),
        )

    def upsert(self, user_id: str, entry: VectorEntry) -> None:
        with self._lock(user_id):
            self._collections[user_id][entry.artifact_id] = entry

    def search(self, user_id: str, query: str, k: int) -> list[tuple[VectorEntry, float]]:
        """Top-k entries by cosine similarity, descending, ties by artifact id."""
        if k < 1:
            raise ValueError("k must be >= 1")
        with self._lock(user_id):
            entries = list(self._collections[user_id].values())
        query_vec = self.embedder(query)
        if not entries or not np.any(query_vec):
            return []
        scored = [(entry, float(np.dot(entry.embedding, query_vec))) for entry in entries]
        scored.sort(key=lambda pair: (-pair[1], pair[0].artifact_id))
        return scored[:k]

    def collection_size(self, user_id: str) -> int:
        with self._lock(user_id):
            return len(self._collections[user_id])

    def sizes(self) -> dict[str, int]:
        with self._registry_lock:
            users = list(self._collections)
        return {u: self.collection_size(u) for u in users if self.collection_size(u) > 0}

    def clear(self, user_id: str) -> None:
        with self._lock(user_id):
            self._collections[user_id].clear()
