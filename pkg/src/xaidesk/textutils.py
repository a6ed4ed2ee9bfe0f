"""Deterministic tokenization shared by the classifier, explainers and embedder.

Rules: split on whitespace, keep the surface chunk for display, and derive a
normalized form (leading/trailing punctuation stripped, lowercased) for
lexicon lookup and embedding. No external tokenizer, no locale dependence.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

_STRIP_CHARS = string.punctuation + "‘’“”–—"


@dataclass(frozen=True)
class Token:
    surface: str
    norm: str
    position: int


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens.

    Every whitespace-separated chunk becomes a token; chunks that are pure
    punctuation keep an empty ``norm`` and contribute nothing to lexicon
    scores or embeddings.
    """
    tokens = []
    for position, chunk in enumerate(text.split()):
        norm = chunk.strip(_STRIP_CHARS).lower()
        tokens.append(Token(surface=chunk, norm=norm, position=position))
    return tokens


def norm_tokens(text: str) -> list[str]:
    """Normalized forms only, skipping chunks that stripped to nothing."""
    return [t.norm for t in tokenize(text) if t.norm]
