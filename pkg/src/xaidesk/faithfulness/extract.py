"""Rule-based extractors for numeric claims, feature mentions and citations.

These rules are the single source of truth for both the evaluator and the
chat engine's citation mapping, so the two always count identically. The
exact rule set is versioned in the report for auditability.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

RULESET_VERSION = "rules-v1"

METHOD_TERMS = ("lime", "occlusion", "saliency")

# cue words that mark nearby tokens as claimed-important features
CUE_WORDS = frozenset(
    {"important", "importance", "top", "contributor", "contributing", "key", "driver"}
)

_NUMBER_RE = re.compile(r"(?<![\w.])([+-]?\d+(?:\.\d+)?)(\s?%)?(?!\.?\d)(?!\w)")
_QUOTED_RE = re.compile(r"[`'\"‘“]([A-Za-z][\w-]*)['\"’”`]")
_WORD_RE = re.compile(r"[A-Za-z][\w-]*")
_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")
_METHOD_RE = re.compile(r"\b(" + "|".join(METHOD_TERMS) + r")\b", re.IGNORECASE)
_ATTRIBUTION_RE = re.compile(
    r"\b(?:according to|shows|indicates|identified|ranked|assigns|analysis|results?)\b",
    re.IGNORECASE,
)

# integers in these contexts are ordinals ("top 3", "sample #5"), not claims
_ORDINAL_WORDS = frozenset({"top"})


def extract_numeric_claims(text: str) -> list[tuple[float, str]]:
    """Signed decimals, integers and percentages with +-40 chars of context.

    Percentages are normalized to fractions; integers in ordinal phrases are
    excluded.
    """
    claims = []
    for match in _NUMBER_RE.finditer(text):
        literal, percent = match.group(1), match.group(2)
        value = float(literal)
        if percent:
            value /= 100.0
        elif "." not in literal:
            before = text[: match.start()].rstrip()
            if before.endswith("#"):
                continue
            prev_words = _WORD_RE.findall(before[-20:])
            if prev_words and prev_words[-1].lower() in _ORDINAL_WORDS:
                continue
        context = text[max(0, match.start() - 40) : match.end() + 40]
        claims.append((value, context))
    return claims


def quoted_tokens(text: str) -> list[str]:
    return [m.group(1).lower() for m in _QUOTED_RE.finditer(text)]


_TOKEN_SCORE_RE = re.compile(r"([\w-]+) \(([+-]\d+(?:\.\d+)?)\)")


def attributed_tokens(text: str) -> list[str]:
    """Tokens from "token (+0.257)" pairs in an attribution summary."""
    return [m.group(1).lower() for m in _TOKEN_SCORE_RE.finditer(text)]


def extract_feature_mentions(text: str, candidate_vocabulary: Iterable[str]) -> list[str]:
    """Tokens claimed as important: quoted, or within 5 words of a cue word.

    Unquoted candidates must belong to the vocabulary; quoted tokens are part
    of the vocabulary by definition. Case-insensitive, deduplicated, in order
    of first appearance.
    """
    quoted = quoted_tokens(text)
    vocabulary = {v.lower() for v in candidate_vocabulary} | set(quoted)

    words = [w.group(0).lower() for w in _WORD_RE.finditer(text)]
    cue_positions = [i for i, w in enumerate(words) if w in CUE_WORDS]

    mentions: list[str] = []
    seen: set[str] = set()

    def add(token: str) -> None:
        if token not in seen:
            seen.add(token)
            mentions.append(token)

    for token in quoted:
        add(token)
    for i, word in enumerate(words):
        if word in vocabulary and any(abs(i - c) <= 5 for c in cue_positions):
            add(word)
    return mentions


def split_sentences(text: str) -> list[str]:
    return [s for s in _SENTENCE_SPLIT_RE.split(text) if s.strip()]


def find_method_citations(text: str) -> list[tuple[str, int]]:
    """(method term, sentence index) for every explicit method attribution.

    A method term counts once per occurrence when its sentence also contains
    an attribution phrase ("according to", "shows", "ranked", ...).
    """
    citations = []
    for idx, sentence in enumerate(split_sentences(text)):
        if not _ATTRIBUTION_RE.search(sentence):
            continue
        for match in _METHOD_RE.finditer(sentence):
            citations.append((match.group(1).lower(), idx))
    return citations


def count_method_citations(text: str) -> int:
    return len(find_method_citations(text))


def doc_token_set(summary_text: str, keywords: Sequence[str], title: str = "") -> set[str]:
    """All normalized tokens a document contributes for mention grounding."""
    tokens = {w.group(0).lower() for w in _WORD_RE.finditer(summary_text)}
    tokens.update(w.group(0).lower() for kw in keywords for w in _WORD_RE.finditer(kw))
    tokens.update(w.group(0).lower() for w in _WORD_RE.finditer(title))
    return tokens
