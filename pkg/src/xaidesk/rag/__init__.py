from .engine import (
    CONSTRAINED_SYSTEM_PROMPT,
    DEFAULT_K,
    NAIVE_SYSTEM_PROMPT,
    RagEngine,
    build_prompt,
)
from .generators import (
    AnswerGenerator,
    ExtractiveGenerator,
    RemoteGenerator,
    extractive_generate,
    render_docs,
)
from .types import ChatResponse, ChatTurn, PromptBundle, RetrievedDoc

__all__ = [
    "AnswerGenerator",
    "CONSTRAINED_SYSTEM_PROMPT",
    "ChatResponse",
    "ChatTurn",
    "DEFAULT_K",
    "ExtractiveGenerator",
    "NAIVE_SYSTEM_PROMPT",
    "PromptBundle",
    "RagEngine",
    "RemoteGenerator",
    "RetrievedDoc",
    "build_prompt",
    "extractive_generate",
    "render_docs",
]
