"""Environment-driven configuration and component wiring.

Every external dependency (storage, embedder, classifier, generator) is
selected here; the offline defaults (filesystem storage, hashing embedder,
bundled lexicon, extractive generator) need no network at all.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Mapping

from ..analytics import DatasetService
from ..gateway import RemoteClassifier, TextClassifier, load_lexicon
from ..rag import ExtractiveGenerator, RagEngine, RemoteGenerator
from ..rag.generators import AnswerGenerator
from ..rehydrate import Rehydrator
from ..store import ArtifactStore, FilesystemBackend, S3Backend, StorageBackend
from ..vindex import EMBED_DIM, RemoteEmbedder, VectorIndex, embed


@dataclass(frozen=True)
class AppConfig:
    backend: str = "filesystem"
    data_dir: str = "./xaidesk-data"
    s3_endpoint: str = ""
    s3_access_key: str = ""
    s3_secret_key: str = ""
    s3_bucket_prefix: str = "xai-"
    s3_region: str = "us-east-1"
    embedder: str = "hashing"
    embed_endpoint: str = ""
    embed_api_key: str = ""
    embed_dim: int = EMBED_DIM
    classifier: str = "lexicon"
    lexicon_path: str = ""
    classifier_endpoint: str = ""
    classifier_labels: tuple[str, ...] = ("negative", "neutral", "positive")
    generator_endpoint: str = ""
    generator_api_key: str = ""
    generator_model: str = ""
    host: str = "127.0.0.1"
    port: int = 8000

    @classmethod
    def from_env(cls, env: Mapping[str, str] | None = None) -> "AppConfig":
        env = os.environ if env is None else env

        def get(name: str, default: str = "") -> str:
            return env.get(f"XAIDESK_{name}", default)

        labels = get("CLASSIFIER_LABELS")
        return cls(
            backend=get("BACKEND", "filesystem"),
            data_dir=get("DATA_DIR", "./xaidesk-data"),
            s3_endpoint=get("S3_ENDPOINT"),
            s3_access_key=get("S3_ACCESS_KEY"),
            s3_secret_key=get("S3_SECRET_KEY"),
            s3_bucket_prefix=get("S3_BUCKET_PREFIX", "xai-"),
            s3_region=get("S3_REGION", "us-east-1"),
            embedder=get("EMBEDDER", "hashing"),
            embed_endpoint=get("EMBED_ENDPOINT"),
            embed_api_key=get("EMBED_API_KEY"),
            embed_dim=int(get("EMBED_DIM", str(EMBED_DIM))),
            classifier=get("CLASSIFIER", "lexicon"),
            lexicon_path=get("LEXICON_PATH"),
            classifier_endpoint=get("CLASSIFIER_ENDPOINT"),
            classifier_labels=tuple(labels.split(",")) if labels else ("negative", "neutral", "positive"),
            generator_endpoint=get("GENERATOR_ENDPOINT"),
            generator_api_key=get("GENERATOR_API_KEY"),
            generator_model=get("GENERATOR_MODEL"),
            host=get("HOST", "127.0.0.1"),
            port=int(get("PORT", "8000")),
        )


def build_backend(config: AppConfig) -> StorageBackend:
    if config.backend == "s3":
        return S3Backend(
            endpoint=config.s3_endpoint,
            access_key=config.s3_access_key,
            secret_key=config.s3_secret_key,
            bucket_prefix=config.s3_bucket_prefix,
            region=config.s3_region,
        )
    return FilesystemBackend(config.data_dir)


def build_classifier(config: AppConfig) -> TextClassifier:
    if config.classifier == "remote":
        return RemoteClassifier(
            endpoint=config.classifier_endpoint, label_set=config.classifier_labels
        )
    return load_lexicon(config.lexicon_path or None)


def build_generator(config: AppConfig) -> AnswerGenerator:
    # a generator endpoint plus key selects the remote LLM; otherwise extractive
    if config.generator_endpoint and config.generator_api_key:
        return RemoteGenerator(
            endpoint=config.generator_endpoint,
            api_key=config.generator_api_key,
            model=config.generator_model,
        )
    return ExtractiveGenerator()


def build_index(config: AppConfig) -> VectorIndex:
    if config.embedder == "remote":
        return VectorIndex(RemoteEmbedder(config.embed_endpoint, config.embed_api_key))
    if config.embed_dim != EMBED_DIM:
        return VectorIndex(lambda text: embed(text, dim=config.embed_dim))
    return VectorIndex(embed)


@dataclass
class AppState:
    config: AppConfig
    backend: StorageBackend
    store: ArtifactStore
    index: VectorIndex
    rehydrator: Rehydrator
    engine: RagEngine
    datasets: DatasetService
    classifier: TextClassifier
    generator: AnswerGenerator = field(default_factory=ExtractiveGenerator)


def build_state(config: AppConfig | None = None) -> AppState:
    config = config or AppConfig.from_env()
    backend = build_backend(config)
    store = ArtifactStore(backend)
    index = build_index(config)
    rehydrator = Rehydrator(store, index)
    return AppState(
        config=config,
        backend=backend,
        store=store,
        index=index,
        rehydrator=rehydrator,
        engine=RagEngine(store, index, rehydrator),
        datasets=DatasetService(store, index),
        classifier=build_classifier(config),
        generator=build_generator(config),
    )
