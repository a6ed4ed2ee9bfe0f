"""Pydantic request/response models for the HTTP boundary."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict

Strategy = Literal["naive", "constrained"]


class AttributionModel(BaseModel):
    token: str
    position: int
    importance: float


class ExplanationModel(BaseModel):
    model_config = ConfigDict(protected_namespaces=())

    sample_id: str
    method: str
    target_class: str
    baseline_confidence: float
    attributions: list[AttributionModel]
    params: dict
    model_id: str
    created_at: str


class ExplainOcclusionRequest(BaseModel):
    dataset_id: str
    row_id: int
    target: Optional[str] = None


class ExplainLimeRequest(BaseModel):
    dataset_id: str
    row_id: int
    k: int = 7
    n_samples: int = 1000
    seed: int = 0


class ExplainResponse(BaseModel):
    artifact_id: str
    result: ExplanationModel


class AgreementModel(BaseModel):
    top_k_overlap: float
    rank_correlation: float
    sign_agreement: float
    k: int


class SaliencyRequest(BaseModel):
    image: list[list[float]]
    patch_size: int
    stride: int = 1
    fill: float = 0.0
    sample_id: str = "adhoc"


class SaliencyResponse(BaseModel):
    artifact_id: str
    heat: list[list[float]]
    patch_size: int
    stride: int
    baseline_confidence: float


class RetrievedDocModel(BaseModel):
    artifact_id: str
    plot_type: str
    title: str
    summary_text: str
    keywords: list[str]
    numeric_facts: dict[str, float]
    score: float


class ResponseAudit(BaseModel):
    numeric_claims: int
    grounded_claims: int
    feature_mentions: int
    hallucinated_features: int
    citation_count: int
    grounded_values: list[float]
    ungrounded_values: list[float]
    mentioned_tokens: list[str]
    hallucinated_tokens: list[str]


class ChatRequest(BaseModel):
    question: str
    strategy: Strategy = "constrained"
    k: Optional[int] = None


class ChatResponseModel(BaseModel):
    text: str
    cited_artifact_ids: list[str]
    strategy: Strategy
    retrieved: list[RetrievedDocModel]
    faithfulness: ResponseAudit


class SummaryModel(BaseModel):
    text: str
    keywords: list[str]
    numeric_facts: dict[str, float]


class ProvenanceModel(BaseModel):
    model_config = ConfigDict(protected_namespaces=())

    model: str
    xai_method: str
    timestamp: str


class StorageRefModel(BaseModel):
    bucket: str
    key: str


class ArtifactModel(BaseModel):
    artifact_id: str
    user_id: str
    plot_type: str
    title: str
    summary_for_rag: SummaryModel
    provenance: ProvenanceModel
    payload_refs: list[StorageRefModel]


class IngestResponse(BaseModel):
    dataset_id: str
    n_rows: int
    summary_artifact_id: str


class RowModel(BaseModel):
    row_id: int
    text: str
    asset: Optional[str] = None


class SamplesPage(BaseModel):
    dataset_id: str
    offset: int
    limit: int
    total: int
    rows: list[RowModel]


class StatsModel(BaseModel):
    class_distribution: dict[str, int]
    top_keywords: dict[str, list[tuple[str, float]]]
    per_asset: dict[str, dict[str, int]]
    per_asset_scores: dict[str, list[float]]
    n_rows: int


class RehydrateResponse(BaseModel):
    count: int


class EvalQueryModel(BaseModel):
    id: str
    text: str
    category: Literal["single_method", "comparative", "adversarial", "dataset_level"]


class EvalRequest(BaseModel):
    strategy: Strategy = "constrained"
    suite_id: str = "default"
    queries: Optional[list[EvalQueryModel]] = None
    persist: bool = True


class EvalResponse(BaseModel):
    report: dict
    artifact_id: Optional[str] = None


class HealthResponse(BaseModel):
    status: str
    storage_reachable: bool
    index_sizes: dict[str, int]
