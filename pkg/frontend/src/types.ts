/** JSON contracts of the explanation service, mirrored verbatim. */

export type Strategy = "naive" | "constrained";

export interface Attribution {
  token: string;
  position: number;
  importance: number;
}

export interface ExplanationResult {
  sample_id: string;
  method: string;
  target_class: string;
  baseline_confidence: number;
  attributions: Attribution[];
  params: Record<string, unknown>;
  model_id: string;
  created_at: string;
}

export interface ExplainResponse {
  artifact_id: string;
  result: ExplanationResult;
}

export interface AgreementReport {
  top_k_overlap: number;
  rank_correlation: number;
  sign_agreement: number;
  k: number;
}

export interface RetrievedDoc {
  artifact_id: string;
  plot_type: string;
  title: string;
  summary_text: string;
  keywords: string[];
  numeric_facts: Record<string, number>;
  score: number;
}

export interface ResponseAudit {
  numeric_claims: number;
  grounded_claims: number;
  feature_mentions: number;
  hallucinated_features: number;
  citation_count: number;
  grounded_values: number[];
  ungrounded_values: number[];
  mentioned_tokens: string[];
  hallucinated_tokens: string[];
}

export interface ChatResponse {
  text: string;
  cited_artifact_ids: string[];
  strategy: Strategy;
  retrieved: RetrievedDoc[];
  faithfulness: ResponseAudit;
}

export interface DatasetRow {
  row_id: number;
  text: string;
  asset: string | null;
}

export interface SamplesPage {
  dataset_id: string;
  offset: number;
  limit: number;
  total: number;
  rows: DatasetRow[];
}

export interface DatasetStats {
  class_distribution: Record<string, number>;
  top_keywords: Record<string, Array<[string, number]>>;
  per_asset: Record<string, Record<string, number>>;
  per_asset_scores: Record<string, number[]>;
  n_rows: number;
}

export interface IngestResponse {
  dataset_id: string;
  n_rows: number;
  summary_artifact_id: string;
}

export interface ArtifactRecord {
  artifact_id: string;
  user_id: string;
  plot_type: string;
  title: string;
  summary_for_rag: {
    text: string;
    keywords: string[];
    numeric_facts: Record<string, number>;
  };
  provenance: { model: string; xai_method: string; timestamp: string };
  payload_refs: Array<{ bucket: string; key: string }>;
}

export interface HealthResponse {
  status: string;
  storage_reachable: boolean;
  index_sizes: Record<string, number>;
}
