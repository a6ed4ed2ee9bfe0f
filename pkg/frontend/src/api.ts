/** Thin fetch client for the explanation service; the UI's only data source. */

import type {
  AgreementReport,
  ArtifactRecord,
  ChatResponse,
  DatasetStats,
  ExplainResponse,
  HealthResponse,
  IngestResponse,
  SamplesPage,
  Strategy,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

export class ApiClient {
  constructor(private baseUrl: string = "", private userId: string = "default") {}

  private async request<T>(method: string, path: string, body?: BodyInit, json = true): Promise<T> {
    const headers: Record<string, string> = { "X-User-Id": this.userId };
    if (json && body !== undefined) headers["Content-Type"] = "application/json";
    const response = await fetch(this.baseUrl + path, { method, headers, body });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        detail = ((await response.json()) as { detail?: string }).detail ?? detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  ingest(file: File): Promise<IngestResponse> {
    const form = new FormData();
    form.append("file", file);
    return this.request("POST", "/datasets", form, false);
  }

  stats(datasetId: string): Promise<DatasetStats> {
    return this.request("GET", `/datasets/${datasetId}/stats`);
  }

  samples(datasetId: string, offset = 0, limit = 50): Promise<SamplesPage> {
    return this.request("GET", `/datasets/${datasetId}/samples?offset=${offset}&limit=${limit}`);
  }

  explainOcclusion(datasetId: string, rowId: number): Promise<ExplainResponse> {
    return this.request(
      "POST",
      "/explain/occlusion",
      JSON.stringify({ dataset_id: datasetId, row_id: rowId }),
    );
  }

  explainLime(datasetId: string, rowId: number, seed = 0): Promise<ExplainResponse> {
    return this.request(
      "POST",
      "/explain/lime",
      JSON.stringify({ dataset_id: datasetId, row_id: rowId, seed }),
    );
  }

  compare(sampleId: string, k = 3): Promise<AgreementReport> {
    return this.request("GET", `/explain/compare?sample_id=${encodeURIComponent(sampleId)}&k=${k}`);
  }

  chat(question: string, strategy: Strategy): Promise<ChatResponse> {
    return this.request("POST", "/chat", JSON.stringify({ question, strategy }));
  }

  artifacts(): Promise<ArtifactRecord[]> {
    return this.request("GET", "/artifacts");
  }

  artifact(artifactId: string): Promise<ArtifactRecord> {
    return this.request("GET", `/artifacts/${artifactId}`);
  }

  health(): Promise<HealthResponse> {
    return this.request("GET", "/health");
  }
}
