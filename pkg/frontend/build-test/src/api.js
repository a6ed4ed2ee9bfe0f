/** Thin fetch client for the explanation service; the UI's only data source. */
export class ApiError extends Error {
    constructor(status, detail) {
        super(detail);
        this.status = status;
    }
}
export class ApiClient {
    constructor(baseUrl = "", userId = "default") {
        this.baseUrl = baseUrl;
        this.userId = userId;
    }
    async request(method, path, body, json = true) {
        const headers = { "X-User-Id": this.userId };
        if (json && body !== undefined)
            headers["Content-Type"] = "application/json";
        const response = await fetch(this.baseUrl + path, { method, headers, body });
        if (!response.ok) {
            let detail = response.statusText;
            try {
                detail = (await response.json()).detail ?? detail;
            }
            catch {
                /* non-JSON error body */
            }
            throw new ApiError(response.status, detail);
        }
        return (await response.json());
    }
    ingest(file) {
        const form = new FormData();
        form.append("file", file);
        return this.request("POST", "/datasets", form, false);
    }
    stats(datasetId) {
        return this.request("GET", `/datasets/${datasetId}/stats`);
    }
    samples(datasetId, offset = 0, limit = 50) {
        return this.request("GET", `/datasets/${datasetId}/samples?offset=${offset}&limit=${limit}`);
    }
    explainOcclusion(datasetId, rowId) {
        return this.request("POST", "/explain/occlusion", JSON.stringify({ dataset_id: datasetId, row_id: rowId }));
    }
    explainLime(datasetId, rowId, seed = 0) {
        return this.request("POST", "/explain/lime", JSON.stringify({ dataset_id: datasetId, row_id: rowId, seed }));
    }
    compare(sampleId, k = 3) {
        return this.request("GET", `/explain/compare?sample_id=${encodeURIComponent(sampleId)}&k=${k}`);
    }
    chat(question, strategy) {
        return this.request("POST", "/chat", JSON.stringify({ question, strategy }));
    }
    artifacts() {
        return this.request("GET", "/artifacts");
    }
    artifact(artifactId) {
        return this.request("GET", `/artifacts/${artifactId}`);
    }
    health() {
        return this.request("GET", "/health");
    }
}
