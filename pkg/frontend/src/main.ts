/** Single-page dashboard wiring: tabs, fetches, rendering. Render-only. */

import { ApiClient, ApiError } from "./api.js";
import type {
  AgreementReport,
  ChatResponse,
  DatasetRow,
  ExplainResponse,
  Strategy,
} from "./types.js";
import {
  agreementBadges,
  assetRows,
  attributionBars,
  citationChips,
  distributionBars,
  sampleId,
  segmentAnswer,
} from "./viewmodel.js";

const api = new ApiClient("..");

type Tab = "dataset" | "per_sample" | "chat";

interface ViewState {
  activeTab: Tab;
  datasetId: string | null;
  selectedRow: DatasetRow | null;
  strategy: Strategy;
  lastQuestion: string | null;
  occlusion: ExplainResponse | null;
  lime: ExplainResponse | null;
}

const state: ViewState = {
  activeTab: "dataset",
  datasetId: null,
  selectedRow: null,
  strategy: "constrained",
  lastQuestion: null,
  occlusion: null,
  lime: null,
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function setBusy(busy: boolean): void {
  byId("busy").style.visibility = busy ? "visible" : "hidden";
}

function flash(message: string): void {
  const banner = byId("banner");
  banner.textContent = message;
  banner.classList.add("visible");
  setTimeout(() => banner.classList.remove("visible"), 4000);
}

async function guarded<T>(work: Promise<T>): Promise<T | null> {
  setBusy(true);
  try {
    return await work;
  } catch (error) {
    flash(error instanceof ApiError ? `API error: ${error.message}` : String(error));
    return null;
  } finally {
    setBusy(false);
  }
}

// ---------------------------------------------------------------------- tabs

function switchTab(tab: Tab): void {
  if (tab === "per_sample" && !state.selectedRow) {
    flash("Select a sample from the dataset tab first.");
    return;
  }
  state.activeTab = tab;
  for (const name of ["dataset", "per_sample", "chat"] as Tab[]) {
    byId(`tab-${name}`).classList.toggle("active", name === tab);
    byId(`panel-${name}`).classList.toggle("hidden", name !== tab);
  }
}

// ------------------------------------------------------------------- dataset

function renderBars(container: HTMLElement, rows: ReturnType<typeof distributionBars>): void {
  container.replaceChildren();
  for (const row of rows) {
    const line = el("div", "bar-row");
    line.append(el("span", "bar-label", row.token));
    const track = el("div", "bar-track");
    const fill = el("div", `bar-fill ${row.positive ? "pos" : "neg"}`);
    fill.style.width = `${row.widthPct}%`;
    track.append(fill);
    line.append(track);
    line.append(el("span", "bar-value", row.display));
    container.append(line);
  }
}

async function renderDatasetTab(): Promise<void> {
  if (!state.datasetId) return;
  const stats = await guarded(api.stats(state.datasetId));
  if (!stats) return;
  renderBars(byId("distribution"), distributionBars(stats.class_distribution));

  const keywords = byId("keywords");
  keywords.replaceChildren();
  for (const label of Object.keys(stats.top_keywords).sort()) {
    const block = el("div", "keyword-block");
    block.append(el("h4", undefined, label));
    const list = el("ul");
    for (const [token, score] of stats.top_keywords[label].slice(0, 10)) {
      list.append(el("li", undefined, `${token} (${score.toFixed(3)})`));
    }
    block.append(list);
    keywords.append(block);
  }

  const assets = byId("assets");
  assets.replaceChildren();
  for (const row of assetRows(stats.per_asset, stats.per_asset_scores)) {
    const line = el("div", "asset-row");
    line.append(el("span", "bar-label", `${row.asset} (${row.total})`));
    const track = el("div", "asset-track");
    for (const segment of row.segments) {
      const piece = el("div", `asset-segment label-${segment.label}`);
      piece.style.width = `${segment.widthPct}%`;
      piece.title = `${segment.label}: ${segment.count}`;
      track.append(piece);
    }
    line.append(track);
    if (row.spread) {
      line.append(
        el(
          "span",
          "bar-value",
          `conf ${row.spread.min.toFixed(2)}..${row.spread.max.toFixed(2)} ~${row.spread.median.toFixed(2)}`,
        ),
      );
    }
    assets.append(line);
  }

  const samples = await guarded(api.samples(state.datasetId, 0, 100));
  if (!samples) return;
  const table = byId("samples");
  table.replaceChildren();
  for (const row of samples.rows) {
    const line = el("div", "sample-row");
    line.append(el("span", "sample-id", `#${row.row_id}`));
    line.append(el("span", "sample-text", row.text));
    line.append(el("span", "sample-asset", row.asset ?? ""));
    line.addEventListener("click", () => {
      state.selectedRow = row;
      state.occlusion = null;
      state.lime = null;
      byId("selected-sample").textContent = `#${row.row_id}: ${row.text}`;
      switchTab("per_sample");
      renderSampleTab();
    });
    table.append(line);
  }
}

// ---------------------------------------------------------------- per-sample

function renderExplanation(target: HTMLElement, explanation: ExplainResponse | null): void {
  target.replaceChildren();
  if (!explanation) {
    target.append(el("p", "hint", "not run yet"));
    return;
  }
  const result = explanation.result;
  target.append(
    el(
      "p",
      "method-meta",
      `target ${result.target_class}, baseline ${result.baseline_confidence.toFixed(3)}`,
    ),
  );
  const chart = el("div", "chart");
  for (const bar of attributionBars(result.attributions)) {
    const line = el("div", "bar-row");
    line.append(el("span", "bar-label", bar.token));
    const track = el("div", "bar-track");
    const fill = el("div", `bar-fill ${bar.positive ? "pos" : "neg"}`);
    fill.style.width = `${bar.widthPct}%`;
    track.append(fill);
    line.append(track);
    line.append(el("span", "bar-value", bar.display));
    chart.append(line);
  }
  target.append(chart);
}

async function refreshAgreement(): Promise<void> {
  const badges = byId("agreement");
  badges.replaceChildren();
  if (!state.occlusion || !state.lime || !state.datasetId || !state.selectedRow) return;
  const report: AgreementReport | null = await guarded(
    api.compare(sampleId(state.datasetId, state.selectedRow.row_id), 3),
  );
  if (!report) return;
  for (const badge of agreementBadges(report)) {
    const chip = el("span", "badge");
    chip.append(el("strong", undefined, badge.value));
    chip.append(el("span", undefined, ` ${badge.label}`));
    badges.append(chip);
  }
}

function renderSampleTab(): void {
  renderExplanation(byId("occlusion-view"), state.occlusion);
  renderExplanation(byId("lime-view"), state.lime);
  refreshAgreement();
}

async function runMethod(method: "occlusion" | "lime"): Promise<void> {
  if (!state.datasetId || !state.selectedRow) return;
  const request =
    method === "occlusion"
      ? api.explainOcclusion(state.datasetId, state.selectedRow.row_id)
      : api.explainLime(state.datasetId, state.selectedRow.row_id);
  const response = await guarded(request);
  if (!response) return;
  if (method === "occlusion") state.occlusion = response;
  else state.lime = response;
  renderSampleTab();
}

// ---------------------------------------------------------------------- chat

function appendUserMessage(question: string): void {
  const thread = byId("thread");
  const message = el("div", "message user");
  message.append(el("p", undefined, question));
  thread.append(message);
  thread.scrollTop = thread.scrollHeight;
}

async function showArtifact(artifactId: string): Promise<void> {
  const record = await guarded(api.artifact(artifactId));
  if (!record) return;
  const modal = byId("artifact-modal");
  byId("artifact-title").textContent = record.title;
  byId("artifact-body").textContent = JSON.stringify(record, null, 2);
  modal.classList.remove("hidden");
}

function appendAssistantMessage(response: ChatResponse): void {
  const thread = byId("thread");
  const message = el("div", "message assistant");
  message.append(el("span", "strategy-tag", response.strategy));

  const paragraph = el("p");
  for (const segment of segmentAnswer(response.text, response.faithfulness)) {
    if (segment.kind === "plain") {
      paragraph.append(document.createTextNode(segment.text));
    } else {
      const mark = el("span", `seg ${segment.kind}`, segment.text);
      if (segment.kind.endsWith("warning")) mark.title = "not found in retrieved documents";
      paragraph.append(mark);
    }
  }
  message.append(paragraph);

  const chips = el("div", "chips");
  for (const chip of citationChips(response)) {
    const button = el("button", "chip", chip.label);
    button.addEventListener("click", () => showArtifact(chip.artifactId));
    chips.append(button);
  }
  if (response.cited_artifact_ids.length === 0) {
    chips.append(el("span", "hint", "no citations"));
  }
  message.append(chips);

  const audit = response.faithfulness;
  message.append(
    el(
      "p",
      "audit-line",
      `claims ${audit.grounded_claims}/${audit.numeric_claims} grounded, ` +
        `${audit.hallucinated_features} hallucinated mention(s), ` +
        `${audit.citation_count} method citation(s)`,
    ),
  );
  thread.append(message);
  thread.scrollTop = thread.scrollHeight;
}

async function ask(question: string, strategy: Strategy): Promise<void> {
  appendUserMessage(`[${strategy}] ${question}`);
  const response = await guarded(api.chat(question, strategy));
  if (response) appendAssistantMessage(response);
}

// -------------------------------------------------------------------- wiring

function wire(): void {
  byId("tab-dataset").addEventListener("click", () => switchTab("dataset"));
  byId("tab-per_sample").addEventListener("click", () => switchTab("per_sample"));
  byId("tab-chat").addEventListener("click", () => switchTab("chat"));

  const upload = byId("upload") as HTMLInputElement;
  upload.addEventListener("change", async () => {
    const file = upload.files?.[0];
    if (!file) return;
    const response = await guarded(api.ingest(file));
    if (!response) return;
    state.datasetId = response.dataset_id;
    byId("dataset-name").textContent = `${file.name}: ${response.n_rows} rows`;
    flash(`Ingested ${response.n_rows} rows.`);
    renderDatasetTab();
  });

  byId("run-occlusion").addEventListener("click", () => runMethod("occlusion"));
  byId("run-lime").addEventListener("click", () => runMethod("lime"));
  byId("run-both").addEventListener("click", async () => {
    await runMethod("occlusion");
    await runMethod("lime");
  });

  const form = byId("chat-form") as HTMLFormElement;
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const input = byId("question") as HTMLInputElement;
    const question = input.value.trim();
    if (!question) return;
    input.value = "";
    state.lastQuestion = question;
    ask(question, state.strategy);
  });

  const toggle = byId("strategy-toggle") as HTMLInputElement;
  toggle.addEventListener("change", () => {
    state.strategy = toggle.checked ? "constrained" : "naive";
    byId("strategy-label").textContent = state.strategy;
    // re-send the last question so both strategies' answers sit side by side
    if (state.lastQuestion) ask(state.lastQuestion, state.strategy);
  });

  byId("artifact-close").addEventListener("click", () =>
    byId("artifact-modal").classList.add("hidden"),
  );

  api
    .health()
    .then((health) => {
      byId("health").textContent = health.storage_reachable ? "storage ok" : "storage down";
      byId("health").className = health.storage_reachable ? "health ok" : "health bad";
    })
    .catch(() => {
      byId("health").textContent = "api unreachable";
      byId("health").className = "health bad";
    });
}

document.addEventListener("DOMContentLoaded", wire);
