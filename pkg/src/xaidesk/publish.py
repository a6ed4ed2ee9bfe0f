"""Turn explanation outputs into persisted, indexed artifacts.

Each publisher builds the metadata record (summary text, keywords, numeric
facts, provenance), writes payloads plus record through the artifact store,
and upserts the summary into the user's vector collection. Displayed values
are derived from the rounded numeric facts so a quoted number always matches
a stored fact.
"""

from __future__ import annotations

from datetime import datetime, timezone

from .explainers import ExplanationResult, SaliencyMap
from .faithfulness.scoring import FaithfulnessReport
from .store import ArtifactRecord, ArtifactStore, Provenance, RagSummary, StorageRef, new_artifact_id
from .textutils import tokenize
from .vindex import VectorIndex

SUMMARY_TOP_WORDS = 5
KEYWORD_TOP_WORDS = 3


def rfc3339_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _display_token(surface: str) -> str:
    norm = tokenize(surface)[0].norm if surface.split() else ""
    return norm or surface.lower()


def explanation_summary(result: ExplanationResult) -> RagSummary:
    method_term = {"occlusion": "occlusion", "lime": "lime"}.get(result.method, result.method)
    top = result.attributions[:SUMMARY_TOP_WORDS]
    facts: dict[str, float] = {"baseline": round(result.baseline_confidence, 3)}
    rendered = []
    for attribution in top:
        token = _display_token(attribution.token)
        value = round(attribution.importance, 3)
        rendered.append(f"{token} ({value:+.3f})")
        facts.setdefault(f"imp_{token}", value)
    text = f"Target: {result.target_class}. Top words: {', '.join(rendered)}"
    keywords = [method_term, result.target_class] + [
        _display_token(a.token) for a in top[:KEYWORD_TOP_WORDS]
    ]
    return RagSummary(text=text, keywords=keywords, numeric_facts=facts)


def publish_explanation(
    store: ArtifactStore,
    index: VectorIndex,
    user_id: str,
    result: ExplanationResult,
    artifact_id: str | None = None,
) -> ArtifactRecord:
    artifact_id = artifact_id or new_artifact_id()
    method_title = {"occlusion": "Occlusion", "lime": "LIME"}.get(result.method, result.method)
    payload_ref = StorageRef(
        bucket="text-results", key=f"{user_id}/{artifact_id}/explanation.json"
    )
    record = ArtifactRecord(
        artifact_id=artifact_id,
        user_id=user_id,
        plot_type=f"text_{result.method}",
        title=f"{method_title} word importance for sample {result.sample_id}",
        summary_for_rag=explanation_summary(result),
        provenance=Provenance(
            model=result.model_id,
            xai_method=result.method,
            timestamp=result.created_at or rfc3339_now(),
        ),
        payload_refs=[payload_ref],
    )
    store.put_artifact(user_id, record, [(payload_ref, result.to_json())])
    index.upsert(
        user_id,
        index.make_entry(
            artifact_id=artifact_id,
            summary_text=record.summary_for_rag.text,
            plot_type=record.plot_type,
            keywords=record.summary_for_rag.keywords,
        ),
    )
    return record


def publish_saliency(
    store: ArtifactStore,
    index: VectorIndex,
    user_id: str,
    saliency: SaliencyMap,
    detector_id: str,
    sample_id: str,
    artifact_id: str | None = None,
) -> ArtifactRecord:
    artifact_id = artifact_id or new_artifact_id()
    rows, cols = saliency.heat.shape
    if saliency.heat.size:
        peak = float(saliency.heat.max())
        peak_row, peak_col = divmod(int(saliency.heat.argmax()), cols)
    else:
        peak, peak_row, peak_col = 0.0, 0, 0
    # every integer quoted in the summary text must be traceable to a fact
    facts = {
        "baseline": round(saliency.baseline_confidence, 3),
        "peak_drop": round(peak, 3),
        "rows": float(rows),
        "cols": float(cols),
        "patch_size": float(saliency.patch_size),
        "stride": float(saliency.stride),
        "peak_row": float(peak_row),
        "peak_col": float(peak_col),
    }
    summary = RagSummary(
        text=(
            f"Saliency map over a {rows}x{cols} image with patch size "
            f"{saliency.patch_size}, stride {saliency.stride}. Peak confidence drop "
            f"{facts['peak_drop']:+.3f} at row {peak_row}, column {peak_col}."
        ),
        keywords=["saliency", "vision", detector_id],
        numeric_facts=facts,
    )
    payload_ref = StorageRef(bucket="vision-results", key=f"{user_id}/{artifact_id}/saliency.json")
    record = ArtifactRecord(
        artifact_id=artifact_id,
        user_id=user_id,
        plot_type="vision_saliency",
        title=f"Saliency map for sample {sample_id}",
        summary_for_rag=summary,
        provenance=Provenance(model=detector_id, xai_method="saliency", timestamp=rfc3339_now()),
        payload_refs=[payload_ref],
    )
    store.put_artifact(user_id, record, [(payload_ref, saliency.to_json())])
    index.upsert(
        user_id,
        index.make_entry(artifact_id, summary.text, record.plot_type, summary.keywords),
    )
    return record


def publish_report(
    store: ArtifactStore,
    index: VectorIndex,
    user_id: str,
    report: FaithfulnessReport,
    artifact_id: str | None = None,
) -> ArtifactRecord:
    artifact_id = artifact_id or new_artifact_id()
    facts = {
        "grounding_completeness": round(report.grounding_completeness, 4),
        "hallucination_rate": round(report.hallucination_rate, 4),
        "citations_per_response": round(report.citations_per_response, 4),
        "n_queries": float(report.n_queries),
    }
    summary = RagSummary(
        text=(
            f"Faithfulness evaluation under {report.strategy} prompting over "
            f"{report.n_queries} queries: grounding completeness "
            f"{facts['grounding_completeness']}, hallucination rate "
            f"{facts['hallucination_rate']}, citations per response "
            f"{facts['citations_per_response']}."
        ),
        keywords=["faithfulness", "evaluation", report.strategy],
        numeric_facts=facts,
    )
    payload_ref = StorageRef(bucket="metadata", key=f"{user_id}/{artifact_id}/report.json")
    record = ArtifactRecord(
        artifact_id=artifact_id,
        user_id=user_id,
        plot_type="faithfulness_report",
        title=f"Faithfulness report ({report.strategy}, n={report.n_queries})",
        summary_for_rag=summary,
        provenance=Provenance(
            model="rule-based-evaluator", xai_method="faithfulness", timestamp=rfc3339_now()
        ),
        payload_refs=[payload_ref],
    )
    store.put_artifact(user_id, record, [(payload_ref, report.to_json())])
    index.upsert(
        user_id,
        index.make_entry(artifact_id, summary.text, record.plot_type, summary.keywords),
    )
    return record
