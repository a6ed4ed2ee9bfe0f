/**
 * Pure view-model helpers: everything here turns API responses into render
 * geometry (bar widths, badge strings, highlight segments). No attribution
 * or metric is ever computed client-side; grounded/hallucinated judgements
 * come from the per-response audit the API returns.
 */
export function attributionBars(attributions, maxBars = 10) {
    const shown = attributions.slice(0, maxBars);
    const peak = Math.max(...shown.map((a) => Math.abs(a.importance)), 1e-12);
    return shown.map((a) => ({
        token: a.token,
        display: (a.importance >= 0 ? "+" : "") + a.importance.toFixed(3),
        widthPct: (Math.abs(a.importance) / peak) * 100,
        positive: a.importance >= 0,
    }));
}
export function agreementBadges(report) {
    return [
        { label: `top-${report.k} overlap`, value: report.top_k_overlap.toFixed(2) },
        { label: "rank correlation", value: report.rank_correlation.toFixed(2) },
        { label: "sign agreement", value: report.sign_agreement.toFixed(2) },
    ];
}
export function distributionBars(distribution) {
    const labels = Object.keys(distribution).sort();
    const peak = Math.max(...labels.map((l) => distribution[l]), 1);
    return labels.map((label) => ({
        token: label,
        display: String(distribution[label]),
        widthPct: (distribution[label] / peak) * 100,
        positive: true,
    }));
}
export function scoreSpread(scores) {
    if (scores.length === 0)
        return null;
    const sorted = [...scores].sort((a, b) => a - b);
    const mid = Math.floor(sorted.length / 2);
    const median = sorted.length % 2 === 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2;
    return { min: sorted[0], median, max: sorted[sorted.length - 1] };
}
export function assetRows(perAsset, perAssetScores) {
    return Object.keys(perAsset)
        .sort()
        .map((asset) => {
        const counts = perAsset[asset];
        const total = Object.values(counts).reduce((a, b) => a + b, 0);
        const segments = Object.keys(counts)
            .sort()
            .filter((label) => counts[label] > 0)
            .map((label) => ({
            label,
            count: counts[label],
            widthPct: total > 0 ? (counts[label] / total) * 100 : 0,
        }));
        return { asset, total, segments, spread: scoreSpread(perAssetScores[asset] ?? []) };
    });
}
const NUMBER_RE = /[+-]?\d+(?:\.\d+)?\s?%|[+-]?\d+(?:\.\d+)?/g;
const WORD_RE = /[A-Za-z][\w-]*/g;
function closeTo(value, pool) {
    return pool.some((candidate) => Math.abs(candidate - value) <= 1e-9);
}
/**
 * Split the answer into segments so matched numeric values and feature
 * mentions can be highlighted, and unmatched ones flagged. Membership comes
 * entirely from the audit lists the API computed.
 */
export function segmentAnswer(text, audit) {
    const spans = [];
    for (const match of text.matchAll(NUMBER_RE)) {
        const raw = match[0];
        const value = raw.trim().endsWith("%")
            ? parseFloat(raw.replace("%", "")) / 100
            : parseFloat(raw);
        let kind = null;
        if (closeTo(value, audit.grounded_values))
            kind = "value-grounded";
        else if (closeTo(value, audit.ungrounded_values))
            kind = "value-warning";
        if (kind)
            spans.push({ start: match.index, end: match.index + raw.length, kind });
    }
    const hallucinated = new Set(audit.hallucinated_tokens.map((t) => t.toLowerCase()));
    const mentioned = new Set(audit.mentioned_tokens.map((t) => t.toLowerCase()));
    for (const match of text.matchAll(WORD_RE)) {
        const word = match[0].toLowerCase();
        let kind = null;
        if (hallucinated.has(word))
            kind = "token-warning";
        else if (mentioned.has(word))
            kind = "token-grounded";
        if (kind)
            spans.push({ start: match.index, end: match.index + match[0].length, kind });
    }
    spans.sort((a, b) => a.start - b.start);
    const segments = [];
    let cursor = 0;
    for (const span of spans) {
        if (span.start < cursor)
            continue; // overlapping span, keep the first
        if (span.start > cursor)
            segments.push({ text: text.slice(cursor, span.start), kind: "plain" });
        segments.push({ text: text.slice(span.start, span.end), kind: span.kind });
        cursor = span.end;
    }
    if (cursor < text.length)
        segments.push({ text: text.slice(cursor), kind: "plain" });
    return segments;
}
export function methodLabel(plotType) {
    const labels = {
        text_occlusion: "occlusion",
        text_lime: "LIME",
        vision_saliency: "saliency",
        dataset_summary: "dataset summary",
        faithfulness_report: "faithfulness report",
    };
    return labels[plotType] ?? plotType.replace(/_/g, " ");
}
export function citationChips(response) {
    const byId = new Map(response.retrieved.map((d) => [d.artifact_id, d]));
    return response.cited_artifact_ids.map((artifactId) => {
        const doc = byId.get(artifactId);
        return { artifactId, label: doc ? methodLabel(doc.plot_type) : artifactId };
    });
}
export function sampleId(datasetId, rowId) {
    return `${datasetId}:${rowId}`;
}
