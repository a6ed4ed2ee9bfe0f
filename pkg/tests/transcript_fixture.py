"""Hand-labeled transcript: 12 scripted responses with hand-computed metrics.

Every expected row was counted manually against the declared extraction
rules before the evaluator existed; the aggregate values at the bottom are
frozen sums of those rows. Covers all four query categories and includes the
0.5-completeness response (r04) and the 2-citation response (r05).
"""

from __future__ import annotations

from xaidesk.faithfulness import EvalQuery, GroundTruthPack
from xaidesk.rag.types import ChatResponse, RetrievedDoc

DOC_OCC = RetrievedDoc(
    artifact_id="occ1",
    plot_type="text_occlusion",
    title="Occlusion word importance for sample s1",
    summary_text="Target: positive. Top words: outperformer (+0.245), growth (+0.156)",
    keywords=["occlusion", "positive"],
    numeric_facts={"baseline": 0.912},
    score=0.9,
)

DOC_LIME = RetrievedDoc(
    artifact_id="lim1",
    plot_type="text_lime",
    title="LIME word importance for sample s1",
    summary_text="Target: positive. Top words: growth (+0.289), forecasts (+0.201), strong (+0.195)",
    keywords=["lime", "positive"],
    numeric_facts={"baseline": 0.907},
    score=0.85,
)

DOC_DATA = RetrievedDoc(
    artifact_id="dat1",
    plot_type="dataset_summary",
    title="Dataset summary for d1",
    summary_text="Dataset d1 contains 12 rows. Sentiment distribution: negative 4, neutral 3, positive 5.",
    keywords=["dataset", "statistics"],
    numeric_facts={"n_rows": 12.0, "count_negative": 4.0, "count_neutral": 3.0, "count_positive": 5.0},
    score=0.8,
)

TRUTH = GroundTruthPack(
    importance_scores=[
        ("outperformer", "occlusion", 0.245),
        ("growth", "occlusion", 0.156),
        ("growth", "lime", 0.289),
    ],
    explanation_types={"text_occlusion", "text_lime", "dataset_summary"},
    dataset_facts={"n_rows": 12.0},
)

# (query, retrieved docs, response text,
#  expected {numeric_claims, grounded_claims, feature_mentions,
#            hallucinated_features, citation_count})
TRANSCRIPT = [
    (
        EvalQuery(id="r01", text="What were the most important words?", category="single_method"),
        [DOC_OCC],
        "According to occlusion, 'outperformer' (+0.245) and 'growth' (+0.156) "
        "were the strongest contributors.",
        dict(numeric_claims=2, grounded_claims=2, feature_mentions=2, hallucinated_features=0, citation_count=1),
    ),
    (
        EvalQuery(id="r02", text="What did the linear surrogate rank first?", category="single_method"),
        [DOC_LIME],
        "The LIME analysis shows 'growth' (+0.289) ranked first with baseline 0.907.",
        dict(numeric_claims=2, grounded_claims=2, feature_mentions=1, hallucinated_features=0, citation_count=1),
    ),
    (
        EvalQuery(id="r03", text="How confident was the model?", category="single_method"),
        [DOC_OCC],
        "Occlusion assigns +0.245 to 'outperformer'; the baseline confidence was 91.2%.",
        dict(numeric_claims=2, grounded_claims=2, feature_mentions=1, hallucinated_features=0, citation_count=1),
    ),
    (
        # the 0.5-completeness fixture: one grounded claim, one invented value
        EvalQuery(id="r04", text="What score did the best word get?", category="single_method"),
        [DOC_OCC],
        "According to occlusion, 'outperformer' scored 0.245 but the confidence reached 0.99.",
        dict(numeric_claims=2, grounded_claims=1, feature_mentions=1, hallucinated_features=0, citation_count=1),
    ),
    (
        # the 2-citation fixture: both methods attributed in one response
        EvalQuery(id="r05", text="Do the methods agree?", category="comparative"),
        [DOC_OCC, DOC_LIME],
        "According to LIME, 'growth' (+0.289) ranked first, and the occlusion "
        "analysis shows 'outperformer' (+0.245) leading.",
        dict(numeric_claims=2, grounded_claims=2, feature_mentions=2, hallucinated_features=0, citation_count=2),
    ),
    (
        EvalQuery(id="r06", text="Which words do both methods support?", category="comparative"),
        [DOC_OCC, DOC_LIME],
        "Both methods agree: occlusion identified 'growth' (+0.156) and LIME also "
        "ranked 'growth' (+0.289) highly.",
        dict(numeric_claims=2, grounded_claims=2, feature_mentions=1, hallucinated_features=0, citation_count=2),
    ),
    (
        EvalQuery(id="r07", text="Where do the methods disagree?", category="comparative"),
        [DOC_OCC, DOC_LIME],
        "LIME ranked 'forecasts' (+0.201) second, while occlusion shows "
        "'outperformer' (+0.245) first; they disagree beyond 'growth'.",
        dict(numeric_claims=2, grounded_claims=2, feature_mentions=3, hallucinated_features=0, citation_count=2),
    ),
    (
        # a bad response inventing the probed feature
        EvalQuery(id="r08", text="Was 'momentum' a key factor?", category="adversarial"),
        [DOC_OCC],
        "Yes, 'momentum' was an important driver according to occlusion.",
        dict(numeric_claims=0, grounded_claims=0, feature_mentions=2, hallucinated_features=1, citation_count=1),
    ),
    (
        # an honest refusal still quotes the probe, which the rules count
        EvalQuery(id="r09", text="How important was 'buyback'?", category="adversarial"),
        [DOC_OCC],
        "No retrieved explanation mentions 'buyback'; the evidence is insufficient "
        "to support that claim.",
        dict(numeric_claims=0, grounded_claims=0, feature_mentions=1, hallucinated_features=1, citation_count=0),
    ),
    (
        EvalQuery(id="r10", text="What does the saliency say about 'tariffs'?", category="adversarial"),
        [],
        "The retrieved explanations do not contain enough evidence to answer this question.",
        dict(numeric_claims=0, grounded_claims=0, feature_mentions=0, hallucinated_features=0, citation_count=0),
    ),
    (
        EvalQuery(id="r11", text="How many rows are in the dataset?", category="dataset_level"),
        [DOC_DATA],
        "The dataset contains 12 rows and 5 positive headlines.",
        dict(numeric_claims=2, grounded_claims=2, feature_mentions=0, hallucinated_features=0, citation_count=0),
    ),
    (
        EvalQuery(id="r12", text="How are the negative headlines distributed?", category="dataset_level"),
        [DOC_DATA],
        "There are 4 negative and 3 neutral headlines; the top 3 assets are unaffected.",
        dict(numeric_claims=2, grounded_claims=2, feature_mentions=2, hallucinated_features=0, citation_count=0),
    ),
]

# frozen sums of the rows above
EXPECTED_AGGREGATE = {
    "grounding_completeness": 17 / 18,
    "hallucination_rate": 2 / 16,
    "citations_per_response": 11 / 12,
    "n_queries": 12,
}


def responses():
    """(query, ChatResponse, expected row) triples."""
    for query, docs, text, expected in TRANSCRIPT:
        yield query, ChatResponse(
            text=text, cited_artifact_ids=[], strategy="naive", retrieved=docs
        ), expected
