from .extract import (
    CUE_WORDS,
    METHOD_TERMS,
    RULESET_VERSION,
    count_method_citations,
    doc_token_set,
    extract_feature_mentions,
    extract_numeric_claims,
    find_method_citations,
)
from .scoring import (
    CATEGORIES,
    GROUNDING_TOLERANCE,
    EvalQuery,
    FaithfulnessReport,
    GroundTruthPack,
    aggregate_rows,
    evaluate_response,
    load_ground_truth,
    load_queries,
    run_eval_suite,
    score_grounding,
)

__all__ = [
    "CATEGORIES",
    "CUE_WORDS",
    "EvalQuery",
    "FaithfulnessReport",
    "GROUNDING_TOLERANCE",
    "GroundTruthPack",
    "METHOD_TERMS",
    "RULESET_VERSION",
    "aggregate_rows",
    "count_method_citations",
    "doc_token_set",
    "evaluate_response",
    "extract_feature_mentions",
    "extract_numeric_claims",
    "find_method_citations",
    "load_ground_truth",
    "load_queries",
    "run_eval_suite",
    "score_grounding",
]
