from .agreement import AgreementReport, compare_methods
from .lime import lime_explain
from .occlusion import occlusion_explain
from .results import Attribution, ExplanationResult, sort_attributions
from .saliency import SaliencyMap, saliency_map

__all__ = [
    "AgreementReport",
    "Attribution",
    "ExplanationResult",
    "SaliencyMap",
    "compare_methods",
    "lime_explain",
    "occlusion_explain",
    "saliency_map",
    "sort_attributions",
]
