"""Similarity measures: pairwise distances, average influences and significance."""

from pminet.similarity.build import build_matrix
from pminet.similarity.distances import (
    corr_distance,
    mi_distance,
    min_over_conditioning,
    pcorr_min_distance,
    pmi_min_distance,
)
from pminet.similarity.influence import average_over_partners, avg_influence, mi_influence
from pminet.similarity.matrices import (
    ConstantSeriesError,
    InfluenceMatrix,
    InvalidIndexError,
    Measure,
    NoValidConditioningError,
    SimilarityError,
    SimilarityMatrix,
)
from pminet.similarity.significance import (
    GammaParams,
    InvalidAlphaError,
    gamma_threshold,
    min_pmi_matrix,
    significance_mask,
)

__all__ = [
    # Types
    "Measure",
    "SimilarityMatrix",
    "InfluenceMatrix",
    "GammaParams",
    # Distances
    "corr_distance",
    "mi_distance",
    "pcorr_min_distance",
    "pmi_min_distance",
    "min_over_conditioning",
    # Influence
    "mi_influence",
    "avg_influence",
    "average_over_partners",
    # Significance
    "gamma_threshold",
    "significance_mask",
    "min_pmi_matrix",
    # Dispatch
    "build_matrix",
    # Exceptions
    "SimilarityError",
    "ConstantSeriesError",
    "NoValidConditioningError",
    "InvalidIndexError",
    "InvalidAlphaError",
]
