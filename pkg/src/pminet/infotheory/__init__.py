"""
Information-theoretic and correlation estimators.

This package estimates Shannon entropy (plug-in and Schurmann-Grassberger),
mutual information, partial mutual information, Pearson correlation and
first-order partial correlation, both for single tables or series and in
batched form for whole ticker universes.
"""

from pminet.infotheory.correlation import (
    DegenerateConditioningError,
    ZeroVarianceError,
    correlation_matrix,
    partial_corr,
    partial_correlation_tensor,
    pearson,
)
from pminet.infotheory.entropy import (
    AlphabetConvention,
    EntropyEstimate,
    Estimator,
    entropy,
    entropy_ml,
    entropy_of_counts,
    entropy_sg,
    sg_prior,
)
from pminet.infotheory.information import (
    StateCodes,
    entropy_vector,
    joint_entropy_matrix,
    mutual_info,
    mutual_info_matrix,
    partial_mutual_info,
    pmi_tensor,
)
from pminet.infotheory.tables import (
    ArityError,
    ContingencyTable,
    EmptyTableError,
    EstimationError,
)

__all__ = [
    "AlphabetConvention",
    "ArityError",
    "ContingencyTable",
    "DegenerateConditioningError",
    "EmptyTableError",
    "EntropyEstimate",
    "EstimationError",
    "Estimator",
    "StateCodes",
    "ZeroVarianceError",
    "correlation_matrix",
    "entropy",
    "entropy_ml",
    "entropy_of_counts",
    "entropy_sg",
    "entropy_vector",
    "joint_entropy_matrix",
    "mutual_info",
    "mutual_info_matrix",
    "partial_corr",
    "partial_correlation_tensor",
    "partial_mutual_info",
    "pearson",
    "pmi_tensor",
    "sg_prior",
]
