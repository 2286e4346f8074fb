"""Node-, cluster- and network-level metrics for comparing networks."""

from pminet.netmetrics.centrality import (
    CentralityVector,
    ConstantCentralityError,
    DisconnectedNetworkError,
    MetricsError,
    centrality_correlation,
    markov_centrality,
    mean_first_passage_times,
)
from pminet.netmetrics.report import (
    REFERENCE_ID,
    CentralityComparison,
    ComparisonRow,
    ComparisonTable,
    NetworkReport,
    compare_all,
    comparison_table,
    network_report,
)
from pminet.netmetrics.structure import (
    MissingSectorError,
    NoConnectedTripleError,
    clustering_coefficient,
    reference_sector_ratio,
    sector_ratio,
)

__all__ = [
    "REFERENCE_ID",
    "CentralityComparison",
    "CentralityVector",
    "ComparisonRow",
    "ComparisonTable",
    "ConstantCentralityError",
    "DisconnectedNetworkError",
    "MetricsError",
    "MissingSectorError",
    "NetworkReport",
    "NoConnectedTripleError",
    "centrality_correlation",
    "clustering_coefficient",
    "compare_all",
    "comparison_table",
    "markov_centrality",
    "mean_first_passage_times",
    "network_report",
    "reference_sector_ratio",
    "sector_ratio",
]
