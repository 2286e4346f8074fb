"""Per-network reports and the cross-measure comparison.

A full study builds one tree and one planar graph for each of the six
measures. The comparison table lists, per measure, the sector ratio of the
tree, the sector ratio of the planar graph and the clustering of the planar
graph, next to a Reference row computed from the complete graph.
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd
import structlog
from numpy.typing import NDArray

from pminet.ingest.prices import SectorMap
from pminet.netbuild import Network, Topology
from pminet.netmetrics.centrality import (
    CentralityVector,
    MetricsError,
    centrality_correlation,
    markov_centrality,
)
from pminet.netmetrics.structure import (
    NoConnectedTripleError,
    clustering_coefficient,
    reference_sector_ratio,
    sector_ratio,
)

logger = structlog.get_logger(__name__)

REFERENCE_ID = "Reference"


@dataclass(frozen=True)
class NetworkReport:
    """Summary metrics of one network.

    Attributes:
        label: Network identifier
        node_count: Number of nodes
        edge_count: Number of undirected adjacencies
        sector_ratio: Within-sector adjacencies / all adjacencies, None without sectors
        clustering: Transitivity, None when the graph has no connected triple
    """

    label: str
    node_count: int
    edge_count: int
    sector_ratio: float | None
    clustering: float | None

    def __post_init__(self) -> None:
        """Validate ranges.

        Raises:
            ValueError: If a ratio is outside [0, 1]
        """
        for name in ("sector_ratio", "clustering"):
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")


def network_report(network: Network, sectors: SectorMap | None = None) -> NetworkReport:
    """Compute the report of one network.

    The sector ratio is left empty when neither a sector map nor node labels
    are available; clustering is left empty for graphs without connected
    triples.
    """
    log = logger.bind(label=network.label)
    has_sectors = sectors is not None or all(node.sector for node in network.nodes)
    ratio = sector_ratio(network, sectors) if has_sectors else None
    try:
        clustering: float | None = clustering_coefficient(network)
    except NoConnectedTripleError:
        log.warning("clustering_undefined", nodes=network.node_count)
        clustering = None
    return NetworkReport(
        label=network.label,
        node_count=network.node_count,
        edge_count=network.edge_count,
        sector_ratio=ratio,
        clustering=clustering,
    )


@dataclass(frozen=True, eq=False)
class CentralityComparison:
    """Pairwise Markov-centrality correlations within one topology class.

    Attributes:
        labels: Network identifiers, one per row/column
        topology: Topology shared by the compared networks
        values: Symmetric correlation matrix with unit diagonal
    """

    labels: tuple[str, ...]
    topology: Topology
    values: NDArray[np.float64]

    def to_frame(self) -> pd.DataFrame:
        """Labelled square table for CSV output."""
        return pd.DataFrame(self.values, index=list(self.labels), columns=list(self.labels))


def _correlate(networks: Sequence[Network], tickers: Sequence[str]) -> NDArray[np.float64]:
    vectors: list[CentralityVector] = [markov_centrality(n).reorder(tickers) for n in networks]
    k = len(vectors)
    values = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            values[i, j] = values[j, i] = centrality_correlation(vectors[i], vectors[j])
    return values


def compare_all(networks: Sequence[Network]) -> tuple[CentralityComparison, CentralityComparison]:
    """Markov-centrality correlation matrices for trees and for planar graphs.

    Networks are split by topology, keeping their order (measure 1 first).

    Args:
        networks: Trees and planar graphs over a shared ticker universe

    Returns:
        (trees comparison, planar comparison)

    Raises:
        MetricsError: If the ticker universes differ or a class is empty
    """
    if not networks:
        raise MetricsError("no networks to compare")
    tickers = networks[0].tickers
    for network in networks[1:]:
        if sorted(network.tickers) != sorted(tickers):
            raise MetricsError(f"network '{network.label}' covers a different ticker universe")

    results: list[CentralityComparison] = []
    for topology in (Topology.TREE, Topology.PLANAR):
        group = [n for n in networks if n.topology is topology]
        if not group:
            raise MetricsError(f"no {topology.value} networks to compare")
        values = _correlate(group, tickers)
        results.append(CentralityComparison(tuple(n.label for n in group), topology, values))
        logger.info("centralities_compared", topology=topology.value, networks=len(group))
    return results[0], results[1]


@dataclass(frozen=True)
class ComparisonRow:
    """One row of the network comparison table.

    Attributes:
        network_id: Measure identifier, or ``Reference`` for the complete graph
        tree_ratio: Sector ratio of the tree
        graph_ratio: Sector ratio of the planar graph
        clustering: Clustering of the planar graph
    """

    network_id: str
    tree_ratio: float
    graph_ratio: float
    clustering: float | None


@dataclass(frozen=True)
class ComparisonTable:
    """Comparison rows plus the Reference row and the baseline verdict.

    Attributes:
        rows: One row per measure
        reference: Complete-graph row
        trees_above_baseline: Whether every tree ratio exceeds the reference ratio
    """

    rows: tuple[ComparisonRow, ...]
    reference: ComparisonRow
    trees_above_baseline: bool

    def to_frame(self) -> pd.DataFrame:
        """Rows followed by the Reference row, one column per metric."""
        records = [
            {
                "network": row.network_id,
                "tree_ratio": row.tree_ratio,
                "graph_ratio": row.graph_ratio,
                "clustering": row.clustering,
            }
            for row in (*self.rows, self.reference)
        ]
        return pd.DataFrame.from_records(records)


def comparison_table(
    trees: Sequence[Network],
    planar: Sequence[Network],
    sectors: SectorMap,
    network_ids: Sequence[str] | None = None,
) -> ComparisonTable:
    """Build the network comparison table.

    Args:
        trees: One tree per measure
        planar: One planar graph per measure, in the same order
        sectors: Sector map covering every ticker
        network_ids: Row identifiers; defaults to the tree labels

    Returns:
        ComparisonTable with the Reference row from the complete graph

    Raises:
        MetricsError: If the lists differ in length or a sector is missing
    """
    if len(trees) != len(planar):
        raise MetricsError(f"{len(trees)} trees but {len(planar)} planar graphs")
    if not trees:
        raise MetricsError("no networks to tabulate")
    ids = list(network_ids) if network_ids is not None else [t.label for t in trees]
    if len(ids) != len(trees):
        raise MetricsError("one network id per measure is required")

    rows = tuple(
        ComparisonRow(
            network_id=network_id,
            tree_ratio=sector_ratio(tree, sectors),
            graph_ratio=sector_ratio(graph, sectors),
            clustering=network_report(graph, sectors).clustering,
        )
        for network_id, tree, graph in zip(ids, trees, planar, strict=True)
    )
    tickers = trees[0].tickers
    baseline = reference_sector_ratio(tickers, sectors)
    complete = Network.complete(tickers, sectors)
    reference = ComparisonRow(
        network_id=REFERENCE_ID,
        tree_ratio=baseline,
        graph_ratio=baseline,
        clustering=clustering_coefficient(complete) if len(tickers) >= 3 else None,
    )
    verdict = all(row.tree_ratio > baseline for row in rows)
    logger.info("comparison_tabulated", rows=len(rows), baseline=baseline, verdict=verdict)
    return ComparisonTable(rows=rows, reference=reference, trees_above_baseline=verdict)
