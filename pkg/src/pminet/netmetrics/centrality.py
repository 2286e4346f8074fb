"""Markov centrality and cross-network centrality correlation.

The Markov centrality of node v is n divided by the total mean first-passage
time into v of a uniform random walk on the unweighted skeleton::

    C(v) = n / sum_s MFPT(s -> v),    MFPT(v -> v) = 0

Mean first-passage times come from the fundamental matrix of the walk,
Z = (I - P + 1 π^T)^-1, as MFPT(s -> v) = (Z[v, v] - Z[s, v]) / π[v].
"""

from collections.abc import Sequence
from dataclasses import dataclass

import networkx as nx
import numpy as np
import structlog
from numpy.typing import NDArray

from pminet.netbuild import Network

logger = structlog.get_logger(__name__)


class MetricsError(Exception):
    """Base exception for network metric errors."""

    pass


class DisconnectedNetworkError(MetricsError):
    """Raised when a walk-based metric is asked of a disconnected network.

    Attributes:
        components: Tickers of each connected component, largest first
    """

    def __init__(self, components: list[list[str]]) -> None:
        self.components = components
        listing = "; ".join("{" + ", ".join(c) + "}" for c in components)
        super().__init__(f"network has {len(components)} components: {listing}")


class ConstantCentralityError(MetricsError):
    """Raised when a centrality vector has no variance to correlate."""

    pass


@dataclass(frozen=True, eq=False)
class CentralityVector:
    """One centrality value per node.

    Attributes:
        tickers: Node order
        values: Non-negative finite centralities
    """

    tickers: tuple[str, ...]
    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        """Validate length and range.

        Raises:
            ValueError: If lengths differ or a value is negative or not finite
        """
        if len(self.values) != len(self.tickers):
            raise ValueError(f"{len(self.values)} centralities for {len(self.tickers)} tickers")
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0):
            raise ValueError("centralities must be finite and non-negative")

    def __getitem__(self, ticker: str) -> float:
        return float(self.values[self.tickers.index(ticker)])

    def reorder(self, tickers: Sequence[str]) -> "CentralityVector":
        """Same values listed in another ticker order.

        Raises:
            ValueError: If the ticker sets differ
        """
        if sorted(tickers) != sorted(self.tickers):
            raise ValueError("ticker sets differ")
        position = {t: i for i, t in enumerate(self.tickers)}
        order = [position[t] for t in tickers]
        return CentralityVector(tuple(tickers), self.values[order])


def mean_first_passage_times(graph: nx.Graph, nodes: Sequence[str]) -> NDArray[np.float64]:
    """MFPT matrix [s, v] of the uniform random walk; zero on the diagonal.

    The graph must be connected with at least two nodes.
    """
    adjacency = nx.to_numpy_array(graph, nodelist=list(nodes), weight=None)
    degree = adjacency.sum(axis=1)
    transition = adjacency / degree[:, None]
    stationary = degree / degree.sum()
    n = len(nodes)
    identity = np.eye(n)
    fundamental = np.linalg.solve(identity - transition + stationary[None, :], identity)
    mfpt = (np.diag(fundamental)[None, :] - fundamental) / stationary[None, :]
    np.fill_diagonal(mfpt, 0.0)
    return mfpt


def markov_centrality(network: Network) -> CentralityVector:
    """Markov centrality of every node on the undirected skeleton.

    Directed influence networks are projected onto their skeleton so that
    trees and planar graphs of all measures are comparable.

    Args:
        network: Connected network with at least two nodes

    Returns:
        CentralityVector in node order

    Raises:
        DisconnectedNetworkError: If the skeleton is disconnected
        MetricsError: If the network has fewer than two nodes
    """
    if network.node_count < 2:
        raise MetricsError("Markov centrality needs at least 2 nodes")
    graph = network.to_graph()
    if not nx.is_connected(graph):
        components = sorted(
            (sorted(c, key=network.index) for c in nx.connected_components(graph)),
            key=lambda c: (-len(c), network.index(c[0])),
        )
        raise DisconnectedNetworkError(components)

    mfpt = mean_first_passage_times(graph, network.tickers)
    values = network.node_count / mfpt.sum(axis=0)
    logger.debug("centrality_computed", label=network.label, nodes=network.node_count)
    return CentralityVector(tuple(network.tickers), values)


def centrality_correlation(a: CentralityVector, b: CentralityVector) -> float:
    """Pearson correlation of two centrality vectors over the same tickers.

    Args:
        a: First vector
        b: Second vector, same tickers in the same order

    Returns:
        Correlation in [-1, 1]

    Raises:
        ValueError: If the ticker lists differ
        ConstantCentralityError: If either vector is constant
    """
    if a.tickers != b.tickers:
        raise ValueError("centrality vectors must list the same tickers in the same order")
    for vector in (a, b):
        spread = float(np.ptp(vector.values))
        if spread <= 1e-12 * max(1.0, float(np.abs(vector.values).max())):
            raise ConstantCentralityError("centrality vector is constant")
    return float(np.clip(np.corrcoef(a.values, b.values)[0, 1], -1.0, 1.0))
