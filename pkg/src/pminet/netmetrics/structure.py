"""Cluster- and network-level structure: sector ratio and clustering."""

from itertools import combinations

import networkx as nx

from pminet.ingest.prices import SectorMap
from pminet.netbuild import Network
from pminet.netmetrics.centrality import MetricsError


class MissingSectorError(MetricsError):
    """Raised when a node has no sector label."""

    pass


class NoConnectedTripleError(MetricsError):
    """Raised when a graph has no connected triple, so clustering is undefined."""

    pass


def _sector_lookup(network: Network, sectors: SectorMap | None) -> dict[str, str]:
    lookup: dict[str, str] = {}
    missing: list[str] = []
    for node in network.nodes:
        sector = sectors.get(node.ticker) if sectors is not None else node.sector
        if sector is None:
            missing.append(node.ticker)
        else:
            lookup[node.ticker] = sector
    if missing:
        raise MissingSectorError(f"no sector for: {', '.join(missing)}")
    return lookup


def sector_ratio(network: Network, sectors: SectorMap | None = None) -> float:
    """Fraction of adjacencies whose endpoints share a sector.

    Directed networks are counted on their undirected skeleton, so a pair
    with arcs both ways counts once.

    Args:
        network: Network with at least one edge
        sectors: Sector map; node labels are used when omitted

    Returns:
        Within-sector adjacencies divided by all adjacencies

    Raises:
        MissingSectorError: If any node lacks a sector
        MetricsError: If the network has no edges
    """
    lookup = _sector_lookup(network, sectors)
    graph = network.to_graph()
    total = graph.number_of_edges()
    if total == 0:
        raise MetricsError("sector ratio is undefined for a network without edges")
    within = sum(1 for a, b in graph.edges() if lookup[a] == lookup[b])
    return within / total


def reference_sector_ratio(tickers: list[str], sectors: SectorMap) -> float:
    """Sector ratio of the complete graph, sum C(n_i, 2) / C(n, 2).

    Raises:
        MissingSectorError: If any ticker lacks a sector
    """
    missing = [t for t in tickers if t not in sectors]
    if missing:
        raise MissingSectorError(f"no sector for: {', '.join(missing)}")
    if len(tickers) < 2:
        raise MetricsError("sector ratio needs at least 2 tickers")
    pairs = list(combinations(tickers, 2))
    within = sum(1 for a, b in pairs if sectors.get(a) == sectors.get(b))
    return within / len(pairs)


def clustering_coefficient(network: Network) -> float:
    """Transitivity of the undirected skeleton: 3 x triangles / connected triples.

    Raises:
        NoConnectedTripleError: If the skeleton has no connected triple
    """
    graph = network.to_graph()
    triples = sum(d * (d - 1) // 2 for _, d in graph.degree())
    if triples == 0:
        raise NoConnectedTripleError(
            f"network '{network.label or 'unnamed'}' has no connected triple"
        )
    return float(nx.transitivity(graph))
