"""Greedy network builders.

All builders walk a sorted candidate list once and accept a candidate iff the
graph keeps its topology: a forest for trees, planar for planar graphs.
Distances (measures 1-4) are walked in increasing order; average influences
(measures 5-6) in decreasing order. Ties follow the ticker-pair order of the
matrix types, so the accepted edge list is reproducible bit for bit.
"""

import networkx as nx
import numpy as np
import structlog
from networkx.utils import UnionFind

from pminet.ingest.prices import SectorMap
from pminet.netbuild.network import (
    Edge,
    Network,
    NetworkBuildError,
    NonFiniteWeightError,
    Topology,
    make_nodes,
)
from pminet.similarity.matrices import InfluenceMatrix, SimilarityMatrix

logger = structlog.get_logger(__name__)

# Every simple graph with at most this many edges is planar (K3,3 has 9)
ALWAYS_PLANAR_EDGES = 8


def _require_finite(values: np.ndarray, label: str) -> None:
    off = ~np.eye(values.shape[0], dtype=bool)
    bad = off & ~np.isfinite(values)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise NonFiniteWeightError(f"{label} has a non-finite entry at ({i}, {j})")


def max_planar_edges(n: int) -> int:
    """Edge count of a maximal planar graph on n nodes."""
    return 3 * n - 6 if n >= 3 else n * (n - 1) // 2


def _is_planar(graph: nx.Graph) -> bool:
    if graph.number_of_edges() <= ALWAYS_PLANAR_EDGES:
        return True
    planar, _ = nx.check_planarity(graph)
    return bool(planar)


def planarity_check(network: Network | nx.Graph, candidate: tuple[str, str]) -> bool:
    """Whether the undirected skeleton stays planar with one more edge.

    Uses the left-right planarity test from networkx on a copy, so the
    network is never modified.

    Args:
        network: Network or networkx graph to test against
        candidate: Endpoints of the edge to add

    Returns:
        True iff graph plus the edge admits a planar embedding

    Example:
        >>> k4 = Network.complete(["A", "B", "C", "D"])
        >>> planarity_check(k4, ("A", "E"))
        True
    """
    graph = network.to_graph() if isinstance(network, Network) else nx.Graph(network)
    graph.add_edge(*candidate)
    return _is_planar(graph)


def build_mst(
    matrix: SimilarityMatrix, sectors: SectorMap | None = None, label: str = ""
) -> Network:
    """Minimum spanning tree by Kruskal's greedy rule.

    Args:
        matrix: Distance matrix of measures 1-4
        sectors: Optional sector labels for the nodes
        label: Network identifier

    Returns:
        Undirected tree with N-1 edges in acceptance order

    Raises:
        NetworkBuildError: If fewer than 2 tickers are given
        NonFiniteWeightError: If any off-diagonal entry is not finite
    """
    if matrix.n < 2:
        raise NetworkBuildError(f"a spanning tree needs at least 2 tickers, got {matrix.n}")
    _require_finite(matrix.values, matrix.measure.tag)

    tickers = matrix.tickers
    forest = UnionFind(tickers)
    edges: list[Edge] = []
    for value, i, j in matrix.sorted_pairs():
        if forest[tickers[i]] == forest[tickers[j]]:
            continue
        forest.union(tickers[i], tickers[j])
        edges.append(Edge(tickers[i], tickers[j], value))
        if len(edges) == matrix.n - 1:
            break

    logger.info("network_built", topology="mst", measure=matrix.measure.tag, edges=len(edges))
    return Network(
        make_nodes(tickers, sectors),
        tuple(edges),
        directed=False,
        topology=Topology.TREE,
        label=label,
    )


def build_pmfg(
    matrix: SimilarityMatrix, sectors: SectorMap | None = None, label: str = ""
) -> Network:
    """Planar maximally filtered graph.

    Candidates are accepted while the graph stays planar, until it holds
    3N-6 edges.

    Args:
        matrix: Distance matrix of measures 1-4
        sectors: Optional sector labels for the nodes
        label: Network identifier

    Returns:
        Undirected planar network with 3N-6 edges in acceptance order

    Raises:
        NetworkBuildError: If fewer than 3 tickers are given
        NonFiniteWeightError: If any off-diagonal entry is not finite
    """
    if matrix.n < 3:
        raise NetworkBuildError(f"a PMFG needs at least 3 tickers, got {matrix.n}")
    _require_finite(matrix.values, matrix.measure.tag)

    tickers = matrix.tickers
    target = max_planar_edges(matrix.n)
    graph = nx.Graph()
    graph.add_nodes_from(tickers)
    edges: list[Edge] = []
    rejected = 0
    for value, i, j in matrix.sorted_pairs():
        graph.add_edge(tickers[i], tickers[j])
        if not _is_planar(graph):
            graph.remove_edge(tickers[i], tickers[j])
            rejected += 1
            continue
        edges.append(Edge(tickers[i], tickers[j], value))
        if len(edges) == target:
            break

    logger.info(
        "network_built",
        topology="pmfg",
        measure=matrix.measure.tag,
        edges=len(edges),
        rejected=rejected,
    )
    return Network(
        make_nodes(tickers, sectors),
        tuple(edges),
        directed=False,
        topology=Topology.PLANAR,
        label=label,
    )


def build_influence_graph(
    infl: InfluenceMatrix,
    topology: Topology | str,
    sectors: SectorMap | None = None,
    label: str = "",
) -> Network:
    """Directed network from average influences.

    The N(N-1) values d(X|Z) are walked in decreasing order and each is a
    candidate arc Z -> X. An arc that opens a new adjacency is accepted iff
    the undirected skeleton stays planar (``planar``) or a forest (``tree``).
    An arc over an adjacency that already exists leaves the skeleton unchanged
    and is kept as a second directed record. The walk stops once the skeleton
    holds 3N-6 (planar) or N-1 (tree) adjacencies.

    Args:
        infl: Average influence matrix of measure 5 or 6
        topology: ``tree``/``mst`` or ``planar``/``pmfg``
        sectors: Optional sector labels for the nodes
        label: Network identifier

    Returns:
        Directed network in acceptance order

    Raises:
        NetworkBuildError: If fewer than 3 tickers are given or the topology is unrestricted
        NonFiniteWeightError: If any off-diagonal entry is not finite
    """
    topology = Topology.parse(topology)
    if topology is Topology.UNRESTRICTED:
        raise NetworkBuildError("influence networks are built as a tree or a planar graph")
    if infl.n < 3:
        raise NetworkBuildError(f"an influence network needs at least 3 tickers, got {infl.n}")
    _require_finite(infl.values, infl.measure.tag)

    tickers = infl.tickers
    target = infl.n - 1 if topology is Topology.TREE else max_planar_edges(infl.n)
    graph = nx.Graph()
    graph.add_nodes_from(tickers)
    forest = UnionFind(tickers)
    edges: list[Edge] = []
    for value, z, x in infl.sorted_entries():
        source, dest = tickers[z], tickers[x]
        if graph.has_edge(source, dest):
            edges.append(Edge(source, dest, value))
            continue
        if topology is Topology.TREE:
            if forest[source] == forest[dest]:
                continue
            forest.union(source, dest)
            graph.add_edge(source, dest)
        else:
            graph.add_edge(source, dest)
            if not _is_planar(graph):
                graph.remove_edge(source, dest)
                continue
        edges.append(Edge(source, dest, value))
        if graph.number_of_edges() == target:
            break

    logger.info(
        "network_built",
        topology=topology.builder_tag,
        measure=infl.measure.tag,
        adjacencies=graph.number_of_edges(),
        records=len(edges),
    )
    return Network(
        make_nodes(tickers, sectors), tuple(edges), directed=True, topology=topology, label=label
    )
