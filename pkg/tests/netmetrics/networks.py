"""Small hand-built networks shared by the metrics tests."""

from pminet.ingest import SectorMap
from pminet.netbuild import Edge, Network, Topology, make_nodes

TWO_SECTORS = SectorMap({"A": "X", "B": "X", "C": "Y", "D": "Y"})


def network(
    tickers: str,
    pairs: list[str],
    topology: Topology = Topology.TREE,
    label: str = "",
    sectors: SectorMap | None = None,
    directed: bool = False,
) -> Network:
    """Network over single-letter tickers with edges given as two-letter strings."""
    edges = tuple(Edge(p[0], p[1], 1.0) for p in pairs)
    return Network(
        make_nodes(list(tickers), sectors), edges, directed=directed, topology=topology, label=label
    )
