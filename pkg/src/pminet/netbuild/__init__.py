"""Greedy construction of spanning trees, planar filtered graphs and influence networks."""

from pminet.netbuild.builders import (
    build_influence_graph,
    build_mst,
    build_pmfg,
    max_planar_edges,
    planarity_check,
)
from pminet.netbuild.network import (
    Edge,
    Network,
    NetworkBuildError,
    Node,
    NonFiniteWeightError,
    Topology,
    make_nodes,
)

__all__ = [
    "Edge",
    "Network",
    "NetworkBuildError",
    "Node",
    "NonFiniteWeightError",
    "Topology",
    "build_influence_graph",
    "build_mst",
    "build_pmfg",
    "make_nodes",
    "max_planar_edges",
    "planarity_check",
]
