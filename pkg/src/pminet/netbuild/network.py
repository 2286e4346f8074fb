"""Network type shared by the builders, metrics and exporters.

A network is an ordered node list (ticker plus optional sector), an ordered
edge list and two tags: whether edges are directed and which topology
constraint produced it. Node order is the input ticker order and edge order
is acceptance order, so every serialization is reproducible.
"""

from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

import networkx as nx

from pminet.ingest.prices import SectorMap


class NetworkBuildError(Exception):
    """Base exception for network construction errors."""

    pass


class NonFiniteWeightError(NetworkBuildError):
    """Raised when a similarity entry needed by a builder is NaN or infinite."""

    pass


class Topology(Enum):
    """Constraint a network was built under.

    Attributes:
        TREE: Spanning tree or forest (MST family)
        PLANAR: Planar graph (PMFG family)
        UNRESTRICTED: No constraint (complete reference graph)
    """

    TREE = "tree"
    PLANAR = "planar"
    UNRESTRICTED = "unrestricted"

    @classmethod
    def parse(cls, value: "str | Topology") -> "Topology":
        """Resolve a topology from its value or a builder tag (``mst``, ``pmfg``).

        Raises:
            ValueError: If the tag is unknown
        """
        if isinstance(value, Topology):
            return value
        text = value.strip().lower()
        aliases = {"mst": cls.TREE, "pmfg": cls.PLANAR}
        if text in aliases:
            return aliases[text]
        try:
            return cls(text)
        except ValueError:
            raise ValueError(
                f"unknown topology '{value}'; expected mst, pmfg, tree, planar or unrestricted"
            ) from None

    @property
    def builder_tag(self) -> str:
        """Short tag used in file names: mst, pmfg or complete."""
        return {"tree": "mst", "planar": "pmfg", "unrestricted": "complete"}[self.value]


@dataclass(frozen=True)
class Node:
    """A ticker and its sector label, if known."""

    ticker: str
    sector: str | None = None


@dataclass(frozen=True)
class Edge:
    """A weighted edge; for directed networks it points from source to target.

    Attributes:
        source: Ticker at the tail (the influencing ticker Z for influence networks)
        target: Ticker at the head
        weight: Distance or influence value the edge was accepted on
    """

    source: str
    target: str
    weight: float

    @property
    def pair(self) -> frozenset[str]:
        """The undirected adjacency this edge belongs to."""
        return frozenset((self.source, self.target))


@dataclass(frozen=True)
class Network:
    """Nodes, edges and construction tags of one network.

    Attributes:
        nodes: Nodes in input ticker order
        edges: Edges in acceptance order
        directed: Whether edges carry a direction
        topology: Constraint the network was built under
        label: Free-form identifier, e.g. ``corr-dist/mst``
    """

    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    directed: bool = False
    topology: Topology = Topology.UNRESTRICTED
    label: str = ""
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        """Validate node and edge invariants.

        Raises:
            ValueError: If tickers repeat, an edge names an unknown ticker or is a
                self-loop, or an edge is duplicated
        """
        index = {node.ticker: i for i, node in enumerate(self.nodes)}
        if len(index) != len(self.nodes):
            raise ValueError("node tickers must be unique")
        seen: set[object] = set()
        for edge in self.edges:
            if edge.source not in index or edge.target not in index:
                raise ValueError(f"edge {edge.source}-{edge.target} names an unknown ticker")
            if edge.source == edge.target:
                raise ValueError(f"self-loop on {edge.source}")
            key: object = (edge.source, edge.target) if self.directed else edge.pair
            if key in seen:
                raise ValueError(f"duplicate edge {edge.source}-{edge.target}")
            seen.add(key)
        object.__setattr__(self, "_index", index)

    @classmethod
    def complete(
        cls, tickers: Iterable[str], sectors: SectorMap | None = None, label: str = "reference"
    ) -> "Network":
        """The complete undirected graph over the tickers, with unit weights.

        Example:
            >>> Network.complete(["A", "B", "C"]).edge_count
            3
        """
        nodes = make_nodes(tickers, sectors)
        edges = tuple(Edge(a.ticker, b.ticker, 1.0) for a, b in combinations(nodes, 2))
        return cls(nodes, edges, directed=False, topology=Topology.UNRESTRICTED, label=label)

    @property
    def tickers(self) -> list[str]:
        """Node tickers in order."""
        return [node.ticker for node in self.nodes]

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        """Number of undirected adjacencies (two directed records on one pair count once)."""
        return len({edge.pair for edge in self.edges})

    def index(self, ticker: str) -> int:
        """Position of a ticker in the node order.

        Raises:
            KeyError: If the ticker is not a node
        """
        return self._index[ticker]

    def to_graph(self) -> nx.Graph:
        """Undirected simple skeleton as a networkx graph.

        Nodes carry a ``sector`` attribute when known; an adjacency with two
        directed records keeps the weight of the first one accepted.
        """
        graph = nx.Graph()
        for node in self.nodes:
            graph.add_node(node.ticker, **({"sector": node.sector} if node.sector else {}))
        for edge in self.edges:
            if not graph.has_edge(edge.source, edge.target):
                graph.add_edge(edge.source, edge.target, weight=edge.weight)
        return graph

    def to_digraph(self) -> nx.DiGraph:
        """Directed networkx view; undirected edges become source-to-target arcs."""
        graph = nx.DiGraph()
        for node in self.nodes:
            graph.add_node(node.ticker, **({"sector": node.sector} if node.sector else {}))
        for edge in self.edges:
            graph.add_edge(edge.source, edge.target, weight=edge.weight)
        return graph


def make_nodes(tickers: Iterable[str], sectors: SectorMap | None = None) -> tuple[Node, ...]:
    """Nodes for the tickers, labelled from the sector map when one is given."""
    return tuple(
        Node(ticker, sectors.get(ticker) if sectors is not None else None) for ticker in tickers
    )
