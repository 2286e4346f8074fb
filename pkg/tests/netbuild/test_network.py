"""Tests for the Network type."""

import pytest

from pminet.ingest import SectorMap
from pminet.netbuild import Edge, Network, Node, Topology, make_nodes


class TestTopology:
    """Tests for Topology."""

    @pytest.mark.parametrize(
        ("value", "expected"),
        [
            ("mst", Topology.TREE),
            ("PMFG", Topology.PLANAR),
            ("tree", Topology.TREE),
            (" planar ", Topology.PLANAR),
            ("unrestricted", Topology.UNRESTRICTED),
            (Topology.TREE, Topology.TREE),
        ],
    )
    def test_parse(self, value, expected):
        """Builder tags and values resolve to the same member."""
        assert Topology.parse(value) is expected

    def test_parse_unknown(self):
        """An unknown topology lists the accepted tags."""
        with pytest.raises(ValueError, match="unknown topology 'star'"):
            Topology.parse("star")

    def test_builder_tags(self):
        """File-name tags are mst, pmfg and complete."""
        assert [t.builder_tag for t in Topology] == ["mst", "pmfg", "complete"]


class TestNetwork:
    """Tests for Network."""

    def test_rejects_duplicate_tickers(self):
        """Node tickers must be unique."""
        with pytest.raises(ValueError, match="unique"):
            Network((Node("A"), Node("A")), ())

    def test_rejects_unknown_ticker(self):
        """Edges may only join known nodes."""
        with pytest.raises(ValueError, match="unknown ticker"):
            Network((Node("A"), Node("B")), (Edge("A", "C", 1.0),))

    def test_rejects_self_loop(self):
        """An edge must join two different tickers."""
        with pytest.raises(ValueError, match="self-loop on A"):
            Network((Node("A"), Node("B")), (Edge("A", "A", 1.0),))

    def test_rejects_reversed_duplicate_when_undirected(self):
        """A-B and B-A are the same undirected edge."""
        with pytest.raises(ValueError, match="duplicate edge B-A"):
            Network((Node("A"), Node("B")), (Edge("A", "B", 1.0), Edge("B", "A", 2.0)))

    def test_directed_allows_both_directions(self):
        """A directed network may hold both A->B and B->A on one adjacency."""
        network = Network(
            (Node("A"), Node("B")),
            (Edge("A", "B", 1.0), Edge("B", "A", 2.0)),
            directed=True,
        )

        assert len(network.edges) == 2
        assert network.edge_count == 1

    def test_complete(self):
        """The complete graph over N tickers has N(N-1)/2 unit edges."""
        network = Network.complete(["A", "B", "C", "D"])

        assert network.edge_count == 6
        assert {e.weight for e in network.edges} == {1.0}
        assert network.topology is Topology.UNRESTRICTED
        assert network.label == "reference"

    def test_index_and_tickers(self):
        """Node order is the input order."""
        network = Network.complete(["C", "A", "B"])

        assert network.tickers == ["C", "A", "B"]
        assert network.index("B") == 2
        with pytest.raises(KeyError):
            network.index("Z")

    def test_to_graph_keeps_first_record(self):
        """The skeleton keeps one edge per adjacency with the first weight."""
        network = Network(
            make_nodes(["A", "B", "C"], SectorMap({"A": "X", "B": "Y", "C": "Y"})),
            (Edge("A", "B", 0.9), Edge("B", "A", 0.7), Edge("B", "C", 0.5)),
            directed=True,
        )

        graph = network.to_graph()
        digraph = network.to_digraph()

        assert graph.number_of_edges() == 2
        assert graph["A"]["B"]["weight"] == 0.9
        assert graph.nodes["C"]["sector"] == "Y"
        assert digraph.number_of_edges() == 3
        assert digraph["B"]["A"]["weight"] == 0.7
