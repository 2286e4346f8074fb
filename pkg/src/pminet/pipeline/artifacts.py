"""Artifact writers and graph export.

Every artifact names the config digest that produced it: CSV files start
with a ``# config_digest=<hex>`` comment line, GraphML graphs carry a
``config_digest`` attribute and DOT files a ``//`` comment. Floats are
written with 17 significant digits so values survive a round trip, and no
writer emits timestamps, so identical inputs give byte-identical files.
"""

import hashlib
import json
from enum import Enum
from pathlib import Path
from typing import Any

import networkx as nx
import numpy as np
import pandas as pd
import structlog

from pminet.ingest import PriceSeries, SectorMap
from pminet.netbuild import Network
from pminet.netmetrics import CentralityVector
from pminet.similarity import InfluenceMatrix, SimilarityMatrix

logger = structlog.get_logger(__name__)

FLOAT_FORMAT = "%.17g"
DIGEST_PREFIX = "# config_digest="


class ExportFormatError(ValueError):
    """Raised when a graph export format is not supported."""

    pass


class ExportFormat(Enum):
    """Supported graph export formats."""

    EDGELIST = "edgelist"
    GRAPHML = "graphml"
    DOT = "dot"

    @property
    def suffix(self) -> str:
        """File suffix of the format."""
        return {"edgelist": ".csv", "graphml": ".graphml", "dot": ".dot"}[self.value]

    @classmethod
    def parse(cls, value: "str | ExportFormat") -> "ExportFormat":
        """Resolve a format tag.

        Raises:
            ExportFormatError: If the tag is unknown
        """
        if isinstance(value, ExportFormat):
            return value
        try:
            return cls(value.strip().lower())
        except ValueError:
            formats = ", ".join(f.value for f in cls)
            raise ExportFormatError(f"unknown format '{value}'; expected {formats}") from None


def file_digest(path: Path) -> str:
    """sha256 of a file's bytes."""
    sha = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            sha.update(chunk)
    return sha.hexdigest()


def write_frame(frame: pd.DataFrame, path: Path, digest: str, index: bool = True) -> Path:
    """Write a table as CSV behind the digest comment line."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        handle.write(f"{DIGEST_PREFIX}{digest}\n")
        frame.to_csv(handle, index=index, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.debug("artifact_written", path=str(path), rows=len(frame))
    return path


def write_matrix(matrix: SimilarityMatrix | InfluenceMatrix, path: Path, digest: str) -> Path:
    """Write a matrix with tickers as header and row labels; the diagonal is empty."""
    frame = pd.DataFrame(matrix.values, index=list(matrix.tickers), columns=list(matrix.tickers))
    frame.index.name = "ticker"
    return write_frame(frame, path, digest)


def write_boolean_matrix(
    values: np.ndarray, tickers: tuple[str, ...] | list[str], path: Path, digest: str
) -> Path:
    """Write a boolean matrix as 0/1 entries."""
    frame = pd.DataFrame(values.astype(int), index=list(tickers), columns=list(tickers))
    frame.index.name = "ticker"
    return write_frame(frame, path, digest)


def write_prices(series: list[PriceSeries], path: Path, digest: str) -> Path:
    """Write price series in the wide ``date,<ticker>...`` layout read by load_prices."""
    frame = pd.DataFrame(
        {s.ticker: s.prices for s in series},
        index=pd.Index(list(series[0].timestamps), name="date"),
    )
    return write_frame(frame, path, digest)


def write_sectors(sectors: SectorMap, tickers: list[str], path: Path, digest: str) -> Path:
    """Write the ``ticker,sector`` file read by load_sectors."""
    frame = pd.DataFrame({"ticker": tickers, "sector": [sectors.get(t) for t in tickers]})
    return write_frame(frame, path, digest, index=False)


def write_json(data: dict[str, Any], path: Path) -> Path:
    """Write JSON with sorted keys and a trailing newline."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _edge_frame(network: Network) -> pd.DataFrame:
    return pd.DataFrame.from_records(
        [
            {
                "source": edge.source,
                "target": edge.target,
                "weight": edge.weight,
                "directed": str(network.directed).lower(),
            }
            for edge in network.edges
        ],
        columns=["source", "target", "weight", "directed"],
    )


def _export_graph_object(
    network: Network, digest: str, centrality: CentralityVector | None
) -> nx.Graph:
    graph = network.to_digraph() if network.directed else network.to_graph()
    graph.graph["config_digest"] = digest
    graph.graph["topology"] = network.topology.value
    if network.label:
        graph.graph["label"] = network.label
    if centrality is not None:
        for ticker, value in zip(centrality.tickers, centrality.values, strict=True):
            graph.nodes[ticker]["centrality"] = float(value)
    return graph


def export_graph(
    network: Network,
    fmt: ExportFormat | str,
    path: Path,
    digest: str,
    centrality: CentralityVector | None = None,
) -> Path:
    """Serialize a network.

    Args:
        network: Network to write
        fmt: ``edgelist`` (CSV ``source,target,weight,directed``), ``graphml``
            (sector and centrality as node attributes) or ``dot``
        path: Destination file
        digest: Config digest recorded in the file
        centrality: Optional node centralities for GraphML and DOT

    Returns:
        The written path

    Raises:
        ExportFormatError: If the format is unknown
    """
    fmt = ExportFormat.parse(fmt)
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt is ExportFormat.EDGELIST:
        write_frame(_edge_frame(network), path, digest, index=False)
    elif fmt is ExportFormat.GRAPHML:
        nx.write_graphml(_export_graph_object(network, digest, centrality), path)
    else:
        dot = nx.nx_pydot.to_pydot(_export_graph_object(network, digest, centrality))
        with path.open("w", encoding="utf-8", newline="") as handle:
            handle.write(f"// config_digest={digest}\n")
            handle.write(dot.to_string())
    logger.debug("graph_exported", path=str(path), format=fmt.value, edges=len(network.edges))
    return path
