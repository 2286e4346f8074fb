"""Output formatting utilities for the CLI.

Human-readable tables and summaries go to stdout through these helpers;
structured logs go to stderr.
"""

from collections.abc import Mapping, Sequence
from pathlib import Path

import numpy as np

from pminet.ingest import Exclusion
from pminet.netbuild import Network
from pminet.netmetrics import CentralityComparison, ComparisonTable, NetworkReport
from pminet.pipeline import SignificanceResult


def print_separator(char: str = "=", width: int = 80) -> None:
    """Print a separator line.

    Args:
        char: Character to use for the separator
        width: Width of the separator line
    """
    print(char * width)


def print_section_header(title: str, width: int = 80) -> None:
    """Print a section header with a title.

    Args:
        title: Title text to display
        width: Total width of the header
    """
    print()
    print_separator("=", width)
    print(title)
    print_separator("=", width)


def print_subsection_header(title: str, width: int = 80) -> None:
    """Print a subsection header with a title.

    Args:
        title: Title text to display
        width: Total width of the header
    """
    print()
    print_separator("-", width)
    print(title)
    print_separator("-", width)


def format_percent(value: float | None) -> str:
    """Percentage with two decimals, or ``n/a``."""
    return "n/a" if value is None else f"{100.0 * value:6.2f}%"


def print_exclusions(exclusions: Sequence[Exclusion]) -> None:
    """List tickers dropped during loading."""
    if not exclusions:
        return
    print_subsection_header(f"Excluded tickers ({len(exclusions)})")
    for exclusion in exclusions:
        print(f"  {exclusion.ticker:<10} {exclusion.reason} (row {exclusion.row})")


def print_network_summary(network: Network) -> None:
    """Nodes, edges and the first accepted edges of a network."""
    kind = "directed" if network.directed else "undirected"
    print_subsection_header(f"Network {network.label} ({kind}, {network.topology.value})")
    print(f"Nodes: {network.node_count}")
    print(f"Edges: {network.edge_count} adjacencies, {len(network.edges)} records")
    for edge in network.edges[:10]:
        arrow = "->" if network.directed else "--"
        print(f"  {edge.source} {arrow} {edge.target}  {edge.weight:.6f}")
    if len(network.edges) > 10:
        print(f"  ... {len(network.edges) - 10} more")


def print_report(report: NetworkReport) -> None:
    """Network-level metrics of one network."""
    print_subsection_header(f"Metrics: {report.label}")
    print(f"Nodes:        {report.node_count}")
    print(f"Edges:        {report.edge_count}")
    print(f"Sector ratio: {format_percent(report.sector_ratio)}")
    print(f"Clustering:   {format_percent(report.clustering)}")


def print_comparison_table(table: ComparisonTable) -> None:
    """The network comparison table with the Reference row and the verdict."""
    print_section_header("Network comparison")
    print(f"{'Network':<12}{'Tree ratio':>14}{'Graph ratio':>14}{'Clustering':>14}")
    print_separator("-")
    for row in (*table.rows, table.reference):
        print(
            f"{row.network_id:<12}"
            f"{format_percent(row.tree_ratio):>14}"
            f"{format_percent(row.graph_ratio):>14}"
            f"{format_percent(row.clustering):>14}"
        )
    print()
    verdict = "yes" if table.trees_above_baseline else "no"
    print(f"Every tree ratio above the complete-graph baseline: {verdict}")


def print_correlation_matrix(comparison: CentralityComparison) -> None:
    """Square matrix of centrality correlations with short labels."""
    print_subsection_header(f"Markov centrality correlations ({comparison.topology.value})")
    labels = [label.split("/")[0] for label in comparison.labels]
    width = max(8, *(len(label) for label in labels)) + 1
    print(" " * width + "".join(f"{i + 1:>8}" for i in range(len(labels))))
    for i, label in enumerate(labels):
        cells = "".join(f"{value:8.3f}" for value in comparison.values[i])
        print(f"{label:<{width}}{cells}")


def print_significance(result: SignificanceResult) -> None:
    """Threshold and count of significant pairs."""
    params = result.params
    n = len(result.tickers)
    pairs = n * (n - 1) // 2
    significant = int(np.triu(result.mask, 1).sum())
    print_subsection_header("Significance of minimal partial mutual information")
    print(f"Gamma shape:  {params.kappa:g}")
    print(f"Gamma scale:  1/{params.m}")
    print(f"Threshold:    {result.threshold:.6g} nats")
    print(f"Significant:  {significant} of {pairs} pairs")


def print_artifacts(artifacts: Mapping[str, Path], manifest: Path | None = None) -> None:
    """List written files."""
    print_subsection_header("Artifacts")
    for path in artifacts.values():
        print(f"  {path}")
    if manifest is not None:
        print(f"  {manifest}")
