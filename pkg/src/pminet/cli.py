"""Command-line interface for pminet.

This module provides a CLI for the network study: loading prices, building
the six similarity matrices, filtering them into trees and planar graphs,
computing metrics, comparing all twelve networks, testing minimal partial
mutual information for significance and generating synthetic markets.
"""

import argparse
import sys
from pathlib import Path

import structlog

from pminet.config import PipelineConfig, configure_logging, load_config
from pminet.ingest import returns_frame
from pminet.output import (
    print_artifacts,
    print_comparison_table,
    print_correlation_matrix,
    print_exclusions,
    print_network_summary,
    print_report,
    print_section_header,
    print_significance,
)
from pminet.pipeline import (
    ExportFormat,
    Pipeline,
    StageError,
    run_pipeline,
    write_frame,
    write_json,
    write_prices,
    write_sectors,
)
from pminet.synth import SynthSpec, generate

logger = structlog.get_logger(__name__)


def _report_error(command: str, error: Exception) -> int:
    if isinstance(error, StageError):
        print(f"Error [{error.stage}]: {error}", file=sys.stderr)
    else:
        print(f"Error [{command}]: {error}", file=sys.stderr)
    return 1


def _finish(pipeline: Pipeline, artifacts: dict[str, Path]) -> None:
    manifest = pipeline.write_manifest(artifacts)
    print_artifacts(artifacts, manifest)


def cmd_run(args: argparse.Namespace, config: PipelineConfig) -> int:
    """Handle the 'run' command - full pipeline for one measure and topology.

    Args:
        args: Parsed command-line arguments
        config: Pipeline configuration

    Returns:
        Exit code (0 for success, non-zero for error)
    """
    try:
        result = run_pipeline(config)
        print_section_header(f"pminet run ({config.analysis.measure.tag})")
        print_artifacts(result.artifacts, result.manifest)
        return 0
    except Exception as e:
        return _report_error("run", e)


def cmd_returns(args: argparse.Namespace, config: PipelineConfig) -> int:
    """Handle the 'returns' command - write log returns."""
    try:
        pipeline = Pipeline(config)
        loaded = pipeline.load()
        path = pipeline.write_returns()
        print_section_header(f"Log returns of {len(loaded.series)} tickers")
        print_exclusions(loaded.exclusions)
        _finish(pipeline, {path.name: path})
        return 0
    except Exception as e:
        return _report_error("returns", e)


def cmd_discretize(args: argparse.Namespace, config: PipelineConfig) -> int:
    """Handle the 'discretize' command - write rank states."""
    try:
        pipeline = Pipeline(config)
        loaded = pipeline.load()
        path = pipeline.write_states()
        print_section_header(
            f"Rank states of {len(loaded.series)} tickers ({config.analysis.bins} bins)"
        )
        print_exclusions(loaded.exclusions)
        _finish(pipeline, {path.name: path})
        return 0
    except Exception as e:
        return _report_error("discretize", e)


def cmd_matrix(args: argparse.Namespace, config: PipelineConfig) -> int:
    """Handle the 'matrix' command - write one similarity matrix."""
    try:
        pipeline = Pipeline(config)
        path = pipeline.write_matrix()
        print_section_header(f"Matrix {config.analysis.measure.tag}")
        print_exclusions(pipeline.load().exclusions)
        _finish(pipeline, {path.name: path})
        return 0
    except Exception as e:
        return _report_error("matrix", e)


def cmd_network(args: argparse.Namespace, config: PipelineConfig) -> int:
    """Handle the 'network' command - build a network and write its edge list."""
    try:
        pipeline = Pipeline(config)
        network = pipeline.network()
        artifacts = pipeline.write_network(network, (ExportFormat.EDGELIST,))
        print_section_header("Network")
        print_network_summary(network)
        _finish(pipeline, artifacts)
        return 0
    except Exception as e:
        return _report_error("network", e)


def cmd_metrics(args: argparse.Namespace, config: PipelineConfig) -> int:
    """Handle the 'metrics' command - sector ratio and clustering of one network."""
    try:
        pipeline = Pipeline(config)
        network = pipeline.network()
        path = pipeline.write_report(network)
        print_section_header("Network metrics")
        print_report(pipeline.report(network))
        _finish(pipeline, {path.name: path})
        return 0
    except Exception as e:
        return _report_error("metrics", e)


def cmd_compare(args: argparse.Namespace, config: PipelineConfig) -> int:
    """Handle the 'compare' command - all twelve networks side by side.

    Writes the two 6x6 centrality-correlation matrices and, when a sector
    file is configured, the comparison table with the Reference row.
    """
    try:
        pipeline = Pipeline(config)
        tree_cmp, planar_cmp, table = pipeline.compare()
        artifacts = pipeline.write_comparison(tree_cmp, planar_cmp, table)
        print_section_header("Comparison of all networks")
        print_correlation_matrix(tree_cmp)
        print_correlation_matrix(planar_cmp)
        if table is not None:
            print_comparison_table(table)
        else:
            logger.info("comparison_table_skipped", reason="no sector file configured")
        _finish(pipeline, artifacts)
        return 0
    except Exception as e:
        return _report_error("compare", e)


def cmd_significance(args: argparse.Namespace, config: PipelineConfig) -> int:
    """Handle the 'significance' command - Gamma test of minimal PMI per pair."""
    try:
        pipeline = Pipeline(config)
        result = pipeline.significance()
        artifacts = pipeline.write_significance(result)
        print_section_header(f"Significance at alpha={config.analysis.alpha:g}")
        print_significance(result)
        _finish(pipeline, artifacts)
        return 0
    except Exception as e:
        return _report_error("significance", e)


def cmd_export(args: argparse.Namespace, config: PipelineConfig) -> int:
    """Handle the 'export' command - serialize one network in chosen formats."""
    try:
        requested = args.format or [f.value for f in ExportFormat]
        formats = tuple(ExportFormat.parse(f) for f in requested)
        pipeline = Pipeline(config)
        network = pipeline.network()
        artifacts = pipeline.write_network(network, formats)
        print_section_header(f"Export of {network.label}")
        _finish(pipeline, artifacts)
        return 0
    except Exception as e:
        return _report_error("export", e)


def _parse_blocks(value: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in value.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated sizes, got '{value}'") from None


def _parse_chain(value: str) -> tuple[int, int, int]:
    parts = value.split(",")
    try:
        x, z, y = (int(part) for part in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected SOURCE,MEDIATOR,TARGET, got '{value}'"
        ) from None
    return x, z, y


def _parse_nonlinear(value: str) -> tuple[int, int, str]:
    parts = value.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected X,Y,TRANSFORM, got '{value}'")
    try:
        return int(parts[0]), int(parts[1]), parts[2].strip()
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y,TRANSFORM, got '{value}'") from None


def cmd_synth(args: argparse.Namespace, config: PipelineConfig) -> int:
    """Handle the 'synth' command - generate a market with planted structure.

    Writes prices.csv and sectors.csv (ready for the other commands),
    returns.csv, truth.json and a manifest.
    """
    try:
        blocks = args.blocks if args.blocks else (args.n_tickers,)
        spec = SynthSpec(
            n_tickers=args.n_tickers,
            m_samples=args.m_samples,
            sectors=blocks,
            coupling=args.coupling,
            chains=tuple(args.chain or ()),
            nonlinear_pairs=tuple(args.nonlinear or ()),
            seed=config.synth.seed,
            chain_coupling=args.chain_coupling,
            nonlinear_coupling=args.nonlinear_coupling,
        )
        pipeline = Pipeline(config)
        with pipeline.stage("synth"):
            result = generate(spec)
        out = config.paths.out
        digest = pipeline.digest
        with pipeline.stage("export"):
            written = [
                write_prices(result.prices, out / "prices.csv", digest),
                write_sectors(result.sectors, spec.tickers, out / "sectors.csv", digest),
                write_frame(returns_frame(result.returns), out / "returns.csv", digest),
                write_json(result.truth(), out / "truth.json"),
            ]
        artifacts = {path.name: path for path in written}
        print_section_header(
            f"Synthetic market: {spec.n_tickers} tickers, {spec.m_samples} returns, "
            f"{len(spec.sectors)} sectors"
        )
        _finish(pipeline, artifacts)
        return 0
    except Exception as e:
        return _report_error("synth", e)


def _add_analysis_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--prices", metavar="FILE", help="Price CSV (date column + one per ticker)")
    parser.add_argument("--sectors", metavar="FILE", help="Sector CSV (ticker,sector)")
    parser.add_argument("--out", metavar="DIR", help="Output directory (default: out)")
    parser.add_argument("--cache", metavar="DIR", help="Matrix cache (default: <out>/.cache)")
    parser.add_argument("--measure", help="Similarity measure 1-6 or its tag (default: 4)")
    parser.add_argument(
        "--topology", choices=["mst", "pmfg"], help="Filtered topology (default: mst)"
    )
    parser.add_argument(
        "--estimator", choices=["ml", "sg"], help="Entropy estimator (default: ml)"
    )
    parser.add_argument(
        "--bins", type=int, metavar="K", help="Rank states per series (default: 4)"
    )
    parser.add_argument(
        "--alpha", type=float, metavar="A", help="Significance level (default: 0.05)"
    )
    parser.add_argument(
        "--alphabet",
        choices=["joint", "per-axis"],
        help="Alphabet convention of the SG prior (default: joint)",
    )
    parser.add_argument(
        "--seed", type=int, metavar="S", help="Synthetic generator seed (default: 0)"
    )


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser for the CLI.

    Returns:
        Configured ArgumentParser
    """
    parser = argparse.ArgumentParser(
        prog="pminet",
        description="Stock dependency networks from partial mutual information",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Generate a synthetic market with three sectors
  pminet synth --n-tickers 12 --m-samples 1000 --blocks 4,4,4 --coupling 0.4 --out data

  # Planar graph of measure 4 with all artifacts
  pminet run --prices data/prices.csv --sectors data/sectors.csv --topology pmfg

  # Compare all twelve networks
  pminet compare --prices data/prices.csv --sectors data/sectors.csv

  # Use a config file
  pminet --config study.env significance --alpha 0.01
        """,
    )

    parser.add_argument(
        "--config", type=str, metavar="FILE", help="Path to a KEY=value config file"
    )
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Logging level (default: INFO, or LOG_LEVEL)",
    )
    parser.add_argument(
        "--log-format", choices=["json", "text"], help="Log format (default: text, or LOG_FORMAT)"
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    commands = {
        "run": "Run the full pipeline for one measure and topology",
        "returns": "Write log returns",
        "discretize": "Write rank states",
        "matrix": "Write one similarity or influence matrix",
        "network": "Build one network and write its edge list",
        "metrics": "Sector ratio and clustering of one network",
        "compare": "Compare all twelve networks",
        "significance": "Test minimal partial mutual information per pair",
    }
    for name, help_text in commands.items():
        _add_analysis_arguments(subparsers.add_parser(name, help=help_text))

    export_parser = subparsers.add_parser("export", help="Export one network")
    _add_analysis_arguments(export_parser)
    export_parser.add_argument(
        "--format",
        action="append",
        choices=[f.value for f in ExportFormat],
        help="Output format, repeatable (default: all)",
    )

    synth_parser = subparsers.add_parser("synth", help="Generate a synthetic market")
    _add_analysis_arguments(synth_parser)
    synth_parser.add_argument("--n-tickers", type=int, required=True, help="Number of tickers")
    synth_parser.add_argument(
        "--m-samples", type=int, required=True, help="Number of returns per ticker"
    )
    synth_parser.add_argument(
        "--blocks",
        type=_parse_blocks,
        help="Sector block sizes, e.g. 10,10,10 (default: one block)",
    )
    synth_parser.add_argument(
        "--coupling", type=float, default=0.0, help="Variance share of the sector factor"
    )
    synth_parser.add_argument(
        "--chain",
        type=_parse_chain,
        action="append",
        metavar="X,Z,Y",
        help="Mediation chain by ticker index, repeatable",
    )
    synth_parser.add_argument(
        "--nonlinear",
        type=_parse_nonlinear,
        action="append",
        metavar="X,Y,TRANSFORM",
        help="Nonlinear pair with transform square or abs, repeatable",
    )
    synth_parser.add_argument(
        "--chain-coupling", type=float, default=0.95, help="Coupling along chains"
    )
    synth_parser.add_argument(
        "--nonlinear-coupling", type=float, default=0.9, help="Coupling of nonlinear pairs"
    )

    return parser


def _overrides(args: argparse.Namespace) -> dict[str, object | None]:
    flags = {
        "PRICES": "prices",
        "SECTORS": "sectors",
        "OUT": "out",
        "CACHE": "cache",
        "MEASURE": "measure",
        "TOPOLOGY": "topology",
        "ESTIMATOR": "estimator",
        "BINS": "bins",
        "ALPHA": "alpha",
        "ALPHABET": "alphabet",
        "SEED": "seed",
        "LOG_LEVEL": "log_level",
        "LOG_FORMAT": "log_format",
    }
    return {key: getattr(args, attr, None) for key, attr in flags.items()}


def main(argv: list[str] | None = None) -> int:
    """Main entry point for the CLI.

    Args:
        argv: Command-line arguments (defaults to sys.argv)

    Returns:
        Exit code (0 for success, non-zero for error)
    """
    parser = create_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return 1

    try:
        config = load_config(args.config, _overrides(args))
    except Exception as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return 1

    configure_logging(config.logging)
    logger.debug("command_started", command=args.command, config_digest=config.digest()[:12])

    # Dispatch to command handler
    if args.command == "run":
        return cmd_run(args, config)
    elif args.command == "returns":
        return cmd_returns(args, config)
    elif args.command == "discretize":
        return cmd_discretize(args, config)
    elif args.command == "matrix":
        return cmd_matrix(args, config)
    elif args.command == "network":
        return cmd_network(args, config)
    elif args.command == "metrics":
        return cmd_metrics(args, config)
    elif args.command == "compare":
        return cmd_compare(args, config)
    elif args.command == "significance":
        return cmd_significance(args, config)
    elif args.command == "export":
        return cmd_export(args, config)
    elif args.command == "synth":
        return cmd_synth(args, config)
    else:
        parser.print_help()
        return 1
