"""Staged analysis pipeline.

The stages run in a fixed order, each feeding the next:

1. load: read prices (and sectors) and record input digests
2. returns: log returns of every retained ticker
3. states: rank-bin discretization
4. matrix: similarity or influence matrix of one measure
5. network: tree or planar graph built from the matrix
6. metrics: sector ratio, clustering and Markov centrality

A :class:`Pipeline` memoizes every stage result, so the ``compare`` command
can build all twelve networks while loading the data once and estimating
the PMI tensor once. Stage failures are re-raised as :class:`StageError`
naming the stage.
"""

import time
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
import structlog
from numpy.typing import NDArray

from pminet import __version__
from pminet.config import PipelineConfig
from pminet.infotheory import StateCodes, pmi_tensor
from pminet.ingest import (
    DiscreteSeries,
    PriceLoadResult,
    ReturnSeries,
    SectorMap,
    discretize_quartiles,
    load_prices,
    load_sectors,
    log_returns,
    returns_frame,
    states_frame,
)
from pminet.netbuild import Network, Topology, build_influence_graph, build_mst, build_pmfg
from pminet.netmetrics import (
    CentralityComparison,
    CentralityVector,
    ComparisonTable,
    DisconnectedNetworkError,
    NetworkReport,
    compare_all,
    comparison_table,
    markov_centrality,
    network_report,
)
from pminet.pipeline.artifacts import (
    ExportFormat,
    export_graph,
    file_digest,
    write_boolean_matrix,
    write_frame,
    write_json,
    write_matrix,
)
from pminet.pipeline.cache import MatrixCache
from pminet.similarity import (
    GammaParams,
    InfluenceMatrix,
    Measure,
    SimilarityMatrix,
    build_matrix,
    gamma_threshold,
    min_pmi_matrix,
    significance_mask,
)

logger = structlog.get_logger(__name__)

TOOL_NAME = "pminet"
PMI_TENSOR_TAG = "pmi-tensor"
MANIFEST_NAME = "manifest.json"


class StageError(Exception):
    """Raised when a pipeline stage fails.

    Attributes:
        stage: Name of the failing stage
        cause: The underlying exception
    """

    def __init__(self, stage: str, cause: BaseException) -> None:
        self.stage = stage
        self.cause = cause
        super().__init__(str(cause))


@dataclass
class StageRecord:
    """Timing and cache outcome of one stage run."""

    seconds: float = 0.0
    cache_hit: bool | None = None


@dataclass
class RunResult:
    """Artifacts written by a pipeline command.

    Attributes:
        artifacts: Written files by name
        manifest: Path of the manifest
    """

    artifacts: dict[str, Path] = field(default_factory=lambda: {})
    manifest: Path | None = None


@dataclass(frozen=True, eq=False)
class SignificanceResult:
    """Outcome of the Gamma significance test on minimal PMI values.

    Attributes:
        tickers: Row and column order
        params: Null distribution parameters
        threshold: PMI value a pair must exceed
        min_pmi: min over Z of I(X,Y|Z) per pair
        mask: True where the minimal PMI is significant
    """

    tickers: tuple[str, ...]
    params: GammaParams
    threshold: float
    min_pmi: NDArray[np.float64]
    mask: NDArray[np.bool_]


def network_label(measure: Measure, topology: Topology) -> str:
    """Identifier of a network, e.g. ``pmi-min-dist/pmfg``."""
    return f"{measure.tag}/{topology.builder_tag}"


class Pipeline:
    """Memoizing runner of the analysis stages for one configuration.

    Example:
        >>> pipeline = Pipeline(load_config(overrides={"PRICES": "prices.csv"}))
        >>> tree = pipeline.network()
        >>> pipeline.write_manifest({})
    """

    def __init__(self, config: PipelineConfig, cache: MatrixCache | None = None) -> None:
        self.config = config
        self.cache = cache if cache is not None else MatrixCache(config.paths.cache_dir)
        self.records: dict[str, StageRecord] = {}
        self.input_digests: dict[str, str] = {}
        self._input_roles: dict[str, str] = {}
        self.log = logger.bind(config_digest=self.digest[:12])
        self._loaded: PriceLoadResult | None = None
        self._sectors: SectorMap | None = None
        self._returns: list[ReturnSeries] | None = None
        self._states: list[DiscreteSeries] | None = None
        self._tensor: NDArray[np.float64] | None = None
        self._matrices: dict[Measure, SimilarityMatrix | InfluenceMatrix] = {}
        self._networks: dict[tuple[Measure, Topology], Network] = {}

    @contextmanager
    def stage(self, name: str) -> Iterator[StageRecord]:
        """Time a stage and tag any failure inside it with the stage name."""
        record = self.records.setdefault(name, StageRecord())
        started = time.perf_counter()
        self.log.debug("stage_started", stage=name)
        try:
            yield record
        except StageError:
            raise
        except Exception as e:
            self.log.error("stage_failed", stage=name, error=str(e))
            raise StageError(name, e) from e
        finally:
            record.seconds += time.perf_counter() - started
        self.log.debug("stage_finished", stage=name, seconds=round(record.seconds, 6))

    # -- load ---------------------------------------------------------------

    def load(self) -> PriceLoadResult:
        """Read the price file (and the sector file, if configured)."""
        if self._loaded is not None:
            return self._loaded
        with self.stage("load"):
            prices_path = self.config.paths.prices
            if prices_path is None:
                raise ValueError("no price file configured (set PRICES or --prices)")
            loaded = load_prices(prices_path)
            self._record_input("prices", Path(prices_path))
            sectors_path = self.config.paths.sectors
            if sectors_path is not None:
                self._sectors = load_sectors(sectors_path)
                self._sectors.require(loaded.tickers)
                self._record_input("sectors", Path(sectors_path))
            if len(loaded.series) < 2:
                usable = len(loaded.series)
                raise ValueError(f"at least 2 usable tickers are required, got {usable}")
            self.log = logger.bind(config_digest=self.digest[:12])
            self.log.info(
                "prices_loaded",
                tickers=len(loaded.series),
                sectors=len(self._sectors.labels()) if self._sectors else 0,
                excluded=len(loaded.exclusions),
                days=len(loaded.dates),
            )
            self._loaded = loaded
        return loaded

    def _record_input(self, role: str, path: Path) -> None:
        digest = file_digest(path)
        self.input_digests[str(path)] = digest
        self._input_roles[role] = digest

    @property
    def digest(self) -> str:
        """Config digest over the settings and the contents of the loaded inputs."""
        return self.config.digest(self._input_roles)

    def sectors(self) -> SectorMap | None:
        """Sector map, if one is configured."""
        self.load()
        return self._sectors

    @property
    def input_digest(self) -> str:
        """Digest of the price input, the root of every cache key."""
        self.load()
        return self._input_roles["prices"]

    # -- returns and states -------------------------------------------------

    def returns(self) -> list[ReturnSeries]:
        """Log returns of every retained ticker."""
        if self._returns is not None:
            return self._returns
        loaded = self.load()
        with self.stage("returns"):
            returns = [log_returns(series) for series in loaded.series]
        self._returns = returns
        return returns

    def states(self) -> list[DiscreteSeries]:
        """Rank-bin states of every ticker."""
        if self._states is not None:
            return self._states
        returns = self.returns()
        with self.stage("states"):
            bins = self.config.analysis.bins
            states = [discretize_quartiles(series, bins) for series in returns]
        self._states = states
        return states

    def codes(self) -> StateCodes:
        """States packed for the batched estimators."""
        return StateCodes.from_series(self.states())

    # -- matrices -----------------------------------------------------------

    def _cache_key(self, tag: str) -> str:
        analysis = self.config.analysis
        return self.cache.key(
            self.input_digest,
            tag,
            analysis.estimator.value,
            analysis.bins,
            analysis.convention.value,
        )

    def pmi(self) -> NDArray[np.float64]:
        """I(Xi,Xj|Xk) tensor shared by measures 4 and 6, cached on disk."""
        if self._tensor is not None:
            return self._tensor
        codes = self.codes()
        with self.stage(PMI_TENSOR_TAG) as record:
            key = self._cache_key(PMI_TENSOR_TAG)
            tensor = self.cache.load(key)
            record.cache_hit = tensor is not None
            if tensor is None or tensor.shape != (codes.n, codes.n, codes.n):
                analysis = self.config.analysis
                tensor = pmi_tensor(codes, analysis.estimator, analysis.convention)
                self.cache.save(key, tensor)
                record.cache_hit = False
            self._tensor = tensor
        return tensor

    def matrix(self, measure: Measure | None = None) -> SimilarityMatrix | InfluenceMatrix:
        """Similarity or influence matrix of one measure (the configured one by default)."""
        measure = measure or self.config.analysis.measure
        if measure in self._matrices:
            return self._matrices[measure]
        returns = None if measure.uses_information else self.returns()
        codes = self.codes() if measure.uses_information else None
        tensor = self.pmi() if measure in (Measure.PMI_MIN_DIST, Measure.MI_INFLUENCE) else None
        analysis = self.config.analysis
        with self.stage("matrix"):
            result = build_matrix(
                measure,
                returns=returns,
                states=codes,
                estimator=analysis.estimator,
                convention=analysis.convention,
                tensor=tensor,
            )
            self._matrices[measure] = result
        return result

    # -- networks and metrics -----------------------------------------------

    def network(self, measure: Measure | None = None, topology: Topology | None = None) -> Network:
        """Tree or planar network of one measure."""
        measure = measure or self.config.analysis.measure
        topology = topology or self.config.analysis.topology
        if (measure, topology) in self._networks:
            return self._networks[(measure, topology)]
        matrix = self.matrix(measure)
        sectors = self.sectors()
        label = network_label(measure, topology)
        with self.stage("network"):
            if isinstance(matrix, InfluenceMatrix):
                network = build_influence_graph(matrix, topology, sectors, label=label)
            elif topology is Topology.TREE:
                network = build_mst(matrix, sectors, label=label)
            else:
                network = build_pmfg(matrix, sectors, label=label)
            self._networks[(measure, topology)] = network
        return network

    def all_networks(self) -> tuple[list[Network], list[Network]]:
        """Trees and planar graphs of all six measures, measure 1 first."""
        trees = [self.network(m, Topology.TREE) for m in Measure]
        planar = [self.network(m, Topology.PLANAR) for m in Measure]
        return trees, planar

    def centrality(self, network: Network) -> CentralityVector | None:
        """Markov centrality, or None (with a warning) for a disconnected network."""
        with self.stage("metrics"):
            try:
                return markov_centrality(network)
            except DisconnectedNetworkError as e:
                self.log.warning("centrality_skipped", label=network.label, reason=str(e))
                return None

    def report(self, network: Network) -> NetworkReport:
        """Sector ratio and clustering of a network."""
        sectors = self.sectors()
        with self.stage("metrics"):
            return network_report(network, sectors)

    # -- study-wide analyses --------------------------------------------------

    def compare(self) -> tuple[CentralityComparison, CentralityComparison, ComparisonTable | None]:
        """Centrality correlations of all twelve networks, plus the table given sectors."""
        trees, planar = self.all_networks()
        sectors = self.sectors()
        with self.stage("metrics"):
            tree_cmp, planar_cmp = compare_all([*trees, *planar])
            table = (
                comparison_table(trees, planar, sectors, [str(m.value) for m in Measure])
                if sectors is not None
                else None
            )
        return tree_cmp, planar_cmp, table

    def significance(self) -> SignificanceResult:
        """Minimal PMI of every pair tested against the Gamma threshold."""
        tensor = self.pmi()
        codes = self.codes()
        analysis = self.config.analysis
        with self.stage("significance"):
            bins = analysis.bins
            params = GammaParams.from_bins(codes.m, bins, bins, bins)
            minimum = min_pmi_matrix(tensor)
            mask = significance_mask(minimum, params, analysis.alpha)
            threshold = gamma_threshold(params, analysis.alpha)
        return SignificanceResult(codes.tickers, params, threshold, minimum, mask)

    # -- artifacts ----------------------------------------------------------

    @property
    def out(self) -> Path:
        return self.config.paths.out

    def write_returns(self) -> Path:
        """returns.csv: date-indexed log returns."""
        frame = returns_frame(self.returns())
        with self.stage("export"):
            return write_frame(frame, self.out / "returns.csv", self.digest)

    def write_states(self) -> Path:
        """states.csv: date-indexed rank states."""
        frame = states_frame(self.states())
        with self.stage("export"):
            return write_frame(frame, self.out / "states.csv", self.digest)

    def write_matrix(self, measure: Measure | None = None) -> Path:
        """matrix-<measure>.csv."""
        matrix = self.matrix(measure)
        with self.stage("export"):
            return write_matrix(matrix, self.out / f"matrix-{matrix.measure.tag}.csv", self.digest)

    def write_network(
        self,
        network: Network,
        formats: tuple[ExportFormat, ...] = tuple(ExportFormat),
    ) -> dict[str, Path]:
        """Export a network in every requested format."""
        stem = "network-" + network.label.replace("/", "-")
        centrality = self.centrality(network)
        written: dict[str, Path] = {}
        with self.stage("export"):
            for fmt in formats:
                path = self.out / f"{stem}{fmt.suffix}"
                written[path.name] = export_graph(network, fmt, path, self.digest, centrality)
        return written

    def write_report(self, network: Network) -> Path:
        """metrics-<label>.csv: one row of network-level metrics."""
        report = self.report(network)
        frame = pd.DataFrame.from_records(
            [
                {
                    "network": report.label,
                    "nodes": report.node_count,
                    "edges": report.edge_count,
                    "sector_ratio": report.sector_ratio,
                    "clustering": report.clustering,
                }
            ]
        )
        path = self.out / f"metrics-{network.label.replace('/', '-')}.csv"
        with self.stage("export"):
            return write_frame(frame, path, self.digest, index=False)

    def write_comparison(
        self,
        tree_cmp: CentralityComparison,
        planar_cmp: CentralityComparison,
        table: ComparisonTable | None,
    ) -> dict[str, Path]:
        """Centrality-correlation CSVs for trees and planar graphs, and the comparison table."""
        written: dict[str, Path] = {}
        with self.stage("export"):
            for name, comparison in (("trees", tree_cmp), ("planar", planar_cmp)):
                frame = comparison.to_frame()
                frame.index.name = "network"
                target = self.out / f"centrality-correlation-{name}.csv"
                path = write_frame(frame, target, self.digest)
                written[path.name] = path
            if table is not None:
                path = write_frame(
                    table.to_frame(), self.out / "comparison.csv", self.digest, index=False
                )
                written[path.name] = path
        return written

    def write_significance(self, result: SignificanceResult) -> dict[str, Path]:
        """min-pmi.csv and significance.csv (1 where the minimal PMI is significant)."""
        written: dict[str, Path] = {}
        with self.stage("export"):
            frame = pd.DataFrame(
                result.min_pmi, index=list(result.tickers), columns=list(result.tickers)
            )
            frame.index.name = "ticker"
            path = write_frame(frame, self.out / "min-pmi.csv", self.digest)
            written[path.name] = path
            path = write_boolean_matrix(
                result.mask, result.tickers, self.out / "significance.csv", self.digest
            )
            written[path.name] = path
        return written

    def manifest(self, artifacts: dict[str, Path]) -> dict[str, Any]:
        """Reproducibility record of this run."""
        return {
            "tool": TOOL_NAME,
            "version": __version__,
            "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "config": self.config.to_dict(),
            "config_digest": self.digest,
            "inputs": dict(sorted(self.input_digests.items())),
            "artifacts": {name: file_digest(path) for name, path in sorted(artifacts.items())},
            "exclusions": [
                {"ticker": e.ticker, "reason": e.reason, "row": e.row}
                for e in (self._loaded.exclusions if self._loaded else [])
            ],
            "stages": {
                name: {"seconds": round(record.seconds, 6), "cache_hit": record.cache_hit}
                for name, record in self.records.items()
            },
        }

    def write_manifest(self, artifacts: dict[str, Path]) -> Path:
        """Write manifest.json next to the artifacts."""
        path = write_json(self.manifest(artifacts), self.out / MANIFEST_NAME)
        self.log.info("manifest_written", path=str(path), artifacts=len(artifacts))
        return path


def run_pipeline(config: PipelineConfig, cache: MatrixCache | None = None) -> RunResult:
    """Run every stage for the configured measure and topology and write all artifacts.

    Writes returns.csv, states.csv, the matrix CSV, the network as edge list,
    GraphML and DOT, the metrics CSV and manifest.json under the output
    directory.

    Args:
        config: Pipeline configuration with a price file
        cache: Optional matrix cache (default: the configured cache directory)

    Returns:
        RunResult listing the written artifacts

    Raises:
        StageError: If any stage fails; ``stage`` names it
    """
    pipeline = Pipeline(config, cache)
    artifacts: dict[str, Path] = {}
    for path in (pipeline.write_returns(), pipeline.write_states(), pipeline.write_matrix()):
        artifacts[path.name] = path
    network = pipeline.network()
    artifacts.update(pipeline.write_network(network))
    report_path = pipeline.write_report(network)
    artifacts[report_path.name] = report_path
    manifest = pipeline.write_manifest(artifacts)
    return RunResult(artifacts=artifacts, manifest=manifest)
