"""Configuration management for pminet.

Settings come from four places, highest precedence first: command-line
flags, a key-value config file, the process environment (logging keys only)
and built-in defaults. The config file uses the same ``KEY=value`` syntax as
a ``.env`` file and is read with python-dotenv. No environment variable is
required.
"""

import hashlib
import json
import logging
import os
import sys
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import structlog
from dotenv import dotenv_values, load_dotenv

from pminet.infotheory import AlphabetConvention, Estimator
from pminet.ingest import DEFAULT_BINS
from pminet.netbuild import Topology
from pminet.similarity import Measure

CONFIG_KEYS = (
    "PRICES",
    "SECTORS",
    "OUT",
    "CACHE",
    "MEASURE",
    "TOPOLOGY",
    "ESTIMATOR",
    "BINS",
    "ALPHA",
    "ALPHABET",
    "SEED",
    "LOG_LEVEL",
    "LOG_FORMAT",
)

# Keys that may also come from the process environment
ENVIRONMENT_KEYS = ("LOG_LEVEL", "LOG_FORMAT")

DEFAULTS: dict[str, str] = {
    "OUT": "out",
    "MEASURE": "4",
    "TOPOLOGY": "mst",
    "ESTIMATOR": "ml",
    "BINS": str(DEFAULT_BINS),
    "ALPHA": "0.05",
    "ALPHABET": "joint",
    "SEED": "0",
    "LOG_LEVEL": "INFO",
    "LOG_FORMAT": "text",
}


@dataclass(frozen=True)
class AnalysisConfig:
    """Settings that determine what is computed.

    Attributes:
        measure: Similarity measure 1-6
        topology: Tree (mst) or planar (pmfg)
        estimator: Entropy estimator, ml or sg
        bins: Number of rank states per series
        alpha: Significance level of the Gamma threshold
        convention: Alphabet convention of the SG prior

    Example:
        >>> config = AnalysisConfig(measure=Measure.PMI_MIN_DIST, topology=Topology.PLANAR)
    """

    measure: Measure = Measure.PMI_MIN_DIST
    topology: Topology = Topology.TREE
    estimator: Estimator = Estimator.ML
    bins: int = DEFAULT_BINS
    alpha: float = 0.05
    convention: AlphabetConvention = AlphabetConvention.JOINT

    def __post_init__(self) -> None:
        """Validate analysis settings.

        Raises:
            ValueError: If bins, alpha or topology is invalid
        """
        if self.bins < 2:
            raise ValueError(f"bins must be >= 2, got {self.bins}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.topology is Topology.UNRESTRICTED:
            raise ValueError("topology must be mst or pmfg")


@dataclass(frozen=True)
class PathsConfig:
    """Input and output locations.

    Attributes:
        prices: Price CSV, required by every stage that reads market data
        sectors: Optional sector CSV
        out: Output directory
        cache: Matrix cache directory; ``<out>/.cache`` when omitted
    """

    prices: Path | None = None
    sectors: Path | None = None
    out: Path = Path("out")
    cache: Path | None = None

    @property
    def cache_dir(self) -> Path:
        """Effective cache directory."""
        return self.cache if self.cache is not None else self.out / ".cache"


@dataclass(frozen=True)
class SynthConfig:
    """Settings of the synthetic market generator.

    Attributes:
        seed: Seed of the generator
    """

    seed: int = 0

    def __post_init__(self) -> None:
        """Validate the seed.

        Raises:
            ValueError: If seed is negative
        """
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")


@dataclass(frozen=True)
class LoggingConfig:
    """Configuration for logging.

    Attributes:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_format: Log format (json, text)

    Example:
        >>> config = LoggingConfig(log_level="INFO", log_format="json")
    """

    log_level: str = "INFO"
    log_format: str = "text"

    def __post_init__(self) -> None:
        """Validate logging configuration after initialization.

        Raises:
            ValueError: If log_level or log_format is invalid
        """
        valid_levels = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        if self.log_level.upper() not in valid_levels:
            raise ValueError(f"log_level must be one of {valid_levels}, got {self.log_level}")

        valid_formats = {"json", "text"}
        if self.log_format.lower() not in valid_formats:
            raise ValueError(f"log_format must be one of {valid_formats}, got {self.log_format}")


@dataclass(frozen=True)
class PipelineConfig:
    """Complete configuration of one pminet invocation.

    Attributes:
        analysis: What to compute
        paths: Where inputs and outputs live
        synth: Synthetic generator settings
        logging: Logging configuration

    Example:
        >>> config = load_config(overrides={"MEASURE": "2", "PRICES": "prices.csv"})
        >>> config.analysis.measure
        <Measure.MI_DIST: 2>
    """

    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    paths: PathsConfig = field(default_factory=PathsConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)

    def to_dict(self) -> dict[str, Any]:
        """Plain representation used in the manifest."""
        return {
            "measure": self.analysis.measure.value,
            "topology": self.analysis.topology.builder_tag,
            "estimator": self.analysis.estimator.value,
            "bins": self.analysis.bins,
            "alpha": self.analysis.alpha,
            "alphabet": self.analysis.convention.value,
            "seed": self.synth.seed,
            "prices": str(self.paths.prices) if self.paths.prices else None,
            "sectors": str(self.paths.sectors) if self.paths.sectors else None,
            "out": str(self.paths.out),
            "cache": str(self.paths.cache_dir),
        }

    def digest(self, inputs: Mapping[str, str] | None = None) -> str:
        """sha256 of every setting and input that can change an artifact.

        Input files enter through their content digests, not their paths.
        Output and cache locations and logging settings are left out, so
        moving the output directory or raising the log level keeps the digest.

        Args:
            inputs: Content digest per input role (``prices``, ``sectors``)

        Returns:
            Hex sha256 digest
        """
        excluded = ("out", "cache", "prices", "sectors")
        relevant: dict[str, Any] = {k: v for k, v in self.to_dict().items() if k not in excluded}
        relevant["inputs"] = dict(sorted((inputs or {}).items()))
        canonical = json.dumps(relevant, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{key} must be an integer, got '{value}'") from None


def _parse_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ValueError(f"{key} must be a number, got '{value}'") from None


def _optional_path(value: str | None) -> Path | None:
    return Path(value) if value else None


def load_config(
    config_file: str | Path | None = None,
    overrides: Mapping[str, object | None] | None = None,
) -> PipelineConfig:
    """Load configuration from a config file, the environment and overrides.

    Args:
        config_file: Optional ``KEY=value`` file; keys as in ``CONFIG_KEYS``
        overrides: Values from command-line flags, keyed like the file;
            ``None`` values are ignored

    Returns:
        Complete PipelineConfig

    Raises:
        ValueError: If the file is missing, a key is unknown or a value is invalid

    Config Keys:
        - PRICES, SECTORS: input CSV paths
        - OUT, CACHE: output and cache directories (default: out, <out>/.cache)
        - MEASURE: 1-6 or a measure tag (default: 4)
        - TOPOLOGY: mst or pmfg (default: mst)
        - ESTIMATOR: ml or sg (default: ml)
        - BINS: rank states per series (default: 4)
        - ALPHA: significance level (default: 0.05)
        - ALPHABET: joint or per-axis (default: joint)
        - SEED: synthetic generator seed (default: 0)
        - LOG_LEVEL, LOG_FORMAT: also read from the environment (default: INFO, text)

    Example:
        >>> config = load_config("study.env", overrides={"TOPOLOGY": "pmfg"})
    """
    # .env in the working directory may set the logging keys
    load_dotenv()

    values: dict[str, str] = dict(DEFAULTS)
    for key in ENVIRONMENT_KEYS:
        env_value = os.getenv(key)
        if env_value:
            values[key] = env_value

    if config_file is not None:
        path = Path(config_file)
        if not path.is_file():
            raise ValueError(f"Config file not found: {path}")
        for key, value in dotenv_values(path).items():
            if key not in CONFIG_KEYS:
                raise ValueError(f"Unknown config key '{key}' in {path}")
            if value is not None and value != "":
                values[key] = value

    for key, value in (overrides or {}).items():
        if key not in CONFIG_KEYS:
            raise ValueError(f"Unknown config key '{key}'")
        if value is not None:
            values[key] = str(value)

    analysis = AnalysisConfig(
        measure=Measure.parse(values["MEASURE"]),
        topology=Topology.parse(values["TOPOLOGY"]),
        estimator=Estimator(values["ESTIMATOR"].strip().lower()),
        bins=_parse_int("BINS", values["BINS"]),
        alpha=_parse_float("ALPHA", values["ALPHA"]),
        convention=AlphabetConvention(values["ALPHABET"].strip().lower()),
    )
    paths = PathsConfig(
        prices=_optional_path(values.get("PRICES")),
        sectors=_optional_path(values.get("SECTORS")),
        out=Path(values["OUT"]),
        cache=_optional_path(values.get("CACHE")),
    )
    synth = SynthConfig(seed=_parse_int("SEED", values["SEED"]))
    logging_config = LoggingConfig(
        log_level=values["LOG_LEVEL"].upper(),
        log_format=values["LOG_FORMAT"].lower(),
    )
    return PipelineConfig(analysis=analysis, paths=paths, synth=synth, logging=logging_config)


def configure_logging(logging_config: LoggingConfig) -> None:
    """Configure structlog with the given logging configuration.

    Logs go to stderr so that tables printed on stdout stay clean.

    Args:
        logging_config: Logging configuration to apply

    Example:
        >>> config = load_config()
        >>> configure_logging(config.logging)
    """
    log_level = getattr(logging, logging_config.log_level.upper())

    if logging_config.log_format == "json":
        renderer: structlog.types.Processor = structlog.processors.JSONRenderer()
        timestamper = structlog.processors.TimeStamper(fmt="iso")
    else:
        renderer = structlog.dev.ConsoleRenderer()
        timestamper = structlog.processors.TimeStamper(fmt="%Y-%m-%d %H:%M:%S")

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            timestamper,
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            renderer,
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    # force=True so repeated CLI invocations in one process pick up the new level
    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=log_level,
        force=True,
    )
    logging.root.setLevel(log_level)
