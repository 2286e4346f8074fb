"""Tests for configuration module."""

from pathlib import Path

import pytest

from pminet.config import (
    AnalysisConfig,
    LoggingConfig,
    PathsConfig,
    PipelineConfig,
    SynthConfig,
    load_config,
)
from pminet.infotheory import AlphabetConvention, Estimator
from pminet.netbuild import Topology
from pminet.similarity import Measure


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Keep the process environment and any .env file out of these tests."""
    monkeypatch.delenv("LOG_LEVEL", raising=False)
    monkeypatch.delenv("LOG_FORMAT", raising=False)
    monkeypatch.setattr("pminet.config.load_dotenv", lambda: False)


class TestAnalysisConfig:
    """Tests for AnalysisConfig."""

    def test_defaults(self):
        """Defaults are measure 4, MST, plug-in estimator and quartiles."""
        config = AnalysisConfig()

        assert config.measure is Measure.PMI_MIN_DIST
        assert config.topology is Topology.TREE
        assert config.estimator is Estimator.ML
        assert config.bins == 4
        assert config.alpha == 0.05
        assert config.convention is AlphabetConvention.JOINT

    def test_is_immutable(self):
        """AnalysisConfig instances are immutable (frozen)."""
        config = AnalysisConfig()

        with pytest.raises(AttributeError):
            config.bins = 8  # type: ignore

    def test_validates_bins(self):
        """AnalysisConfig raises ValueError for fewer than two bins."""
        with pytest.raises(ValueError, match="bins must be >= 2"):
            AnalysisConfig(bins=1)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.5])
    def test_validates_alpha(self, alpha):
        """AnalysisConfig raises ValueError for alpha outside (0, 1)."""
        with pytest.raises(ValueError, match=r"alpha must be in \(0, 1\)"):
            AnalysisConfig(alpha=alpha)

    def test_validates_topology(self):
        """Only trees and planar graphs can be requested."""
        with pytest.raises(ValueError, match="topology must be mst or pmfg"):
            AnalysisConfig(topology=Topology.UNRESTRICTED)


class TestPathsConfig:
    """Tests for PathsConfig."""

    def test_cache_defaults_under_out(self):
        """The cache lives under the output directory unless set."""
        assert PathsConfig(out=Path("results")).cache_dir == Path("results/.cache")
        assert PathsConfig(cache=Path("/tmp/c")).cache_dir == Path("/tmp/c")


class TestSynthConfig:
    """Tests for SynthConfig."""

    def test_validates_seed(self):
        """SynthConfig raises ValueError for a negative seed."""
        with pytest.raises(ValueError, match="seed must be >= 0"):
            SynthConfig(seed=-1)


class TestLoggingConfig:
    """Tests for LoggingConfig."""

    def test_validates_invalid_log_level(self):
        """LoggingConfig raises ValueError for invalid log level."""
        with pytest.raises(ValueError, match="log_level must be one of"):
            LoggingConfig(log_level="VERBOSE")

    def test_validates_invalid_log_format(self):
        """LoggingConfig raises ValueError for invalid log format."""
        with pytest.raises(ValueError, match="log_format must be one of"):
            LoggingConfig(log_format="xml")

    def test_normalizes_case(self):
        """LoggingConfig accepts lowercase levels."""
        assert LoggingConfig(log_level="debug").log_level == "debug"


class TestPipelineConfig:
    """Tests for PipelineConfig."""

    def test_to_dict(self):
        """The plain form uses numbers and tags."""
        config = PipelineConfig(
            analysis=AnalysisConfig(measure=Measure.MI_DIST, topology=Topology.PLANAR),
            paths=PathsConfig(prices=Path("p.csv"), out=Path("o")),
        )

        data = config.to_dict()

        assert data["measure"] == 2
        assert data["topology"] == "pmfg"
        assert data["prices"] == "p.csv"
        assert data["sectors"] is None
        assert data["cache"] == str(Path("o/.cache"))

    def test_digest_ignores_locations_and_logging(self):
        """Output, cache and logging settings leave the digest unchanged."""
        base = PipelineConfig(paths=PathsConfig(prices=Path("p.csv")))
        moved = PipelineConfig(
            paths=PathsConfig(prices=Path("p.csv"), out=Path("elsewhere"), cache=Path("c")),
            logging=LoggingConfig(log_level="DEBUG", log_format="json"),
        )

        assert base.digest() == moved.digest()
        assert len(base.digest()) == 64

    def test_digest_tracks_analysis(self):
        """Any analysis setting changes the digest."""
        base = PipelineConfig()

        assert base.digest() != PipelineConfig(analysis=AnalysisConfig(bins=5)).digest()
        assert base.digest() != PipelineConfig(synth=SynthConfig(seed=1)).digest()

    def test_digest_tracks_input_contents_not_paths(self):
        """Input content digests change the digest; renaming an input does not."""
        here = PipelineConfig(paths=PathsConfig(prices=Path("p.csv")))
        there = PipelineConfig(paths=PathsConfig(prices=Path("data/q.csv")))

        assert here.digest({"prices": "aa"}) == there.digest({"prices": "aa"})
        assert here.digest({"prices": "aa"}) != here.digest({"prices": "bb"})
        assert here.digest({"prices": "aa"}) != here.digest({"prices": "aa", "sectors": "cc"})
        assert here.digest() != here.digest({"prices": "aa"})


class TestLoadConfig:
    """Tests for load_config function."""

    def test_load_config_with_defaults(self):
        """load_config needs no file, environment or overrides."""
        config = load_config()

        assert config.analysis == AnalysisConfig()
        assert config.paths.prices is None
        assert config.paths.out == Path("out")
        assert config.synth.seed == 0
        assert config.logging == LoggingConfig()

    def test_load_config_from_file(self, write_text):
        """Keys in the config file are applied."""
        path = write_text(
            "study.env",
            "# study settings\nPRICES=data/prices.csv\nMEASURE=pcorr-min-dist\n"
            "TOPOLOGY=pmfg\nESTIMATOR=sg\nBINS=3\nALPHA=0.01\nALPHABET=per-axis\nSEED=42\n",
        )

        config = load_config(path)

        assert config.paths.prices == Path("data/prices.csv")
        assert config.analysis.measure is Measure.PCORR_MIN_DIST
        assert config.analysis.topology is Topology.PLANAR
        assert config.analysis.estimator is Estimator.SG
        assert config.analysis.bins == 3
        assert config.analysis.alpha == 0.01
        assert config.analysis.convention is AlphabetConvention.PER_AXIS
        assert config.synth.seed == 42

    def test_overrides_beat_file(self, write_text):
        """Command-line values take precedence; None values are ignored."""
        path = write_text("study.env", "MEASURE=2\nBINS=3\n")

        config = load_config(path, {"MEASURE": "6", "BINS": None})

        assert config.analysis.measure is Measure.MI_INFLUENCE
        assert config.analysis.bins == 3

    def test_logging_from_environment(self, monkeypatch):
        """LOG_LEVEL and LOG_FORMAT may come from the environment."""
        monkeypatch.setenv("LOG_LEVEL", "debug")
        monkeypatch.setenv("LOG_FORMAT", "JSON")

        config = load_config()

        assert config.logging.log_level == "DEBUG"
        assert config.logging.log_format == "json"

    def test_analysis_keys_ignore_environment(self, monkeypatch):
        """Analysis settings are never read from the environment."""
        monkeypatch.setenv("MEASURE", "1")

        assert load_config().analysis.measure is Measure.PMI_MIN_DIST

    def test_missing_file(self, tmp_path):
        """A config file that does not exist is an error."""
        with pytest.raises(ValueError, match="Config file not found"):
            load_config(tmp_path / "absent.env")

    def test_unknown_key_in_file(self, write_text):
        """Unknown keys in the file name the file."""
        path = write_text("study.env", "MESURE=4\n")

        with pytest.raises(ValueError, match="Unknown config key 'MESURE' in"):
            load_config(path)

    def test_unknown_override(self):
        """Unknown override keys are rejected."""
        with pytest.raises(ValueError, match="Unknown config key 'DB_HOST'"):
            load_config(overrides={"DB_HOST": "localhost"})

    def test_invalid_integer(self):
        """BINS must parse as an integer."""
        with pytest.raises(ValueError, match="BINS must be an integer, got 'four'"):
            load_config(overrides={"BINS": "four"})

    def test_invalid_measure(self):
        """An unknown measure is reported."""
        with pytest.raises(ValueError, match="unknown measure '9'"):
            load_config(overrides={"MEASURE": "9"})
