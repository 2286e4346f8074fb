"""Pytest configuration and fixtures for testing.

This module provides pytest fixtures for:
- Writing small price and sector CSV files
- A seeded synthetic market shared by pipeline and CLI tests
- Resetting structlog between tests
"""

import logging
from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest
import structlog

from pminet.ingest import ReturnSeries
from pminet.pipeline import write_prices, write_sectors
from pminet.synth import SynthResult, SynthSpec, generate


@pytest.fixture(autouse=True)
def reset_structlog():
    """Undo any logging configuration done by a test."""
    yield
    structlog.reset_defaults()
    for handler in list(logging.root.handlers):
        if type(handler) is logging.StreamHandler:
            logging.root.removeHandler(handler)


@pytest.fixture
def write_text(tmp_path: Path) -> Callable[[str, str], Path]:
    """Return a helper that writes text to a file under tmp_path."""

    def _write(name: str, content: str) -> Path:
        path = tmp_path / name
        path.write_text(content, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def price_csv(write_text) -> Path:
    """Three clean tickers over five trading days."""
    return write_text(
        "prices.csv",
        "date,AAA,BBB,CCC\n"
        "2020-01-02,100,50,10\n"
        "2020-01-03,101,49,10.5\n"
        "2020-01-06,99,51,10.2\n"
        "2020-01-07,102,52,10.1\n"
        "2020-01-08,103,50,10.4\n",
    )


@pytest.fixture
def sector_csv(write_text) -> Path:
    """Sectors of the tickers in price_csv."""
    return write_text("sectors.csv", "ticker,sector\nAAA,Tech\nBBB,Tech\nCCC,Energy\n")


@pytest.fixture(scope="session")
def small_market() -> SynthResult:
    """Eight tickers in two sectors with 400 returns each."""
    spec = SynthSpec(n_tickers=8, m_samples=400, sectors=(4, 4), coupling=0.6, seed=11)
    return generate(spec)


@pytest.fixture
def market_files(tmp_path: Path, small_market: SynthResult) -> tuple[Path, Path]:
    """Price and sector CSV files of small_market."""
    prices = write_prices(small_market.prices, tmp_path / "data" / "prices.csv", "0" * 64)
    sectors = write_sectors(
        small_market.sectors, small_market.spec.tickers, tmp_path / "data" / "sectors.csv", "0" * 64
    )
    return prices, sectors


@pytest.fixture
def gaussian_returns() -> Callable[..., list[ReturnSeries]]:
    """Return a helper that draws independent Gaussian return series."""

    def _draw(n: int, m: int, seed: int = 0) -> list[ReturnSeries]:
        rng = np.random.default_rng(seed)
        values = rng.standard_normal((n, m))
        return [ReturnSeries(f"T{i}", values[i]) for i in range(n)]

    return _draw
