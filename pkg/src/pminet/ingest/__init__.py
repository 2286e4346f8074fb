"""
Market data ingest.

This package loads closing prices and sector labels, converts prices into log
returns and discretizes returns into equal-occupancy rank states.
"""

from pminet.ingest.prices import (
    Exclusion,
    IngestError,
    InsufficientDataError,
    PriceLoadResult,
    PriceParseError,
    PriceSeries,
    SectorMap,
    SectorMapError,
    load_prices,
    load_sectors,
)
from pminet.ingest.transform import (
    DEFAULT_BINS,
    DiscreteSeries,
    ReturnSeries,
    ZeroInformationError,
    discretize_quartiles,
    log_returns,
    returns_frame,
    states_frame,
)

__all__ = [
    "DEFAULT_BINS",
    "DiscreteSeries",
    "Exclusion",
    "IngestError",
    "InsufficientDataError",
    "PriceLoadResult",
    "PriceParseError",
    "PriceSeries",
    "ReturnSeries",
    "SectorMap",
    "SectorMapError",
    "ZeroInformationError",
    "discretize_quartiles",
    "load_prices",
    "load_sectors",
    "log_returns",
    "returns_frame",
    "states_frame",
]
