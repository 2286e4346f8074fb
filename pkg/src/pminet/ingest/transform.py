"""Log returns and quartile discretization.

Returns are the natural log of the ratio of consecutive closing prices.
Entropy estimation needs discrete data, so each return series is mapped onto
``bins`` equal-occupancy rank states (quartiles for the default of 4).
Ranking makes the states invariant under any strictly increasing transform
of the returns, and ties are broken by time index so the mapping is fully
deterministic.
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd
import structlog
from numpy.typing import NDArray

from pminet.ingest.prices import IngestError, InsufficientDataError, PriceSeries

logger = structlog.get_logger(__name__)

DEFAULT_BINS = 4


class ZeroInformationError(IngestError):
    """Raised when a return series is constant and carries no information."""

    pass


@dataclass(frozen=True, eq=False)
class ReturnSeries:
    """Log returns of one ticker.

    Attributes:
        ticker: Ticker identifier
        returns: Dimensionless log returns
        timestamps: Trading day of each return (the later day of each price pair);
            empty when the series was built without dates
    """

    ticker: str
    returns: NDArray[np.float64]
    timestamps: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        """Validate that timestamps, when given, match the returns.

        Raises:
            ValueError: If the ticker is empty or the lengths differ
        """
        if not self.ticker or not self.ticker.strip():
            raise ValueError("Ticker cannot be empty")
        if self.timestamps and len(self.timestamps) != len(self.returns):
            raise ValueError(
                f"{self.ticker}: {len(self.returns)} returns but {len(self.timestamps)} timestamps"
            )

    def __len__(self) -> int:
        return len(self.returns)


@dataclass(frozen=True, eq=False)
class DiscreteSeries:
    """Rank-bin states of one ticker's returns.

    Attributes:
        ticker: Ticker identifier
        states: Integer states in [0, bins - 1]
        bins: Alphabet size |χ|
        timestamps: Trading day of each state, possibly empty
    """

    ticker: str
    states: NDArray[np.int64]
    bins: int = DEFAULT_BINS
    timestamps: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        """Validate the state alphabet.

        Raises:
            ValueError: If bins < 2 or a state falls outside [0, bins - 1]
        """
        if self.bins < 2:
            raise ValueError(f"bins must be >= 2, got {self.bins}")
        if len(self.states) and (self.states.min() < 0 or self.states.max() >= self.bins):
            raise ValueError(f"{self.ticker}: states must lie in [0, {self.bins - 1}]")
        if self.timestamps and len(self.timestamps) != len(self.states):
            raise ValueError(
                f"{self.ticker}: {len(self.states)} states but {len(self.timestamps)} timestamps"
            )

    def __len__(self) -> int:
        return len(self.states)


def log_returns(series: PriceSeries) -> ReturnSeries:
    """Compute log returns r_t = ln(p_t / p_{t-1}).

    Args:
        series: Price series with at least two prices

    Returns:
        ReturnSeries one element shorter than the price series

    Raises:
        InsufficientDataError: If fewer than two prices are available

    Example:
        >>> prices = PriceSeries("X", ("2020-01-01", "2020-01-02"), np.array([100.0, 105.0]))
        >>> log_returns(prices).returns
        array([0.04879016])
    """
    if len(series.prices) < 2:
        raise InsufficientDataError(f"{series.ticker}: no return computable from one price")
    prices = np.asarray(series.prices, dtype=np.float64)
    returns = np.log(prices[1:] / prices[:-1])
    return ReturnSeries(ticker=series.ticker, returns=returns, timestamps=series.timestamps[1:])


def discretize_quartiles(series: ReturnSeries, bins: int = DEFAULT_BINS) -> DiscreteSeries:
    """Map returns onto equal-occupancy rank states.

    Values are ranked (0-based) with ties broken by time index, the earlier
    observation getting the lower rank; rank r of n maps to state
    floor(r * bins / n). Occupancy counts therefore differ by at most one
    between any two states.

    Args:
        series: Return series to discretize
        bins: Number of states (4 gives quartiles)

    Returns:
        DiscreteSeries with one state per return

    Raises:
        ValueError: If bins < 2
        InsufficientDataError: If there are fewer returns than bins
        ZeroInformationError: If every return is identical

    Example:
        >>> discretize_quartiles(ReturnSeries("X", np.array([5.0, 5.0, 1.0, 9.0]))).states
        array([1, 2, 0, 3])
    """
    if bins < 2:
        raise ValueError(f"bins must be >= 2, got {bins}")
    values = np.asarray(series.returns, dtype=np.float64)
    n = len(values)
    if n < bins:
        raise InsufficientDataError(f"{series.ticker}: {n} returns cannot fill {bins} bins")
    if np.all(values == values[0]):
        raise ZeroInformationError(f"{series.ticker}: zero-information series (constant returns)")

    order = np.argsort(values, kind="stable")
    ranks = np.empty(n, dtype=np.int64)
    ranks[order] = np.arange(n, dtype=np.int64)
    states = (ranks * bins) // n
    return DiscreteSeries(
        ticker=series.ticker, states=states, bins=bins, timestamps=series.timestamps
    )


def returns_frame(series: Sequence[ReturnSeries]) -> pd.DataFrame:
    """Lay out return series as a date-indexed table, one column per ticker."""
    return _frame({s.ticker: s.returns for s in series}, series[0].timestamps if series else ())


def states_frame(series: Sequence[DiscreteSeries]) -> pd.DataFrame:
    """Lay out discrete series as a date-indexed table, one column per ticker."""
    return _frame({s.ticker: s.states for s in series}, series[0].timestamps if series else ())


def _frame(columns: dict[str, NDArray[np.generic]], timestamps: tuple[str, ...]) -> pd.DataFrame:
    frame = pd.DataFrame(columns)
    if timestamps:
        frame.index = pd.Index(list(timestamps), name="date")
    else:
        frame.index.name = "date"
    return frame
