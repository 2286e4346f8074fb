"""Price and sector loading for the analysis universe.

Prices arrive as a wide CSV: the first column holds ISO-8601 trading days and
every other column holds one ticker's closing prices. Tickers with incomplete
or non-positive data are excluded from the universe rather than imputed, and
each exclusion is recorded so the caller can report it. Structural problems
(an empty file, a ragged row, a cell that is not a number) abort the load
with a parse error naming the row and column.

Lines starting with ``#`` are treated as comments, which lets the files this
package writes (they carry a provenance comment) be read back in.
"""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
import structlog
from numpy.typing import NDArray

logger = structlog.get_logger(__name__)


class IngestError(Exception):
    """Base exception for data ingest errors."""

    pass


class PriceParseError(IngestError):
    """Raised when a price file cannot be parsed.

    Attributes:
        path: File that failed to parse
        row: 1-based data row (header excluded) where the problem was found, if known
        column: Column name where the problem was found, if known
    """

    def __init__(
        self,
        path: Path,
        message: str,
        row: int | None = None,
        column: str | None = None,
    ) -> None:
        """Initialize the parse error.

        Args:
            path: File that failed to parse
            message: Description of the problem
            row: 1-based data row, if known
            column: Column name, if known
        """
        self.path = path
        self.row = row
        self.column = column
        location = ""
        if row is not None:
            location += f" row {row}"
        if column is not None:
            location += f" column '{column}'"
        prefix = f"{path}:{location}" if location else f"{path}"
        super().__init__(f"{prefix}: {message}")


class SectorMapError(IngestError):
    """Raised when a sector file is malformed or does not cover the universe."""

    pass


class InsufficientDataError(IngestError, ValueError):
    """Raised when a series is too short for the requested computation."""

    pass


@dataclass(frozen=True, eq=False)
class PriceSeries:
    """Closing prices of one ticker on consecutive trading days.

    Attributes:
        ticker: Ticker identifier
        timestamps: Trading-day labels (YYYY-MM-DD), strictly increasing
        prices: Closing prices, strictly positive

    Example:
        >>> series = PriceSeries(
        ...     ticker="IBM",
        ...     timestamps=("2013-11-07", "2013-11-08"),
        ...     prices=np.array([180.0, 182.5]),
        ... )
    """

    ticker: str
    timestamps: tuple[str, ...]
    prices: NDArray[np.float64]

    def __post_init__(self) -> None:
        """Validate the series invariants.

        Raises:
            ValueError: If the ticker is empty, lengths differ, a price is not
                positive or timestamps are not strictly increasing
            InsufficientDataError: If fewer than two prices are given
        """
        if not self.ticker or not self.ticker.strip():
            raise ValueError("Ticker cannot be empty")
        if len(self.prices) != len(self.timestamps):
            raise ValueError(
                f"{self.ticker}: {len(self.prices)} prices but {len(self.timestamps)} timestamps"
            )
        if len(self.prices) < 2:
            raise InsufficientDataError(
                f"{self.ticker}: at least 2 prices are required, got {len(self.prices)}"
            )
        if not np.all(np.isfinite(self.prices)) or np.any(self.prices <= 0):
            raise ValueError(f"{self.ticker}: every price must be finite and > 0")
        if any(a >= b for a, b in zip(self.timestamps, self.timestamps[1:], strict=False)):
            raise ValueError(f"{self.ticker}: timestamps must be strictly increasing")

    def __len__(self) -> int:
        return len(self.prices)


@dataclass(frozen=True)
class Exclusion:
    """A ticker dropped from the universe during loading.

    Attributes:
        ticker: The excluded ticker
        reason: Why it was excluded (e.g. "missing value", "non-positive price")
        row: 1-based data row of the first offending cell
    """

    ticker: str
    reason: str
    row: int


@dataclass(frozen=True)
class PriceLoadResult:
    """Outcome of loading a price file.

    Attributes:
        series: One PriceSeries per complete ticker, in file column order
        exclusions: Tickers that were dropped, in file column order
        dates: Trading-day labels shared by every series
    """

    series: list[PriceSeries]
    exclusions: list[Exclusion] = field(default_factory=lambda: [])
    dates: tuple[str, ...] = ()

    @property
    def tickers(self) -> list[str]:
        """Tickers of the retained series, in file order."""
        return [s.ticker for s in self.series]


@dataclass(frozen=True)
class SectorMap:
    """Mapping from ticker to economic sector label.

    Attributes:
        sectors: ticker -> sector label

    Example:
        >>> sector_map = SectorMap({"IBM": "Technology", "XOM": "Energy"})
        >>> sector_map.get("IBM")
        'Technology'
    """

    sectors: dict[str, str]

    def __post_init__(self) -> None:
        """Reject blank sector labels.

        Raises:
            SectorMapError: If any ticker maps to a blank label
        """
        for ticker, sector in self.sectors.items():
            if not sector or not sector.strip():
                raise SectorMapError(f"Ticker '{ticker}' has a blank sector label")

    def get(self, ticker: str) -> str | None:
        """Return the sector of a ticker, or None if unknown."""
        return self.sectors.get(ticker)

    def __contains__(self, ticker: object) -> bool:
        return ticker in self.sectors

    def labels(self) -> list[str]:
        """Distinct sector labels in sorted order."""
        return sorted(set(self.sectors.values()))

    def require(self, tickers: list[str]) -> None:
        """Check that every ticker in the universe has a sector.

        Args:
            tickers: Tickers of the analysis universe

        Raises:
            SectorMapError: If any ticker has no sector
        """
        missing = [t for t in tickers if t not in self.sectors]
        if missing:
            raise SectorMapError(f"No sector for tickers: {', '.join(missing)}")


def _read_csv(path: Path) -> pd.DataFrame:
    try:
        return pd.read_csv(path, dtype=str, comment="#", keep_default_na=False)
    except pd.errors.EmptyDataError as e:
        raise PriceParseError(path, "file is empty") from e
    except pd.errors.ParserError as e:
        raise PriceParseError(path, f"malformed CSV: {e}") from e


def load_prices(path: str | Path) -> PriceLoadResult:
    """Load closing prices from a wide CSV file.

    The header row must start with ``date`` followed by one column per ticker.
    Dates must be ISO-8601 and strictly increasing. A ticker with any blank or
    non-positive cell is excluded and recorded in ``exclusions``; the load
    itself still succeeds.

    Args:
        path: Path to the CSV file

    Returns:
        PriceLoadResult with the retained series and the exclusion records

    Raises:
        PriceParseError: If the file is missing, empty or structurally malformed,
            or a cell holds something that is not a number

    Example:
        >>> result = load_prices("prices.csv")
        >>> [s.ticker for s in result.series]
        ['IBM', 'XOM']
        >>> result.exclusions
        [Exclusion(ticker='GM', reason='missing value', row=3)]
    """
    path = Path(path)
    log = logger.bind(path=str(path))
    if not path.is_file():
        raise PriceParseError(path, "file does not exist")

    frame = _read_csv(path)
    if frame.shape[1] == 0 or str(frame.columns[0]).strip().lower() != "date":
        raise PriceParseError(path, "header must start with 'date'", row=0)
    if frame.shape[1] < 2:
        raise PriceParseError(path, "header names no tickers", row=0)
    if len(frame) == 0:
        raise PriceParseError(path, "file has no data rows")

    date_column = str(frame.columns[0])
    parsed = pd.to_datetime(frame[date_column].str.strip(), format="ISO8601", errors="coerce")
    bad_dates = np.flatnonzero(parsed.isna().to_numpy())
    if bad_dates.size:
        row = int(bad_dates[0])
        raise PriceParseError(
            path,
            f"invalid date '{frame[date_column].iloc[row]}'",
            row=row + 1,
            column=date_column,
        )
    steps = parsed.diff().iloc[1:]
    not_increasing = np.flatnonzero((steps <= pd.Timedelta(0)).to_numpy())
    if not_increasing.size:
        raise PriceParseError(
            path,
            "dates must be strictly increasing",
            row=int(not_increasing[0]) + 2,
            column=date_column,
        )
    if len(frame) < 2:
        raise PriceParseError(path, "at least two rows of prices are required")
    dates = tuple(parsed.dt.strftime("%Y-%m-%d"))

    series: list[PriceSeries] = []
    exclusions: list[Exclusion] = []
    for column in frame.columns[1:]:
        ticker = str(column).strip()
        raw = frame[column].str.strip()
        blank = (raw == "").to_numpy()
        values = pd.to_numeric(raw.where(~blank), errors="coerce").to_numpy(dtype=np.float64)
        unparsable = np.flatnonzero(~blank & ~np.isfinite(values))
        if unparsable.size:
            row = int(unparsable[0])
            raise PriceParseError(
                path, f"not a number: '{raw.iloc[row]}'", row=row + 1, column=ticker
            )
        if blank.any():
            exclusion = Exclusion(ticker, "missing value", int(np.flatnonzero(blank)[0]) + 1)
        elif np.any(values <= 0):
            exclusion = Exclusion(
                ticker, "non-positive price", int(np.flatnonzero(values <= 0)[0]) + 1
            )
        else:
            series.append(PriceSeries(ticker=ticker, timestamps=dates, prices=values))
            continue
        log.warning(
            "ticker_excluded", ticker=ticker, reason=exclusion.reason, row=exclusion.row
        )
        exclusions.append(exclusion)

    log.info("prices_loaded", tickers=len(series), excluded=len(exclusions), rows=len(dates))
    return PriceLoadResult(series=series, exclusions=exclusions, dates=dates)


def load_sectors(path: str | Path) -> SectorMap:
    """Load a ticker-to-sector mapping.

    Args:
        path: CSV file with header ``ticker,sector``

    Returns:
        SectorMap with one entry per row

    Raises:
        SectorMapError: If the file is missing, the header is wrong, a ticker
            is repeated or a sector label is blank
    """
    path = Path(path)
    if not path.is_file():
        raise SectorMapError(f"{path}: file does not exist")
    try:
        frame = pd.read_csv(path, dtype=str, comment="#", keep_default_na=False)
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise SectorMapError(f"{path}: cannot parse sector file: {e}") from e

    header = [str(c).strip().lower() for c in frame.columns]
    if header != ["ticker", "sector"]:
        raise SectorMapError(f"{path}: header must be 'ticker,sector', got {','.join(header)}")

    sectors: dict[str, str] = {}
    for row, (ticker, sector) in enumerate(frame.itertuples(index=False, name=None), start=1):
        ticker = str(ticker).strip()
        if ticker in sectors:
            raise SectorMapError(f"{path}: row {row}: duplicate ticker '{ticker}'")
        sectors[ticker] = str(sector).strip()

    logger.info("sectors_loaded", path=str(path), tickers=len(sectors))
    return SectorMap(sectors)
