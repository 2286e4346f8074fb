"""Similarity and influence matrix types.

Six measures are supported. Measures 1-4 are symmetric distances between
pairs of tickers and are held in a :class:`SimilarityMatrix`; measures 5-6
are directed average influences d(X|Z) held in an :class:`InfluenceMatrix`.

Both types know how to list their entries in construction order for the
network builders: distances increasing, influences decreasing, ties broken
lexicographically on the ticker pair so the order is reproducible.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import NDArray


class SimilarityError(Exception):
    """Base exception for similarity matrix construction errors."""

    pass


class ConstantSeriesError(SimilarityError):
    """Raised when a return series is constant, naming the offending tickers.

    Attributes:
        tickers: Constant tickers
    """

    def __init__(self, tickers: list[str]) -> None:
        self.tickers = tickers
        super().__init__(f"constant return series: {', '.join(tickers)}")


class NoValidConditioningError(SimilarityError):
    """Raised when every candidate conditioning ticker is degenerate for a pair."""

    pass


class InvalidIndexError(SimilarityError, IndexError):
    """Raised when ticker indices are out of range or not distinct."""

    pass


class Measure(Enum):
    """The six similarity measures, numbered as in the network comparison.

    Attributes:
        CORR_DIST: sqrt(2(1 - ρ))
        MI_DIST: H(X,Y) - I(X,Y)
        PCORR_MIN_DIST: sqrt(2(1 - min_Z ρ(X,Y|Z)))
        PMI_MIN_DIST: H(X,Y) - min_Z I(X,Y|Z)
        CORR_INFLUENCE: average of ρ(X,Y) - ρ(X,Y|Z) over Y
        MI_INFLUENCE: average of I(X,Y) - I(X,Y|Z) over Y
    """

    CORR_DIST = 1
    MI_DIST = 2
    PCORR_MIN_DIST = 3
    PMI_MIN_DIST = 4
    CORR_INFLUENCE = 5
    MI_INFLUENCE = 6

    @property
    def tag(self) -> str:
        """Short hyphenated name used in file names and logs."""
        return self.name.lower().replace("_", "-")

    @property
    def is_influence(self) -> bool:
        """True for the directed average-influence measures."""
        return self in (Measure.CORR_INFLUENCE, Measure.MI_INFLUENCE)

    @property
    def uses_information(self) -> bool:
        """True for measures estimated from discrete states."""
        return self in (Measure.MI_DIST, Measure.PMI_MIN_DIST, Measure.MI_INFLUENCE)

    @classmethod
    def parse(cls, value: "int | str | Measure") -> "Measure":
        """Resolve a measure from its number, tag or member.

        Raises:
            ValueError: If the value names no measure
        """
        if isinstance(value, Measure):
            return value
        text = str(value).strip().lower()
        for member in cls:
            if text in (str(member.value), member.tag, member.name.lower()):
                return member
        tags = ", ".join(m.tag for m in cls)
        raise ValueError(f"unknown measure '{value}'; expected 1-6 or one of {tags}")


def _check_square(tickers: tuple[str, ...], values: NDArray[np.float64]) -> None:
    n = len(tickers)
    if values.shape != (n, n):
        raise ValueError(f"matrix shape {values.shape} does not match {n} tickers")
    if len(set(tickers)) != n:
        raise ValueError("tickers must be unique")


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Symmetric distance matrix between tickers; the diagonal is ignored (NaN).

    Attributes:
        tickers: Ticker of each row/column
        measure: One of measures 1-4
        values: Distances of shape (N, N)
    """

    tickers: tuple[str, ...]
    measure: Measure
    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        """Validate shape and symmetry.

        Raises:
            ValueError: If the matrix is not square over the tickers, is not
                symmetric within 1e-12 or carries an influence measure
        """
        _check_square(self.tickers, self.values)
        if self.measure.is_influence:
            raise ValueError(f"{self.measure.tag} is an influence measure")
        off = ~np.eye(len(self.tickers), dtype=bool)
        a, b = self.values[off], self.values.T[off]
        both = ~(np.isnan(a) & np.isnan(b))
        if not np.allclose(a[both], b[both], rtol=0.0, atol=1e-12):
            raise ValueError("similarity matrix must be symmetric")

    @property
    def n(self) -> int:
        """Number of tickers."""
        return len(self.tickers)

    def sorted_pairs(self) -> list[tuple[float, int, int]]:
        """Unordered pairs (value, i, j) with i < j, by increasing distance.

        Ties are broken by (ticker_i, ticker_j).
        """
        rows, cols = np.triu_indices(self.n, k=1)
        entries = [
            (float(self.values[i, j]), int(i), int(j)) for i, j in zip(rows, cols, strict=True)
        ]
        return sorted(entries, key=lambda e: (e[0], self.tickers[e[1]], self.tickers[e[2]]))


@dataclass(frozen=True, eq=False)
class InfluenceMatrix:
    """Directed average influence d(X|Z); entry [x, z] is the influence of Z on X.

    Attributes:
        tickers: Ticker of each row/column
        measure: Measure 5 or 6
        values: Influences of shape (N, N); the diagonal is ignored (NaN)
    """

    tickers: tuple[str, ...]
    measure: Measure
    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        """Validate shape and measure.

        Raises:
            ValueError: If the matrix is not square over the tickers or carries
                a distance measure
        """
        _check_square(self.tickers, self.values)
        if not self.measure.is_influence:
            raise ValueError(f"{self.measure.tag} is not an influence measure")

    @property
    def n(self) -> int:
        """Number of tickers."""
        return len(self.tickers)

    def sorted_entries(self) -> list[tuple[float, int, int]]:
        """Directed entries (value, source z, target x) by decreasing influence.

        There are N(N-1) entries, one per ordered pair of distinct tickers.
        Ties are broken by (ticker_source, ticker_target).
        """
        entries = [
            (float(self.values[x, z]), z, x)
            for x in range(self.n)
            for z in range(self.n)
            if x != z
        ]
        return sorted(entries, key=lambda e: (-e[0], self.tickers[e[1]], self.tickers[e[2]]))
