"""Pearson correlation and first-order partial correlation.

Partial correlation uses the first-order recursion

    ρ(X,Y|Z) = (ρ_XY - ρ_XZ ρ_YZ) / sqrt((1 - ρ_XZ²)(1 - ρ_YZ²))

which is undefined when Z is perfectly correlated with X or Y.
"""

from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray

from pminet.infotheory.tables import EstimationError
from pminet.ingest.transform import ReturnSeries

# |ρ| within this distance of 1 counts as perfect correlation
DEGENERATE_TOLERANCE = 1e-12


class ZeroVarianceError(EstimationError):
    """Raised when a correlation involves a constant series.

    Attributes:
        tickers: Tickers of the constant series
    """

    def __init__(self, tickers: Sequence[str]) -> None:
        self.tickers = list(tickers)
        super().__init__(f"zero variance (constant series): {', '.join(self.tickers)}")


class DegenerateConditioningError(EstimationError):
    """Raised when the conditioning series is perfectly correlated with X or Y."""

    pass


def _values(series: ReturnSeries | NDArray[np.float64]) -> NDArray[np.float64]:
    if isinstance(series, ReturnSeries):
        return np.asarray(series.returns, dtype=np.float64)
    return np.asarray(series, dtype=np.float64)


def _name(series: ReturnSeries | NDArray[np.float64], fallback: str) -> str:
    return series.ticker if isinstance(series, ReturnSeries) else fallback


def pearson(
    x: ReturnSeries | NDArray[np.float64],
    y: ReturnSeries | NDArray[np.float64],
) -> float:
    """Sample Pearson correlation of two aligned series.

    Args:
        x: First series
        y: Second series

    Returns:
        Correlation in [-1, 1]

    Raises:
        ValueError: If lengths differ or are below 2
        ZeroVarianceError: If either series is constant
    """
    a, b = _values(x), _values(y)
    if len(a) != len(b):
        raise ValueError(f"series lengths differ: {len(a)} vs {len(b)}")
    if len(a) < 2:
        raise ValueError("correlation needs at least 2 observations")
    constant = [
        _name(s, label)
        for s, v, label in ((x, a, "x"), (y, b, "y"))
        if np.all(v == v[0])
    ]
    if constant:
        raise ZeroVarianceError(constant)
    return float(np.clip(np.corrcoef(a, b)[0, 1], -1.0, 1.0))


def partial_corr(
    x: ReturnSeries | NDArray[np.float64],
    y: ReturnSeries | NDArray[np.float64],
    z: ReturnSeries | NDArray[np.float64],
) -> float:
    """First-order partial correlation ρ(X,Y|Z).

    Args:
        x: First series
        y: Second series
        z: Conditioning series

    Returns:
        Partial correlation in [-1, 1]

    Raises:
        ZeroVarianceError: If any series is constant
        DegenerateConditioningError: If |ρ(x,z)| or |ρ(y,z)| is 1
    """
    r_xy = pearson(x, y)
    r_xz = pearson(x, z)
    r_yz = pearson(y, z)
    if 1.0 - abs(r_xz) < DEGENERATE_TOLERANCE or 1.0 - abs(r_yz) < DEGENERATE_TOLERANCE:
        raise DegenerateConditioningError(
            f"conditioning series is perfectly correlated (ρ_xz={r_xz}, ρ_yz={r_yz})"
        )
    value = (r_xy - r_xz * r_yz) / np.sqrt((1.0 - r_xz**2) * (1.0 - r_yz**2))
    return float(np.clip(value, -1.0, 1.0))


def correlation_matrix(series: Sequence[ReturnSeries]) -> NDArray[np.float64]:
    """Pearson correlation of every pair of aligned return series.

    Raises:
        ValueError: If the series are not aligned or fewer than 2 observations exist
        ZeroVarianceError: If any series is constant, naming every constant ticker
    """
    if len({len(s) for s in series}) > 1:
        raise ValueError("return series must be aligned (equal lengths)")
    data = np.stack([_values(s) for s in series])
    if data.shape[1] < 2:
        raise ValueError("correlation needs at least 2 observations")
    constant = [s.ticker for s, row in zip(series, data, strict=True) if np.all(row == row[0])]
    if constant:
        raise ZeroVarianceError(constant)
    corr = np.clip(np.corrcoef(data), -1.0, 1.0)
    # corrcoef is symmetric up to rounding
    return np.triu(corr) + np.triu(corr, 1).T


def partial_correlation_tensor(corr: NDArray[np.float64]) -> NDArray[np.float64]:
    """ρ(Xi,Xj|Xk) for every ordered triple, from a correlation matrix.

    Entries where k equals i or j, where i equals j, or where Xk is perfectly
    correlated with Xi or Xj are NaN.

    Args:
        corr: Symmetric correlation matrix of shape (N, N)

    Returns:
        Array of shape (N, N, N), symmetric in its first two axes
    """
    n = corr.shape[0]
    r_ik = corr[:, None, :]
    r_jk = corr[None, :, :]
    r_ij = corr[:, :, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        degenerate = (1.0 - np.abs(r_ik) < DEGENERATE_TOLERANCE) | (
            1.0 - np.abs(r_jk) < DEGENERATE_TOLERANCE
        )
        tensor = (r_ij - r_ik * r_jk) / np.sqrt((1.0 - r_ik**2) * (1.0 - r_jk**2))
    tensor = np.clip(tensor, -1.0, 1.0)
    tensor[degenerate] = np.nan
    idx = np.arange(n)
    tensor[idx, :, idx] = np.nan
    tensor[:, idx, idx] = np.nan
    tensor[idx, idx, :] = np.nan
    return tensor
