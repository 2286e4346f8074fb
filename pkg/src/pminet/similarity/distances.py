"""Distance matrices for measures 1-4.

1. corr-dist:       d = sqrt(2(1 - ρ(X,Y)))
2. mi-dist:         d = H(X,Y) - I(X,Y)  (variation of information)
3. pcorr-min-dist:  d = sqrt(2(1 - min_Z ρ(X,Y|Z)))
4. pmi-min-dist:    d = H(X,Y) - min_Z I(X,Y|Z)

The minimum in measures 3 and 4 ranges over every other ticker in the
universe. Each unordered pair is computed once and mirrored.
"""

from collections.abc import Sequence

import numpy as np
import structlog
from numpy.typing import NDArray

from pminet.infotheory import (
    AlphabetConvention,
    Estimator,
    StateCodes,
    ZeroVarianceError,
    correlation_matrix,
    entropy_vector,
    joint_entropy_matrix,
    partial_correlation_tensor,
    pmi_tensor,
)
from pminet.ingest.transform import DiscreteSeries, ReturnSeries
from pminet.similarity.matrices import (
    ConstantSeriesError,
    Measure,
    NoValidConditioningError,
    SimilarityError,
    SimilarityMatrix,
)

logger = structlog.get_logger(__name__)


def _codes(states: Sequence[DiscreteSeries] | StateCodes) -> StateCodes:
    return states if isinstance(states, StateCodes) else StateCodes.from_series(states)


def _require(n: int, minimum: int, measure: Measure) -> None:
    if n < minimum:
        raise SimilarityError(f"{measure.tag} needs at least {minimum} tickers, got {n}")


def _correlations(series: Sequence[ReturnSeries]) -> NDArray[np.float64]:
    try:
        return correlation_matrix(series)
    except ZeroVarianceError as e:
        raise ConstantSeriesError(e.tickers) from e


def _corr_to_distance(corr: NDArray[np.float64]) -> NDArray[np.float64]:
    distance = np.sqrt(np.clip(2.0 * (1.0 - corr), 0.0, 4.0))
    np.fill_diagonal(distance, np.nan)
    return distance


def min_over_conditioning(tensor: NDArray[np.float64]) -> NDArray[np.float64]:
    """Minimum of a (N, N, N) tensor over its last axis, ignoring NaN entries.

    Pairs with no finite entry (including the diagonal) come out as NaN.
    """
    filled = np.where(np.isnan(tensor), np.inf, tensor)
    minimum = filled.min(axis=2)
    minimum[np.isinf(minimum)] = np.nan
    return minimum


def corr_distance(series: Sequence[ReturnSeries]) -> SimilarityMatrix:
    """Measure 1: sqrt(2(1 - ρ)) for every pair.

    Args:
        series: Aligned return series, at least two

    Returns:
        SimilarityMatrix with values in [0, 2]

    Raises:
        ConstantSeriesError: If any series is constant
    """
    _require(len(series), 2, Measure.CORR_DIST)
    values = _corr_to_distance(_correlations(series))
    logger.info("matrix_built", measure=Measure.CORR_DIST.tag, n_tickers=len(series))
    return SimilarityMatrix(tuple(s.ticker for s in series), Measure.CORR_DIST, values)


def mi_distance(
    states: Sequence[DiscreteSeries] | StateCodes,
    estimator: Estimator = Estimator.ML,
    convention: AlphabetConvention = AlphabetConvention.JOINT,
) -> SimilarityMatrix:
    """Measure 2: H(X,Y) - I(X,Y) for every pair.

    With the plug-in estimator this equals H(X|Y) + H(Y|X).

    Args:
        states: Aligned discrete series, at least two
        estimator: Entropy estimator
        convention: Alphabet convention for the SG prior

    Returns:
        SimilarityMatrix of distances in nats
    """
    codes = _codes(states)
    _require(codes.n, 2, Measure.MI_DIST)
    h = entropy_vector(codes, estimator, convention)
    h_joint = joint_entropy_matrix(codes, estimator, convention)
    mi = h[:, None] + h[None, :] - h_joint
    values = h_joint - mi
    np.fill_diagonal(values, np.nan)
    logger.info("matrix_built", measure=Measure.MI_DIST.tag, n_tickers=codes.n)
    return SimilarityMatrix(codes.tickers, Measure.MI_DIST, values)


def pcorr_min_distance(series: Sequence[ReturnSeries]) -> SimilarityMatrix:
    """Measure 3: sqrt(2(1 - min_Z ρ(X,Y|Z))) for every pair.

    A conditioning ticker perfectly correlated with X or Y is skipped with a
    warning.

    Args:
        series: Aligned return series, at least three

    Returns:
        SimilarityMatrix with values in [0, 2]

    Raises:
        ConstantSeriesError: If any series is constant
        NoValidConditioningError: If every conditioning ticker is degenerate for some pair
    """
    n = len(series)
    _require(n, 3, Measure.PCORR_MIN_DIST)
    tickers = tuple(s.ticker for s in series)
    corr = _correlations(series)
    tensor = partial_correlation_tensor(corr)

    idx = np.arange(n)
    expected = np.ones((n, n, n), dtype=bool)
    expected[idx, :, idx] = False
    expected[:, idx, idx] = False
    expected[idx, idx, :] = False
    skipped = np.argwhere(expected & np.isnan(tensor))
    skipped = skipped[skipped[:, 0] < skipped[:, 1]]
    if len(skipped):
        logger.warning(
            "degenerate_conditioning_skipped",
            count=len(skipped),
            examples=[
                f"{tickers[i]}-{tickers[j]}|{tickers[k]}" for i, j, k in skipped[:5].tolist()
            ],
        )

    minimum = min_over_conditioning(tensor)
    off = ~np.eye(n, dtype=bool)
    empty = np.argwhere(off & np.isnan(minimum))
    if len(empty):
        i, j = empty[0]
        raise NoValidConditioningError(
            f"every conditioning ticker is degenerate for pair {tickers[i]}-{tickers[j]}"
        )

    values = _corr_to_distance(minimum)
    logger.info("matrix_built", measure=Measure.PCORR_MIN_DIST.tag, n_tickers=n)
    return SimilarityMatrix(tickers, Measure.PCORR_MIN_DIST, values)


def pmi_min_distance(
    states: Sequence[DiscreteSeries] | StateCodes,
    estimator: Estimator = Estimator.ML,
    convention: AlphabetConvention = AlphabetConvention.JOINT,
    tensor: NDArray[np.float64] | None = None,
) -> SimilarityMatrix:
    """Measure 4: H(X,Y) - min_Z I(X,Y|Z) for every pair.

    This costs O(N³) PMI evaluations; pass a tensor from
    :func:`pminet.infotheory.pmi_tensor` to reuse one already computed.

    Args:
        states: Aligned discrete series, at least three
        estimator: Entropy estimator
        convention: Alphabet convention for the SG prior
        tensor: Precomputed I(Xi,Xj|Xk) tensor

    Returns:
        SimilarityMatrix of distances in nats
    """
    codes = _codes(states)
    _require(codes.n, 3, Measure.PMI_MIN_DIST)
    h = entropy_vector(codes, estimator, convention)
    h_joint = joint_entropy_matrix(codes, estimator, convention)
    if tensor is None:
        tensor = pmi_tensor(codes, estimator, convention, h=h, h_joint=h_joint)
    values = h_joint - min_over_conditioning(tensor)
    np.fill_diagonal(values, np.nan)
    logger.info("matrix_built", measure=Measure.PMI_MIN_DIST.tag, n_tickers=codes.n)
    return SimilarityMatrix(codes.tickers, Measure.PMI_MIN_DIST, values)
