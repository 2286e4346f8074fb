"""Influence of a third ticker on a pair, and its average over partners.

The MI influence of Z on the pair (X, Y) is the part of their mutual
information explained by Z::

    d(X,Y|Z) = I(X,Y) - I(X,Y|Z)

and the correlation analogue is ρ(X,Y) - ρ(X,Y|Z). Both can be negative when
conditioning reveals dependence (synergy); negative values are kept.

The average influence of Z on X is the arithmetic mean over every partner
Y not in {X, Z}::

    d(X|Z) = < d(X,Y|Z) >_Y
"""

from collections.abc import Sequence

import numpy as np
import structlog
from numpy.typing import NDArray

from pminet.infotheory import (
    AlphabetConvention,
    Estimator,
    StateCodes,
    entropy_vector,
    joint_entropy_matrix,
    mutual_info,
    mutual_info_matrix,
    partial_correlation_tensor,
    partial_mutual_info,
    pmi_tensor,
)
from pminet.ingest.transform import DiscreteSeries, ReturnSeries
from pminet.similarity.distances import _correlations
from pminet.similarity.matrices import (
    InfluenceMatrix,
    InvalidIndexError,
    Measure,
    SimilarityError,
)

logger = structlog.get_logger(__name__)


def mi_influence(
    states: Sequence[DiscreteSeries] | StateCodes,
    estimator: Estimator,
    x: int,
    y: int,
    z: int,
    convention: AlphabetConvention = AlphabetConvention.JOINT,
) -> float:
    """MI influence d(X,Y|Z) = I(X,Y) - I(X,Y|Z) of one triple.

    Args:
        states: Aligned discrete series of the universe
        estimator: Entropy estimator
        x: Index of X
        y: Index of Y
        z: Index of Z
        convention: Alphabet convention for the SG prior

    Returns:
        The influence in nats; negative values signal synergy

    Raises:
        InvalidIndexError: If an index is out of range or the indices are not distinct
    """
    codes = states if isinstance(states, StateCodes) else StateCodes.from_series(states)
    for index in (x, y, z):
        if not 0 <= index < codes.n:
            raise InvalidIndexError(f"index {index} out of range for {codes.n} tickers")
    if len({x, y, z}) != 3:
        raise InvalidIndexError(f"indices must be distinct, got ({x}, {y}, {z})")
    mi = mutual_info(codes.table(x, y), estimator, convention)
    pmi = partial_mutual_info(codes.table(x, y, z), estimator, convention)
    return mi - pmi


def average_over_partners(
    pairwise: NDArray[np.float64], tensor: NDArray[np.float64]
) -> NDArray[np.float64]:
    """d(X|Z) = mean over Y of pairwise[X, Y] - tensor[X, Y, Z].

    Entries that are NaN in the tensor (Y in {X, Z}, degenerate conditioning)
    are left out of the mean. The result is indexed [x, z] with a NaN diagonal.
    """
    influence = pairwise[:, :, None] - tensor
    valid = ~np.isnan(influence)
    sums = np.where(valid, influence, 0.0).sum(axis=1)
    counts = valid.sum(axis=1)
    average = np.full(sums.shape, np.nan)
    np.divide(sums, counts, out=average, where=counts > 0)
    np.fill_diagonal(average, np.nan)
    return average


def avg_influence(
    data: Sequence[ReturnSeries] | Sequence[DiscreteSeries] | StateCodes,
    measure: Measure,
    estimator: Estimator = Estimator.ML,
    convention: AlphabetConvention = AlphabetConvention.JOINT,
    tensor: NDArray[np.float64] | None = None,
) -> InfluenceMatrix:
    """Average influence matrix for measure 5 (correlation) or 6 (MI).

    Args:
        data: Return series for measure 5, discrete series (or packed codes) for measure 6
        measure: Measure.CORR_INFLUENCE or Measure.MI_INFLUENCE
        estimator: Entropy estimator (measure 6 only)
        convention: Alphabet convention for the SG prior (measure 6 only)
        tensor: Precomputed I(Xi,Xj|Xk) tensor (measure 6 only)

    Returns:
        InfluenceMatrix with entry [x, z] = d(X|Z)

    Raises:
        SimilarityError: If the measure is not an influence measure or fewer
            than three tickers are given
    """
    if measure is Measure.CORR_INFLUENCE:
        if isinstance(data, StateCodes) or not all(isinstance(s, ReturnSeries) for s in data):
            raise SimilarityError("corr-influence needs return series")
        series = [s for s in data if isinstance(s, ReturnSeries)]
        if len(series) < 3:
            raise SimilarityError(f"corr-influence needs at least 3 tickers, got {len(series)}")
        corr = _correlations(series)
        pairwise = corr.copy()
        np.fill_diagonal(pairwise, np.nan)
        values = average_over_partners(pairwise, partial_correlation_tensor(corr))
        tickers = tuple(s.ticker for s in series)
    elif measure is Measure.MI_INFLUENCE:
        if isinstance(data, StateCodes):
            codes = data
        else:
            if not all(isinstance(s, DiscreteSeries) for s in data):
                raise SimilarityError("mi-influence needs discrete series")
            discrete = [s for s in data if isinstance(s, DiscreteSeries)]
            codes = StateCodes.from_series(discrete)
        if codes.n < 3:
            raise SimilarityError(f"mi-influence needs at least 3 tickers, got {codes.n}")
        h = entropy_vector(codes, estimator, convention)
        h_joint = joint_entropy_matrix(codes, estimator, convention)
        if tensor is None:
            tensor = pmi_tensor(codes, estimator, convention, h=h, h_joint=h_joint)
        pairwise = mutual_info_matrix(codes, estimator, convention, h=h, h_joint=h_joint)
        values = average_over_partners(pairwise, tensor)
        tickers = codes.tickers
    else:
        raise SimilarityError(f"{measure.tag} is not an influence measure")

    logger.info("matrix_built", measure=measure.tag, n_tickers=len(tickers))
    return InfluenceMatrix(tickers, measure, values)
