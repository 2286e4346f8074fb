"""Single entry point for building the matrix of any measure."""

from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray

from pminet.infotheory import AlphabetConvention, Estimator, StateCodes
from pminet.ingest.transform import DiscreteSeries, ReturnSeries
from pminet.similarity.distances import (
    corr_distance,
    mi_distance,
    pcorr_min_distance,
    pmi_min_distance,
)
from pminet.similarity.influence import avg_influence
from pminet.similarity.matrices import InfluenceMatrix, Measure, SimilarityError, SimilarityMatrix


def build_matrix(
    measure: Measure,
    returns: Sequence[ReturnSeries] | None = None,
    states: Sequence[DiscreteSeries] | StateCodes | None = None,
    estimator: Estimator = Estimator.ML,
    convention: AlphabetConvention = AlphabetConvention.JOINT,
    tensor: NDArray[np.float64] | None = None,
) -> SimilarityMatrix | InfluenceMatrix:
    """Build the matrix of one measure.

    Correlation measures (1, 3, 5) read ``returns``; information measures
    (2, 4, 6) read ``states``. Measures 4 and 6 both reduce the same
    I(Xi,Xj|Xk) tensor, so a caller building both can pass it in.

    Args:
        measure: Which of the six measures to build
        returns: Aligned return series
        states: Aligned discrete series or packed state codes
        estimator: Entropy estimator for information measures
        convention: Alphabet convention for the SG prior
        tensor: Precomputed PMI tensor for measures 4 and 6

    Returns:
        SimilarityMatrix for measures 1-4, InfluenceMatrix for 5-6

    Raises:
        SimilarityError: If the input the measure needs is missing
    """
    if measure.uses_information:
        if states is None:
            raise SimilarityError(f"{measure.tag} needs discrete states")
        if measure is Measure.MI_DIST:
            return mi_distance(states, estimator, convention)
        if measure is Measure.PMI_MIN_DIST:
            return pmi_min_distance(states, estimator, convention, tensor=tensor)
        return avg_influence(states, measure, estimator, convention, tensor=tensor)

    if returns is None:
        raise SimilarityError(f"{measure.tag} needs return series")
    if measure is Measure.CORR_DIST:
        return corr_distance(returns)
    if measure is Measure.PCORR_MIN_DIST:
        return pcorr_min_distance(returns)
    return avg_influence(returns, measure)
