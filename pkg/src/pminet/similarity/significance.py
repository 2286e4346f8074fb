"""Gamma-distribution significance threshold for (partial) mutual information.

Under independence, the plug-in estimate of I(X,Y|Z) over m samples is
approximately Gamma distributed with shape κ = |Z|(|X|-1)(|Y|-1)/2 and scale
θ = 1/m. Estimates above the (1 - α) quantile are deemed significant.
Setting |Z| = 1 gives the null distribution of unconditional MI.
"""

from dataclasses import dataclass

import numpy as np
import structlog
from numpy.typing import NDArray
from scipy import stats

from pminet.similarity.distances import min_over_conditioning
from pminet.similarity.matrices import SimilarityError

logger = structlog.get_logger(__name__)


class InvalidAlphaError(SimilarityError, ValueError):
    """Raised when a significance level is outside the open interval (0, 1)."""

    pass


@dataclass(frozen=True)
class GammaParams:
    """Shape and scale of the null distribution of a PMI estimate.

    Attributes:
        kappa: Shape, bins_z * (bins_x - 1) * (bins_y - 1) / 2
        theta: Scale, 1 / m
        m: Sample size
        bins_x: Alphabet size of X
        bins_y: Alphabet size of Y
        bins_z: Alphabet size of Z (1 for unconditional MI)
    """

    kappa: float
    theta: float
    m: int
    bins_x: int
    bins_y: int
    bins_z: int

    def __post_init__(self) -> None:
        """Validate that shape and scale agree with the sample size and bins.

        Raises:
            ValueError: If m < 1, a bin count is invalid, or kappa/theta do not match
        """
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.bins_x < 2 or self.bins_y < 2:
            raise ValueError(f"bins_x and bins_y must be >= 2, got {self.bins_x}, {self.bins_y}")
        if self.bins_z < 1:
            raise ValueError(f"bins_z must be >= 1, got {self.bins_z}")
        expected_kappa = self.bins_z * (self.bins_x - 1) * (self.bins_y - 1) / 2
        if not np.isclose(self.kappa, expected_kappa, rtol=0.0, atol=1e-12):
            raise ValueError(f"kappa must be {expected_kappa}, got {self.kappa}")
        if not np.isclose(self.theta, 1.0 / self.m, rtol=1e-12, atol=0.0):
            raise ValueError(f"theta must be 1/m = {1.0 / self.m}, got {self.theta}")

    @classmethod
    def from_bins(cls, m: int, bins_x: int = 4, bins_y: int = 4, bins_z: int = 4) -> "GammaParams":
        """Derive κ and θ from the sample size and alphabet sizes.

        Example:
            >>> GammaParams.from_bins(2500).kappa
            18.0
        """
        return cls(
            kappa=bins_z * (bins_x - 1) * (bins_y - 1) / 2,
            theta=1.0 / m if m >= 1 else float("nan"),
            m=m,
            bins_x=bins_x,
            bins_y=bins_y,
            bins_z=bins_z,
        )


def gamma_threshold(params: GammaParams, alpha: float) -> float:
    """The (1 - alpha) quantile of Gamma(κ, θ).

    Args:
        params: Null distribution parameters
        alpha: Significance level in (0, 1)

    Returns:
        The threshold in nats; it decreases as m or alpha grows

    Raises:
        InvalidAlphaError: If alpha is not in (0, 1)
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidAlphaError(f"alpha must be in (0, 1), got {alpha}")
    return float(stats.gamma.ppf(1.0 - alpha, a=params.kappa, scale=params.theta))


def significance_mask(
    values: NDArray[np.float64], params: GammaParams, alpha: float
) -> NDArray[np.bool_]:
    """True where a PMI value strictly exceeds the Gamma threshold.

    NaN entries (diagonals, degenerate triples) are never significant.
    """
    threshold = gamma_threshold(params, alpha)
    values = np.asarray(values, dtype=np.float64)
    mask = np.zeros(values.shape, dtype=bool)
    np.greater(values, threshold, out=mask, where=~np.isnan(values))
    logger.debug(
        "significance_mask_computed",
        threshold=threshold,
        alpha=alpha,
        significant=int(mask.sum()),
    )
    return mask


def min_pmi_matrix(tensor: NDArray[np.float64]) -> NDArray[np.float64]:
    """min over Z of I(X,Y|Z) for every pair; the diagonal is NaN."""
    minimum = min_over_conditioning(tensor)
    np.fill_diagonal(minimum, np.nan)
    return minimum
