"""Shannon entropy estimators.

Two estimators are provided, both in nats:

- ``ml``: the plug-in (maximum likelihood) estimate -Σ p(x) ln p(x) with
  p(x) = #(x)/m. Empty cells contribute nothing.
- ``sg``: the Schurmann-Grassberger estimate of the entropy of a Dirichlet
  distribution with concentration N per cell::

      H = 1/(m + |χ|N) Σ_x (#(x) + N) (ψ(m + |χ|N + 1) - ψ(#(x) + N + 1))

  where ψ is the digamma function and the prior is N = 1/|χ|.

For a joint table the alphabet |χ| in the sum is always the number of cells.
The alphabet convention decides the prior: ``joint`` (default) takes
N = 1/(number of cells); ``per-axis`` keeps the single-variable prior
N = 1/(cells per axis), the geometric mean of the axis sizes.

The batched helper :func:`entropy_of_counts` reduces over the last axis of a
count array, which is what the matrix builders use to estimate thousands of
small tables at once.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import NDArray
from scipy.special import digamma, entr

from pminet.infotheory.tables import ContingencyTable, EmptyTableError


class Estimator(Enum):
    """Entropy estimator.

    Attributes:
        ML: Plug-in maximum likelihood estimate
        SG: Schurmann-Grassberger Dirichlet estimate
    """

    ML = "ml"
    SG = "sg"


class AlphabetConvention(Enum):
    """How the SG prior is chosen for joint tables.

    Attributes:
        JOINT: N = 1/|χ| with |χ| the flattened joint alphabet (e.g. 64 for 4x4x4)
        PER_AXIS: N = 1/|χ_axis|, the single-variable prior of each axis
    """

    JOINT = "joint"
    PER_AXIS = "per-axis"


@dataclass(frozen=True)
class EntropyEstimate:
    """An entropy value together with the estimator that produced it.

    Attributes:
        value: Entropy in nats
        estimator: Estimator used
    """

    value: float
    estimator: Estimator

    def __post_init__(self) -> None:
        """Check the plug-in estimate is non-negative.

        Raises:
            ValueError: If an ml estimate is negative beyond rounding
        """
        if self.estimator is Estimator.ML and self.value < -1e-12:
            raise ValueError(f"ml entropy must be >= 0, got {self.value}")


def sg_prior(dims: tuple[int, ...], convention: AlphabetConvention) -> float:
    """Dirichlet concentration per cell for a table with the given axis sizes.

    Args:
        dims: Alphabet size of each axis
        convention: Alphabet convention

    Returns:
        The prior N
    """
    cells = math.prod(dims)
    if convention is AlphabetConvention.JOINT:
        return 1.0 / cells
    return 1.0 / cells ** (1.0 / len(dims))


def entropy_of_counts(
    counts: NDArray[np.integer],
    estimator: Estimator,
    prior: float | None = None,
) -> NDArray[np.float64]:
    """Estimate entropies of many tables at once.

    Args:
        counts: Count array whose last axis runs over the (flattened) alphabet
        estimator: Estimator to apply
        prior: SG concentration per cell; defaults to 1/(alphabet size)

    Returns:
        Array of entropies with the last axis reduced

    Raises:
        EmptyTableError: If any table has zero total count
    """
    n = np.asarray(counts, dtype=np.float64)
    m = n.sum(axis=-1)
    if np.any(m <= 0):
        raise EmptyTableError("entropy of an empty table is undefined (m == 0)")

    if estimator is Estimator.ML:
        return entr(n / m[..., None]).sum(axis=-1)

    cells = n.shape[-1]
    concentration = 1.0 / cells if prior is None else prior
    total = m + cells * concentration
    psi_total = digamma(total + 1.0)
    weighted = (n + concentration) * (psi_total[..., None] - digamma(n + concentration + 1.0))
    return weighted.sum(axis=-1) / total


def entropy_ml(table: ContingencyTable) -> EntropyEstimate:
    """Plug-in entropy estimate of a table's flattened distribution.

    Args:
        table: Contingency table with m >= 1

    Returns:
        EntropyEstimate in [0, ln(alphabet size)]

    Raises:
        EmptyTableError: If the table is empty

    Example:
        >>> entropy_ml(ContingencyTable.from_counts([4, 4, 4, 4])).value
        1.3862943611198906
    """
    value = float(entropy_of_counts(table.flat(), Estimator.ML))
    return EntropyEstimate(value=max(value, 0.0), estimator=Estimator.ML)


def entropy_sg(
    table: ContingencyTable,
    convention: AlphabetConvention = AlphabetConvention.JOINT,
) -> EntropyEstimate:
    """Schurmann-Grassberger entropy estimate of a table's flattened distribution.

    Args:
        table: Contingency table with m >= 1
        convention: Alphabet convention for the prior

    Returns:
        EntropyEstimate in nats

    Raises:
        EmptyTableError: If the table is empty
    """
    prior = sg_prior(table.dims, convention)
    value = float(entropy_of_counts(table.flat(), Estimator.SG, prior=prior))
    return EntropyEstimate(value=value, estimator=Estimator.SG)


def entropy(
    table: ContingencyTable,
    estimator: Estimator = Estimator.ML,
    convention: AlphabetConvention = AlphabetConvention.JOINT,
) -> float:
    """Entropy of a table with the chosen estimator, in nats."""
    if estimator is Estimator.ML:
        return entropy_ml(table).value
    return entropy_sg(table, convention).value
