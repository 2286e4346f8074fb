"""Mutual information and partial mutual information.

    I(X,Y)   = H(X) + H(Y) - H(X,Y)
    I(X,Y|Z) = H(X,Z) + H(Y,Z) - H(Z) - H(X,Y,Z)

Both are assembled from entropies of marginal tables of one joint table, so
any estimator can be plugged in. With the plug-in estimator MI is bounded by
0 <= I(X,Y) <= min(H(X), H(Y)); PMI is non-negative but may exceed MI when Z
and the pair interact synergistically.

The matrix builders need I(Xi,Xj|Xk) for every ordered triple of a universe
of N tickers. :class:`StateCodes` packs all discrete series into one integer
array once; :func:`entropy_vector` and :func:`joint_entropy_matrix` estimate
every one- and two-variable entropy once; :func:`pmi_tensor` then only has to
histogram the three-variable tables, one pair at a time with all k at once.
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
import structlog
from numpy.typing import NDArray

from pminet.infotheory.entropy import (
    AlphabetConvention,
    Estimator,
    entropy,
    entropy_of_counts,
    sg_prior,
)
from pminet.infotheory.tables import ArityError, ContingencyTable
from pminet.ingest.transform import DiscreteSeries

logger = structlog.get_logger(__name__)


def mutual_info(
    xy: ContingencyTable,
    estimator: Estimator = Estimator.ML,
    convention: AlphabetConvention = AlphabetConvention.JOINT,
) -> float:
    """Mutual information of a two-variable table.

    Args:
        xy: Joint table with axes (X, Y)
        estimator: Entropy estimator
        convention: Alphabet convention for the SG prior

    Returns:
        I(X,Y) in nats

    Raises:
        ArityError: If the table does not have exactly two axes
    """
    if xy.arity != 2:
        raise ArityError(f"mutual information needs a 2-variable table, got arity {xy.arity}")
    h_x = entropy(xy.marginal([0]), estimator, convention)
    h_y = entropy(xy.marginal([1]), estimator, convention)
    h_xy = entropy(xy, estimator, convention)
    return h_x + h_y - h_xy


def partial_mutual_info(
    xyz: ContingencyTable,
    estimator: Estimator = Estimator.ML,
    convention: AlphabetConvention = AlphabetConvention.JOINT,
) -> float:
    """Partial mutual information I(X,Y|Z) of a three-variable table.

    Args:
        xyz: Joint table with axes (X, Y, Z)
        estimator: Entropy estimator
        convention: Alphabet convention for the SG prior

    Returns:
        I(X,Y|Z) in nats

    Raises:
        ArityError: If the table does not have exactly three axes
    """
    if xyz.arity != 3:
        raise ArityError(
            f"partial mutual information needs a 3-variable table, got arity {xyz.arity}"
        )
    h_xz = entropy(xyz.marginal([0, 2]), estimator, convention)
    h_yz = entropy(xyz.marginal([1, 2]), estimator, convention)
    h_z = entropy(xyz.marginal([2]), estimator, convention)
    h_xyz = entropy(xyz, estimator, convention)
    return h_xz + h_yz - h_z - h_xyz


@dataclass(frozen=True, eq=False)
class StateCodes:
    """Discrete series of a whole universe packed into one integer array.

    Attributes:
        tickers: Ticker of each row
        codes: Array of shape (N, m) with states in [0, bins - 1]
        bins: Alphabet size shared by every series
    """

    tickers: tuple[str, ...]
    codes: NDArray[np.int64]
    bins: int

    def __post_init__(self) -> None:
        """Validate the packed shape.

        Raises:
            ValueError: If the row count does not match the tickers
        """
        if self.codes.ndim != 2 or self.codes.shape[0] != len(self.tickers):
            raise ValueError("codes must have one row per ticker")

    @classmethod
    def from_series(cls, series: Sequence[DiscreteSeries]) -> "StateCodes":
        """Pack aligned discrete series.

        Raises:
            ValueError: If the series are empty, differ in length or in bins
        """
        if not series:
            raise ValueError("at least one discrete series is required")
        if len({len(s) for s in series}) != 1:
            raise ValueError("discrete series must be aligned (equal lengths)")
        if len({s.bins for s in series}) != 1:
            raise ValueError("discrete series must share the same number of bins")
        codes = np.stack([np.asarray(s.states, dtype=np.int64) for s in series])
        return cls(tickers=tuple(s.ticker for s in series), codes=codes, bins=series[0].bins)

    @property
    def n(self) -> int:
        """Number of tickers."""
        return int(self.codes.shape[0])

    @property
    def m(self) -> int:
        """Sample length."""
        return int(self.codes.shape[1])

    def table(self, *indices: int) -> ContingencyTable:
        """Contingency table of the listed rows, in argument order."""
        return ContingencyTable.from_states(*(self.codes[i] for i in indices), bins=self.bins)


def entropy_vector(
    codes: StateCodes,
    estimator: Estimator = Estimator.ML,
    convention: AlphabetConvention = AlphabetConvention.JOINT,
) -> NDArray[np.float64]:
    """H(Xi) for every ticker."""
    b = codes.bins
    offsets = (np.arange(codes.n, dtype=np.int64) * b)[:, None]
    counts = np.bincount((codes.codes + offsets).ravel(), minlength=codes.n * b)
    prior = sg_prior((b,), convention)
    return entropy_of_counts(counts.reshape(codes.n, b), estimator, prior)


def joint_entropy_matrix(
    codes: StateCodes,
    estimator: Estimator = Estimator.ML,
    convention: AlphabetConvention = AlphabetConvention.JOINT,
) -> NDArray[np.float64]:
    """H(Xi,Xj) for every pair, exactly symmetric; the diagonal holds H(Xi) from the 2-D table."""
    n, b = codes.n, codes.bins
    prior = sg_prior((b, b), convention)
    offsets = (np.arange(n, dtype=np.int64) * b * b)[:, None]
    joint = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        pair_codes = codes.codes[i][None, :] * b + codes.codes + offsets
        counts = np.bincount(pair_codes.ravel(), minlength=n * b * b).reshape(n, b * b)
        joint[i] = entropy_of_counts(counts, estimator, prior)
    upper = np.triu(joint)
    return upper + np.triu(joint, 1).T


def mutual_info_matrix(
    codes: StateCodes,
    estimator: Estimator = Estimator.ML,
    convention: AlphabetConvention = AlphabetConvention.JOINT,
    h: NDArray[np.float64] | None = None,
    h_joint: NDArray[np.float64] | None = None,
) -> NDArray[np.float64]:
    """I(Xi,Xj) for every pair; the diagonal is NaN."""
    h = entropy_vector(codes, estimator, convention) if h is None else h
    h_joint = joint_entropy_matrix(codes, estimator, convention) if h_joint is None else h_joint
    mi = h[:, None] + h[None, :] - h_joint
    np.fill_diagonal(mi, np.nan)
    return mi


def pmi_tensor(
    codes: StateCodes,
    estimator: Estimator = Estimator.ML,
    convention: AlphabetConvention = AlphabetConvention.JOINT,
    h: NDArray[np.float64] | None = None,
    h_joint: NDArray[np.float64] | None = None,
    progress: Callable[[int, int], None] | None = None,
) -> NDArray[np.float64]:
    """I(Xi,Xj|Xk) for every ordered triple of distinct tickers.

    Each unordered pair is estimated once and mirrored, so the result is
    exactly symmetric in its first two axes. Entries where k equals i or j,
    or i equals j, are NaN.

    Args:
        codes: Packed discrete series
        estimator: Entropy estimator
        convention: Alphabet convention for the SG prior
        h: Precomputed entropy_vector, if available
        h_joint: Precomputed joint_entropy_matrix, if available
        progress: Optional callback receiving (pairs done, pairs total)

    Returns:
        Array of shape (N, N, N)
    """
    n, b = codes.n, codes.bins
    h = entropy_vector(codes, estimator, convention) if h is None else h
    h_joint = joint_entropy_matrix(codes, estimator, convention) if h_joint is None else h_joint
    prior = sg_prior((b, b, b), convention)
    cube = b * b * b
    offsets = (np.arange(n, dtype=np.int64) * cube)[:, None]

    tensor = np.full((n, n, n), np.nan, dtype=np.float64)
    total = n * (n - 1) // 2
    done = 0
    log = logger.bind(n_tickers=n, samples=codes.m, estimator=estimator.value)
    log.debug("pmi_tensor_started", pairs=total)
    for i in range(n):
        for j in range(i + 1, n):
            xy = codes.codes[i] * b + codes.codes[j]
            triple = (xy * b)[None, :] + codes.codes + offsets
            counts = np.bincount(triple.ravel(), minlength=n * cube).reshape(n, cube)
            h_xyz = entropy_of_counts(counts, estimator, prior)
            values = h_joint[i] + h_joint[j] - h - h_xyz
            values[[i, j]] = np.nan
            tensor[i, j] = values
            tensor[j, i] = values
            done += 1
        if progress is not None:
            progress(done, total)
    log.debug("pmi_tensor_finished", pairs=total)
    return tensor
