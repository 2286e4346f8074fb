"""Contingency tables over one to three discrete variables.

Every entropy estimate in this package is computed from a joint count table.
Marginal tables are obtained by summing axes out of the joint table, so the
counts seen by H(X), H(X,Z) and H(X,Y,Z) are always mutually consistent.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from pminet.ingest.transform import DiscreteSeries


class EstimationError(Exception):
    """Base exception for information-theoretic estimation errors."""

    pass


class EmptyTableError(EstimationError):
    """Raised when an estimate is requested from a table with no observations."""

    pass


class ArityError(EstimationError):
    """Raised when a table has the wrong number of variables for an operation."""

    pass


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """Joint count table over 1-3 discrete variables.

    Attributes:
        counts: Dense non-negative integer array; axis i has one entry per
            state of variable i

    Example:
        >>> table = ContingencyTable.from_states(np.array([0, 1, 1]), np.array([1, 1, 0]), bins=2)
        >>> table.dims
        (2, 2)
        >>> table.m
        3
    """

    counts: NDArray[np.int64]

    def __post_init__(self) -> None:
        """Validate the table shape and counts.

        Raises:
            ArityError: If the table has fewer than 1 or more than 3 axes
            ValueError: If counts are negative or not integers
        """
        if not 1 <= self.counts.ndim <= 3:
            raise ArityError(f"table arity must be 1, 2 or 3, got {self.counts.ndim}")
        if not np.issubdtype(self.counts.dtype, np.integer):
            raise ValueError(f"counts must be integers, got dtype {self.counts.dtype}")
        if np.any(self.counts < 0):
            raise ValueError("counts must be >= 0")

    @classmethod
    def from_counts(cls, counts: ArrayLike) -> "ContingencyTable":
        """Build a table from an array-like of counts."""
        return cls(np.asarray(counts, dtype=np.int64))

    @classmethod
    def from_states(
        cls,
        *series: NDArray[np.integer] | DiscreteSeries,
        bins: int | Sequence[int] | None = None,
    ) -> "ContingencyTable":
        """Count joint occurrences of aligned discrete series.

        Args:
            *series: One to three state arrays (or DiscreteSeries) of equal length
            bins: Alphabet size per axis; a single int applies to every axis.
                Defaults to each DiscreteSeries' own bins, or max state + 1.

        Returns:
            ContingencyTable with one axis per series, in argument order

        Raises:
            ArityError: If not 1-3 series are given
            ValueError: If the series lengths differ
        """
        if not 1 <= len(series) <= 3:
            raise ArityError(f"table arity must be 1, 2 or 3, got {len(series)}")
        arrays = [np.asarray(s.states if isinstance(s, DiscreteSeries) else s) for s in series]
        if len({len(a) for a in arrays}) != 1:
            raise ValueError("discrete series must have equal lengths")

        if bins is None:
            dims = tuple(
                s.bins if isinstance(s, DiscreteSeries) else int(a.max(initial=0)) + 1
                for s, a in zip(series, arrays, strict=True)
            )
        elif isinstance(bins, int):
            dims = (bins,) * len(arrays)
        else:
            dims = tuple(bins)

        codes = np.ravel_multi_index(tuple(arrays), dims)
        counts = np.bincount(codes, minlength=math.prod(dims)).reshape(dims)
        return cls(counts.astype(np.int64))

    @property
    def arity(self) -> int:
        """Number of variables."""
        return self.counts.ndim

    @property
    def dims(self) -> tuple[int, ...]:
        """Alphabet size of each axis."""
        return tuple(int(d) for d in self.counts.shape)

    @property
    def m(self) -> int:
        """Sample size (total count)."""
        return int(self.counts.sum())

    @property
    def alphabet_size(self) -> int:
        """Size of the flattened joint alphabet."""
        return math.prod(self.dims)

    def marginal(self, axes: Sequence[int]) -> "ContingencyTable":
        """Sum out every axis not listed, keeping the listed axes in their original order.

        Args:
            axes: Axes to keep

        Returns:
            The marginal table
        """
        keep = sorted(set(axes))
        drop = tuple(a for a in range(self.arity) if a not in keep)
        return ContingencyTable(self.counts.sum(axis=drop) if drop else self.counts.copy())

    def transpose(self, order: Sequence[int] | None = None) -> "ContingencyTable":
        """Permute the axes (reverse them by default)."""
        return ContingencyTable(np.transpose(self.counts, axes=order))

    def flat(self) -> NDArray[np.int64]:
        """Counts over the flattened joint alphabet."""
        return self.counts.reshape(-1)
