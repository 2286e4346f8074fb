"""Tests for contingency tables and entropy estimators."""

import math

import numpy as np
import pytest

from pminet.infotheory import (
    AlphabetConvention,
    ArityError,
    ContingencyTable,
    EmptyTableError,
    EntropyEstimate,
    Estimator,
    entropy,
    entropy_ml,
    entropy_of_counts,
    entropy_sg,
    sg_prior,
)
from pminet.ingest import DiscreteSeries


def digamma_oracle(x: float) -> float:
    """Digamma by upward recurrence and the asymptotic series."""
    result = 0.0
    while x < 10.0:
        result -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = inv2 * (
        1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 / 132)))
    )
    return result + math.log(x) - 0.5 / x - series


def sg_oracle(counts: list[int], prior: float) -> float:
    m = sum(counts)
    total = m + len(counts) * prior
    return sum(
        (c + prior) * (digamma_oracle(total + 1) - digamma_oracle(c + prior + 1)) for c in counts
    ) / total


class TestDigammaOracle:
    """Sanity checks of the test oracle itself."""

    def test_known_values(self):
        """ψ(1) = -γ and ψ(1/2) = -γ - 2 ln 2."""
        gamma = 0.5772156649015329
        assert digamma_oracle(1.0) == pytest.approx(-gamma, abs=1e-13)
        assert digamma_oracle(0.5) == pytest.approx(-gamma - 2 * math.log(2), abs=1e-13)


class TestContingencyTable:
    """Tests for ContingencyTable."""

    def test_from_states(self):
        """Joint occurrences are counted per cell."""
        table = ContingencyTable.from_states(np.array([0, 1, 1]), np.array([1, 1, 0]), bins=2)

        assert table.dims == (2, 2)
        assert table.m == 3
        np.testing.assert_array_equal(table.counts, [[0, 1], [1, 1]])

    def test_from_discrete_series_uses_their_bins(self):
        """DiscreteSeries contribute their own alphabet size."""
        series = DiscreteSeries("X", np.array([0, 1, 0]), bins=4)

        table = ContingencyTable.from_states(series)

        assert table.dims == (4,)
        assert table.alphabet_size == 4

    def test_marginal_sums_out_other_axes(self):
        """marginal keeps the listed axes in their original order."""
        counts = np.arange(24).reshape(2, 3, 4)
        table = ContingencyTable.from_counts(counts)

        np.testing.assert_array_equal(table.marginal([2, 0]).counts, counts.sum(axis=1))
        assert table.marginal([1]).m == table.m

    def test_transpose(self):
        """transpose reverses the axes by default."""
        table = ContingencyTable.from_counts([[1, 2], [3, 4]])

        np.testing.assert_array_equal(table.transpose().counts, [[1, 3], [2, 4]])

    def test_rejects_four_axes(self):
        """Tables have one to three axes."""
        with pytest.raises(ArityError, match="arity must be 1, 2 or 3"):
            ContingencyTable.from_counts(np.ones((2, 2, 2, 2), dtype=int))

    def test_rejects_negative_counts(self):
        """Counts cannot be negative."""
        with pytest.raises(ValueError, match="counts must be >= 0"):
            ContingencyTable.from_counts([1, -1])

    def test_rejects_unequal_lengths(self):
        """Series in one table must be aligned."""
        with pytest.raises(ValueError, match="equal lengths"):
            ContingencyTable.from_states(np.array([0, 1]), np.array([0]), bins=2)


class TestEntropyMl:
    """Tests for the plug-in estimator."""

    def test_uniform(self):
        """Uniform counts give ln 4."""
        assert entropy_ml(ContingencyTable.from_counts([4, 4, 4, 4])).value == pytest.approx(
            math.log(4), abs=1e-12
        )

    def test_deterministic(self):
        """All mass in one cell gives 0."""
        assert entropy_ml(ContingencyTable.from_counts([16, 0, 0, 0])).value == 0.0

    def test_skewed(self):
        """[8,4,2,2] matches the direct sum."""
        result = entropy_ml(ContingencyTable.from_counts([8, 4, 2, 2]))

        expected = -sum(p * math.log(p) for p in (0.5, 0.25, 0.125, 0.125))
        assert result.value == pytest.approx(expected, abs=1e-12)
        assert result.value == pytest.approx(1.21301, abs=1e-5)
        assert result.estimator is Estimator.ML

    def test_bounded_by_log_alphabet(self):
        """The plug-in entropy never exceeds ln of the alphabet size."""
        rng = np.random.default_rng(5)
        for _ in range(50):
            counts = rng.integers(0, 20, size=(4, 4))
            counts[0, 0] += 1
            value = entropy_ml(ContingencyTable.from_counts(counts)).value
            assert 0.0 <= value <= math.log(16) + 1e-12

    def test_empty_table(self):
        """m == 0 is an error."""
        with pytest.raises(EmptyTableError, match="m == 0"):
            entropy_ml(ContingencyTable.from_counts([0, 0]))

    def test_negative_ml_estimate_rejected(self):
        """EntropyEstimate refuses negative plug-in values."""
        with pytest.raises(ValueError, match="ml entropy must be >= 0"):
            EntropyEstimate(value=-0.1, estimator=Estimator.ML)


class TestEntropySg:
    """Tests for the Schurmann-Grassberger estimator."""

    def test_uniform(self):
        """[4,4,4,4] with N=1/4 reduces to ψ(18) - ψ(5.25)."""
        result = entropy_sg(ContingencyTable.from_counts([4, 4, 4, 4]))

        assert result.value == pytest.approx(
            digamma_oracle(18) - digamma_oracle(5.25), rel=1e-12
        )
        assert result.estimator is Estimator.SG

    def test_single_symbol(self):
        """A one-symbol alphabet has zero entropy."""
        assert entropy_sg(ContingencyTable.from_counts([7])).value == pytest.approx(0.0, abs=1e-14)

    def test_one_observation(self):
        """[1, 0] matches the digamma oracle."""
        expected = 0.5 * (
            1.5 * (digamma_oracle(3) - digamma_oracle(2.5))
            + 0.5 * (digamma_oracle(3) - digamma_oracle(1.5))
        )

        assert entropy_sg(ContingencyTable.from_counts([1, 0])).value == pytest.approx(
            expected, rel=1e-12
        )

    def test_random_tables_match_oracle(self):
        """Joint tables use the flattened alphabet for the prior."""
        rng = np.random.default_rng(9)
        for _ in range(100):
            counts = rng.integers(0, 10, size=(4, 4))
            counts[1, 2] += 1
            table = ContingencyTable.from_counts(counts)
            expected = sg_oracle(counts.ravel().tolist(), 1.0 / 16)
            assert entropy_sg(table).value == pytest.approx(expected, abs=1e-12)

    def test_converges_to_log_alphabet(self):
        """A large uniform 4-state sample estimates ln 4 within 0.01."""
        rng = np.random.default_rng(21)
        table = ContingencyTable.from_states(rng.integers(0, 4, size=100_000), bins=4)

        assert abs(entropy_sg(table).value - math.log(4)) < 0.01

    def test_per_axis_convention(self):
        """per-axis keeps the single-variable prior for joint tables."""
        counts = np.array([[3, 1], [0, 5]])
        table = ContingencyTable.from_counts(counts)

        value = entropy_sg(table, AlphabetConvention.PER_AXIS).value

        assert value == pytest.approx(sg_oracle(counts.ravel().tolist(), 0.5), rel=1e-11)

    def test_sg_exceeds_ml_on_small_samples(self):
        """The Dirichlet prior pulls small-sample estimates upward."""
        table = ContingencyTable.from_counts([3, 1, 0, 0])

        assert entropy_sg(table).value > entropy_ml(table).value


class TestSgPrior:
    """Tests for sg_prior."""

    def test_joint(self):
        """The joint prior is one over the number of cells."""
        assert sg_prior((4, 4, 4), AlphabetConvention.JOINT) == pytest.approx(1 / 64)

    def test_per_axis(self):
        """The per-axis prior is one over the axis size."""
        assert sg_prior((4, 4), AlphabetConvention.PER_AXIS) == pytest.approx(0.25)
        assert sg_prior((4,), AlphabetConvention.PER_AXIS) == pytest.approx(0.25)


class TestEntropyDispatch:
    """Tests for entropy and entropy_of_counts."""

    @pytest.mark.parametrize("estimator", list(Estimator))
    def test_marginal_consistency(self, estimator):
        """A marginal table and a summed-out count array give the same entropy."""
        rng = np.random.default_rng(2)
        counts = rng.integers(0, 9, size=(4, 4, 4))
        table = ContingencyTable.from_counts(counts)

        marginal = entropy(table.marginal([0, 2]), estimator)
        direct = entropy(ContingencyTable.from_counts(counts.sum(axis=1)), estimator)

        assert marginal == pytest.approx(direct, abs=1e-12)

    def test_batched_matches_single(self):
        """entropy_of_counts reduces the last axis of many tables."""
        batch = np.array([[4, 4, 4, 4], [8, 4, 2, 2]])

        values = entropy_of_counts(batch, Estimator.ML)

        assert values[0] == pytest.approx(math.log(4))
        assert values[1] == pytest.approx(1.75 * math.log(2))

    def test_batched_rejects_empty_row(self):
        """One empty table in a batch is an error."""
        with pytest.raises(EmptyTableError):
            entropy_of_counts(np.array([[1, 2], [0, 0]]), Estimator.SG)
