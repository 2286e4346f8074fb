"""Tests for mutual information, partial mutual information and batched estimation."""

import math

import numpy as np
import pytest

from pminet.infotheory import (
    AlphabetConvention,
    ArityError,
    ContingencyTable,
    Estimator,
    StateCodes,
    entropy,
    entropy_vector,
    joint_entropy_matrix,
    mutual_info,
    mutual_info_matrix,
    partial_mutual_info,
    pmi_tensor,
)
from pminet.ingest import DiscreteSeries


def kl_mutual_info(counts: np.ndarray) -> float:
    """Σ p(x,y) ln[p(x,y) / (p(x) p(y))]."""
    p = counts / counts.sum()
    px = p.sum(axis=1)
    py = p.sum(axis=0)
    total = 0.0
    for x in range(p.shape[0]):
        for y in range(p.shape[1]):
            if p[x, y] > 0:
                total += p[x, y] * math.log(p[x, y] / (px[x] * py[y]))
    return total


def conditional_mutual_info(counts: np.ndarray) -> float:
    """Σ_z p(z) Σ_{x,y} p(x,y|z) ln[p(x,y|z) / (p(x|z) p(y|z))]."""
    p = counts / counts.sum()
    total = 0.0
    for z in range(p.shape[2]):
        pz = p[:, :, z].sum()
        if pz == 0:
            continue
        total += pz * kl_mutual_info(counts[:, :, z])
    return total


def random_codes(n: int, m: int, bins: int = 4, seed: int = 0) -> StateCodes:
    rng = np.random.default_rng(seed)
    series = [
        DiscreteSeries(f"T{i}", rng.integers(0, bins, size=m), bins=bins) for i in range(n)
    ]
    return StateCodes.from_series(series)


class TestMutualInfo:
    """Tests for mutual_info."""

    def test_exact_product_table_is_zero(self):
        """Uniform independent counts give zero MI."""
        table = ContingencyTable.from_counts(np.full((4, 4), 5))

        assert mutual_info(table) == pytest.approx(0.0, abs=1e-12)

    def test_identity_coupling(self):
        """X = Y uniform gives ln 4."""
        table = ContingencyTable.from_counts(np.eye(4, dtype=int) * 10)

        assert mutual_info(table) == pytest.approx(math.log(4), abs=1e-12)

    def test_matches_kl_form(self):
        """The entropy form equals the KL double sum."""
        rng = np.random.default_rng(4)
        for _ in range(1000):
            counts = rng.integers(0, 32, size=(4, 4))
            counts[0, 0] += 1
            assert counts.sum() <= 500
            assert mutual_info(ContingencyTable.from_counts(counts)) == pytest.approx(
                kl_mutual_info(counts), abs=1e-10
            )

    def test_bounds_for_plug_in(self):
        """0 <= I(X,Y) <= min(H(X), H(Y)) for the plug-in estimator."""
        rng = np.random.default_rng(8)
        for _ in range(50):
            counts = rng.integers(0, 6, size=(4, 4))
            counts[2, 3] += 1
            table = ContingencyTable.from_counts(counts)
            mi = mutual_info(table)
            h_min = min(entropy(table.marginal([0])), entropy(table.marginal([1])))
            assert -1e-12 <= mi <= h_min + 1e-12

    @pytest.mark.parametrize("estimator", list(Estimator))
    def test_symmetric(self, estimator):
        """Transposing the table leaves MI unchanged for any estimator."""
        counts = np.array([[5, 1, 0, 2], [0, 3, 1, 1], [2, 2, 2, 0], [1, 0, 4, 6]])
        table = ContingencyTable.from_counts(counts)

        assert mutual_info(table, estimator) == pytest.approx(
            mutual_info(table.transpose(), estimator), abs=1e-12
        )

    def test_requires_two_axes(self):
        """A three-variable table is rejected."""
        with pytest.raises(ArityError, match="2-variable table"):
            mutual_info(ContingencyTable.from_counts(np.ones((2, 2, 2), dtype=int)))


class TestPartialMutualInfo:
    """Tests for partial_mutual_info."""

    def test_all_equal_is_zero(self):
        """X = Y = Z gives zero."""
        counts = np.zeros((4, 4, 4), dtype=int)
        for s in range(4):
            counts[s, s, s] = 7

        assert partial_mutual_info(ContingencyTable.from_counts(counts)) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_independent_condition_reduces_to_mi(self):
        """Z independent of (X,Y) in counts gives I(X,Y)."""
        xy = np.array([[6, 1, 0, 2], [1, 4, 1, 0], [0, 2, 5, 1], [3, 0, 1, 7]])
        z = np.array([2, 1, 3, 1])
        counts = xy[:, :, None] * z[None, None, :]

        pmi = partial_mutual_info(ContingencyTable.from_counts(counts))

        assert pmi == pytest.approx(mutual_info(ContingencyTable.from_counts(xy)), abs=1e-12)

    def test_synergy_exceeds_mi(self):
        """Z = (X + Y) mod 4 gives I(X,Y) = 0 and I(X,Y|Z) = ln 4."""
        counts = np.zeros((4, 4, 4), dtype=int)
        for x in range(4):
            for y in range(4):
                counts[x, y, (x + y) % 4] = 1
        table = ContingencyTable.from_counts(counts)

        assert mutual_info(table.marginal([0, 1])) == pytest.approx(0.0, abs=1e-12)
        assert partial_mutual_info(table) == pytest.approx(math.log(4), abs=1e-12)

    def test_matches_conditional_double_sum(self):
        """The entropy form equals the direct conditional sum."""
        rng = np.random.default_rng(12)
        for _ in range(500):
            counts = rng.integers(0, 8, size=(4, 4, 4))
            counts[0, 0, 0] += 1
            assert partial_mutual_info(ContingencyTable.from_counts(counts)) == pytest.approx(
                conditional_mutual_info(counts), abs=1e-10
            )

    @pytest.mark.parametrize("estimator", list(Estimator))
    def test_symmetric_in_x_and_y(self, estimator):
        """I(X,Y|Z) == I(Y,X|Z) for any estimator."""
        rng = np.random.default_rng(1)
        table = ContingencyTable.from_counts(rng.integers(0, 5, size=(4, 4, 4)) + 1)

        swapped = table.transpose([1, 0, 2])

        assert partial_mutual_info(table, estimator) == pytest.approx(
            partial_mutual_info(swapped, estimator), abs=1e-12
        )

    def test_non_negative_for_plug_in(self):
        """The plug-in PMI is never negative beyond rounding."""
        rng = np.random.default_rng(6)
        for _ in range(30):
            counts = rng.integers(0, 4, size=(4, 4, 4))
            counts[1, 1, 1] += 1
            assert partial_mutual_info(ContingencyTable.from_counts(counts)) >= -1e-12

    def test_requires_three_axes(self):
        """A two-variable table is rejected."""
        with pytest.raises(ArityError, match="3-variable table"):
            partial_mutual_info(ContingencyTable.from_counts(np.ones((2, 2), dtype=int)))


class TestStateCodes:
    """Tests for StateCodes."""

    def test_from_series(self):
        """Series are packed row by row."""
        codes = random_codes(3, 20)

        assert codes.tickers == ("T0", "T1", "T2")
        assert codes.n == 3
        assert codes.m == 20
        assert codes.table(0, 1).dims == (4, 4)

    def test_rejects_mixed_bins(self):
        """Every series must share one alphabet."""
        a = DiscreteSeries("A", np.array([0, 1, 2, 3]), bins=4)
        b = DiscreteSeries("B", np.array([0, 1, 0, 1]), bins=2)

        with pytest.raises(ValueError, match="same number of bins"):
            StateCodes.from_series([a, b])

    def test_rejects_unaligned(self):
        """Every series must have the same length."""
        a = DiscreteSeries("A", np.array([0, 1, 2, 3]))
        b = DiscreteSeries("B", np.array([0, 1, 2]))

        with pytest.raises(ValueError, match="aligned"):
            StateCodes.from_series([a, b])


class TestBatchedEstimation:
    """Tests for entropy_vector, joint_entropy_matrix, mutual_info_matrix and pmi_tensor."""

    @pytest.mark.parametrize("estimator", list(Estimator))
    @pytest.mark.parametrize("convention", list(AlphabetConvention))
    def test_entropies_match_tables(self, estimator, convention):
        """Batched entropies equal the per-table estimates."""
        codes = random_codes(4, 60, seed=3)

        h = entropy_vector(codes, estimator, convention)
        h_joint = joint_entropy_matrix(codes, estimator, convention)

        for i in range(codes.n):
            assert h[i] == pytest.approx(entropy(codes.table(i), estimator, convention), abs=1e-12)
            for j in range(codes.n):
                expected = entropy(codes.table(i, j), estimator, convention)
                assert h_joint[i, j] == pytest.approx(expected, abs=1e-12)
        np.testing.assert_array_equal(h_joint, h_joint.T)

    def test_mutual_info_matrix(self):
        """Pairwise MI matches mutual_info with a NaN diagonal."""
        codes = random_codes(4, 80, seed=5)

        mi = mutual_info_matrix(codes)

        assert np.all(np.isnan(np.diag(mi)))
        assert mi[0, 2] == pytest.approx(mutual_info(codes.table(0, 2)), abs=1e-12)

    @pytest.mark.parametrize("estimator", list(Estimator))
    def test_pmi_tensor_matches_tables(self, estimator):
        """Every off-diagonal entry equals partial_mutual_info of its triple."""
        codes = random_codes(5, 70, seed=7)

        tensor = pmi_tensor(codes, estimator)

        for i in range(5):
            for j in range(5):
                for k in range(5):
                    if len({i, j, k}) < 3:
                        assert np.isnan(tensor[i, j, k])
                    else:
                        expected = partial_mutual_info(codes.table(i, j, k), estimator)
                        assert tensor[i, j, k] == pytest.approx(expected, abs=1e-10)

    def test_pmi_tensor_is_symmetric(self):
        """The tensor is exactly symmetric in its first two axes."""
        codes = random_codes(6, 50, seed=2)

        tensor = pmi_tensor(codes)

        np.testing.assert_array_equal(tensor, tensor.transpose(1, 0, 2))

    def test_progress_callback(self):
        """progress receives the final pair count."""
        codes = random_codes(4, 30)
        calls: list[tuple[int, int]] = []

        pmi_tensor(codes, progress=lambda done, total: calls.append((done, total)))

        assert calls[-1] == (6, 6)
