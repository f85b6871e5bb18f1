"""Core statistics primitives: fitting, subsampling, splitting, softmax."""

import numpy as np
import pytest

from ganmetrics import (
    DegenerateInputError,
    GaussianStats,
    InputError,
    InsufficientSamplesError,
    as_feature_matrix,
    as_logit_matrix,
    fit_gaussian,
    softmax_rows,
    split_k,
    subsample,
)
from ganmetrics.bias import SyntheticGaussianSpec, synth_features


class TestValidators:
    def test_rejects_non_finite_with_coordinates(self):
        bad = np.ones((3, 2))
        bad[1, 0] = np.nan
        with pytest.raises(InputError, match="row 1, column 0"):
            as_feature_matrix(bad)

    def test_rejects_wrong_rank(self):
        with pytest.raises(InputError):
            as_feature_matrix(np.ones(4))

    def test_rejects_empty(self):
        with pytest.raises(InputError):
            as_feature_matrix(np.ones((0, 3)))

    def test_logits_need_two_classes(self):
        with pytest.raises(InputError):
            as_logit_matrix(np.ones((4, 1)))

    def test_preserves_float32(self):
        arr = np.ones((2, 2), dtype=np.float32)
        assert as_feature_matrix(arr).dtype == np.float32

    def test_lists_become_float64(self):
        assert as_feature_matrix([[1, 2], [3, 4]]).dtype == np.float64


class TestGaussianStats:
    def test_symmetrizes_covariance(self):
        cov = np.array([[1.0, 0.3], [0.1, 2.0]])
        stats = GaussianStats(np.zeros(2), cov)
        assert np.array_equal(stats.cov, stats.cov.T)
        assert stats.cov[0, 1] == pytest.approx(0.2)

    def test_rejects_negative_diagonal(self):
        with pytest.raises(InputError):
            GaussianStats(np.zeros(2), np.diag([1.0, -0.5]))

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(InputError):
            GaussianStats(np.zeros(3), np.eye(2))


class TestFitGaussian:
    def test_two_point_variance(self):
        stats = fit_gaussian(np.array([[0.0], [2.0]]))
        assert np.array_equal(stats.mean, [1.0])
        assert np.array_equal(stats.cov, [[2.0]])

    def test_constant_data_gives_zero_covariance(self):
        row = np.array([3.0, -1.0, 0.5])
        stats = fit_gaussian(np.tile(row, (6, 1)))
        assert np.array_equal(stats.mean, row)
        assert np.allclose(stats.cov, 0.0, atol=1e-14)

    def test_monte_carlo_recovery(self):
        # 1e5 draws from a standard 4-dim Gaussian; 3/sqrt(n) ~ 0.0095.
        feats = synth_features(SyntheticGaussianSpec(n=100_000, d=4, seed=7))
        stats = fit_gaussian(feats)
        assert np.all(np.abs(stats.mean) < 0.02)
        assert np.all(np.abs(stats.cov - np.eye(4)) < 0.05)

    def test_single_row_is_degenerate(self):
        with pytest.raises(DegenerateInputError):
            fit_gaussian(np.ones((1, 3)))

    def test_matches_numpy_cov(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=(257, 5))
        stats = fit_gaussian(x)
        assert np.allclose(stats.mean, x.mean(axis=0), rtol=1e-13, atol=1e-13)
        assert np.allclose(stats.cov, np.cov(x, rowvar=False), rtol=1e-12, atol=1e-13)

    def test_permutation_invariance_within_tolerance(self):
        rng = np.random.default_rng(11)
        x = rng.normal(size=(400, 6)) * 3.0 + 1.0
        shuffled = x[rng.permutation(400)]
        a, b = fit_gaussian(x), fit_gaussian(shuffled)
        assert np.allclose(a.mean, b.mean, rtol=1e-12, atol=1e-12)
        assert np.allclose(a.cov, b.cov, rtol=1e-12, atol=1e-12)

    def test_float32_input_accumulates_in_float64(self):
        x32 = (np.arange(12.0, dtype=np.float32) / 7).reshape(6, 2)
        stats = fit_gaussian(x32)
        assert stats.mean.dtype == np.float64
        exact = fit_gaussian(x32.astype(np.float64))
        assert np.allclose(stats.cov, exact.cov, rtol=1e-12)


class TestSubsample:
    def test_full_take_is_a_permutation(self):
        x = np.arange(10.0).reshape(5, 2)
        out = subsample(x, 5, seed=42)
        assert sorted(map(tuple, out)) == sorted(map(tuple, x))

    def test_determinism(self):
        x = np.arange(10.0).reshape(5, 2)
        a = subsample(x, 2, seed=0)
        b = subsample(x, 2, seed=0)
        assert np.array_equal(a, b)

    def test_output_is_submultiset_of_input(self):
        x = np.arange(30.0).reshape(15, 2)
        for seed in range(5):
            rows = {tuple(r) for r in subsample(x, 7, seed=seed)}
            assert rows <= {tuple(r) for r in x}
            assert len(rows) == 7

    def test_never_reuses_rows(self):
        with pytest.raises(InsufficientSamplesError):
            subsample(np.ones((3, 1)), 4, seed=0)

    def test_rejects_zero_take(self):
        with pytest.raises(ValueError):
            subsample(np.ones((3, 1)), 0, seed=0)

    def test_different_seeds_differ(self):
        x = np.arange(200.0).reshape(100, 2)
        assert not np.array_equal(subsample(x, 50, seed=0), subsample(x, 50, seed=1))


class TestSplitK:
    def test_paper_shape_ten_splits(self):
        blocks = split_k(np.zeros((50_000, 1)), 10)
        assert [b.shape[0] for b in blocks] == [5000] * 10

    def test_identity_split(self):
        x = np.arange(20.0).reshape(10, 2)
        (block,) = split_k(x, 1)
        assert np.array_equal(block, x)

    def test_remainder_distribution(self):
        x = np.arange(7.0).reshape(7, 1)
        blocks = split_k(x, 3)
        assert [b.shape[0] for b in blocks] == [3, 2, 2]
        assert np.array_equal(blocks[0].ravel(), [0, 1, 2])
        assert np.array_equal(blocks[1].ravel(), [3, 4])
        assert np.array_equal(blocks[2].ravel(), [5, 6])

    def test_blocks_disjoint_and_cover(self):
        x = np.arange(23.0).reshape(23, 1)
        for k in (1, 2, 3, 5, 23):
            blocks = split_k(x, k)
            assert np.array_equal(np.concatenate(blocks), x)

    def test_errors(self):
        with pytest.raises(ValueError):
            split_k(np.ones((5, 1)), 0)
        with pytest.raises(InsufficientSamplesError):
            split_k(np.ones((5, 1)), 6)


class TestSoftmaxRows:
    def test_symmetric_pair(self):
        out = softmax_rows(np.array([[0.0, 0.0]]))
        assert np.array_equal(out, [[0.5, 0.5]])

    def test_overflow_safety(self):
        out = softmax_rows(np.array([[1000.0, 0.0]]))
        assert np.all(np.isfinite(out))
        assert out[0, 0] == pytest.approx(1.0)
        assert out[0, 1] == pytest.approx(0.0, abs=1e-300)

    def test_hand_evaluated_row(self):
        # e^x / sum e^x for [1, 2, 3].
        out = softmax_rows(np.array([[1.0, 2.0, 3.0]]))
        assert np.allclose(out, [[0.09003057, 0.24472847, 0.66524096]], atol=1e-7)

    def test_row_sums_near_one(self):
        rng = np.random.default_rng(0)
        logits = rng.normal(scale=50, size=(200, 17))
        sums = softmax_rows(logits).sum(axis=1)
        assert np.all(np.abs(sums - 1.0) <= 1e-12)
