"""Kernel distance: hand-evaluated sums, loop oracle, swap symmetry, splits."""

import numpy as np
import pytest

import ganmetrics.kid as kid_mod
from ganmetrics import (
    InsufficientSamplesError,
    compute_kid,
    mmd2_unbiased,
    poly_kernel,
)
from ganmetrics.bias import SyntheticGaussianSpec, synth_features


def mmd2_loop_oracle(x, y):
    """Naive O(n^2) double-loop estimator over Python floats."""
    xs = [[float(v) for v in row] for row in np.asarray(x)]
    ys = [[float(v) for v in row] for row in np.asarray(y)]
    d = len(xs[0])

    def kern(u, v):
        s = 0.0
        for a, b in zip(u, v):
            s += a * b
        return (s / d + 1.0) ** 3

    m, n = len(xs), len(ys)
    sxx = sum(kern(xs[i], xs[j]) for i in range(m) for j in range(m) if i != j)
    syy = sum(kern(ys[i], ys[j]) for i in range(n) for j in range(n) if i != j)
    sxy = sum(kern(xi, yj) for xi in xs for yj in ys)
    return sxx / (m * (m - 1)) + syy / (n * (n - 1)) - 2.0 * sxy / (m * n)


class TestPolyKernel:
    def test_zero_vectors(self):
        assert poly_kernel(np.zeros(3), np.zeros(3)) == 1.0

    def test_unit_self_product(self):
        x = np.ones(4)
        assert poly_kernel(x, x) == pytest.approx(8.0)

    def test_hand_evaluated_1d(self):
        assert poly_kernel([1.0], [2.0]) == pytest.approx(27.0)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            poly_kernel([1.0, 2.0], [1.0])


class TestMmd2Unbiased:
    def test_constant_identical_sets(self):
        zeros = np.zeros((2, 3))
        assert mmd2_unbiased(zeros, zeros) == 0.0

    def test_hand_evaluated_instance(self):
        # d=1: within-X sum 0, within-Y sum 1, cross sum 14 -> 0 + 1 - 14.
        x = np.array([[1.0], [-1.0]])
        y = np.array([[0.0], [2.0]])
        assert mmd2_unbiased(x, y) == pytest.approx(-13.0, abs=1e-9)

    def test_small_integer_instance_matches_loop_oracle(self):
        rng = np.random.default_rng(4)
        x = rng.integers(-3, 4, size=(3, 2)).astype(float)
        y = rng.integers(-3, 4, size=(3, 2)).astype(float)
        assert mmd2_unbiased(x, y) == pytest.approx(mmd2_loop_oracle(x, y), abs=1e-12)

    def test_matches_loop_oracle_on_random_instances(self):
        rng = np.random.default_rng(77)
        for _ in range(10):
            m, n = rng.integers(2, 40, size=2)
            d = int(rng.integers(1, 6))
            x = rng.normal(size=(m, d))
            y = rng.normal(loc=0.3, size=(n, d))
            ours = mmd2_unbiased(x, y)
            oracle = mmd2_loop_oracle(x, y)
            assert ours == pytest.approx(oracle, rel=1e-9, abs=1e-9)

    def test_blocked_path_matches_loop_oracle(self, monkeypatch):
        # Force multi-block Gram accumulation.
        monkeypatch.setattr(kid_mod, "_GRAM_BLOCK_ENTRIES", 64)
        rng = np.random.default_rng(13)
        x = rng.normal(size=(23, 4))
        y = rng.normal(size=(31, 4))
        assert kid_mod.mmd2_unbiased(x, y) == pytest.approx(
            mmd2_loop_oracle(x, y), rel=1e-9, abs=1e-9
        )

    def test_swap_symmetry_is_exact(self):
        rng = np.random.default_rng(6)
        cases = [(5, 9), (9, 5), (8, 8), (2, 2)]
        for m, n in cases:
            x = rng.normal(size=(m, 3))
            y = rng.normal(size=(n, 3))
            assert mmd2_unbiased(x, y) == mmd2_unbiased(y, x)

    def test_swap_symmetry_exact_on_equal_sizes_large(self):
        rng = np.random.default_rng(14)
        x = rng.normal(size=(300, 12))
        y = rng.normal(loc=0.1, size=(300, 12))
        assert mmd2_unbiased(x, y) == mmd2_unbiased(y, x)

    def test_needs_two_rows_per_side(self):
        with pytest.raises(InsufficientSamplesError):
            mmd2_unbiased(np.ones((1, 2)), np.ones((5, 2)))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            mmd2_unbiased(np.ones((3, 2)), np.ones((3, 4)))

    def test_float32_inputs_match_float64(self):
        rng = np.random.default_rng(10)
        x = rng.normal(size=(40, 5))
        y = rng.normal(size=(44, 5))
        v64 = mmd2_unbiased(x, y)
        v32 = mmd2_unbiased(x.astype(np.float32), y.astype(np.float32))
        assert v32 == pytest.approx(v64, rel=1e-5, abs=1e-7)


class TestComputeKid:
    def test_single_split_equals_direct_estimate(self):
        rng = np.random.default_rng(2)
        x = rng.normal(size=(30, 4))
        y = rng.normal(size=(30, 4))
        score = compute_kid(x, y, splits=1)
        assert score.split_values == [mmd2_unbiased(x, y)]
        assert score.mean == score.split_values[0]
        assert score.std == 0.0
        assert score.splits == 1

    def test_paired_split_values(self):
        rng = np.random.default_rng(3)
        real = rng.normal(size=(40, 3))
        fake = rng.normal(size=(40, 3))
        score = compute_kid(real, fake, splits=4)
        assert len(score.split_values) == 4
        for i in range(4):
            assert score.split_values[i] == mmd2_unbiased(
                real[i * 10 : (i + 1) * 10], fake[i * 10 : (i + 1) * 10]
            )

    def test_mean_std_recomputable(self):
        rng = np.random.default_rng(5)
        score = compute_kid(rng.normal(size=(50, 2)), rng.normal(size=(50, 2)), splits=5)
        arr = np.asarray(score.split_values)
        assert score.mean == float(arr.mean())
        assert score.std == float(arr.std(ddof=0))

    def test_same_distribution_mean_within_noise(self):
        # 5K rows per side from one 8-dim Gaussian; expected value 0.
        real = synth_features(SyntheticGaussianSpec(n=5000, d=8, seed=31))
        fake = synth_features(SyntheticGaussianSpec(n=5000, d=8, seed=32))
        score = compute_kid(real, fake, splits=5)
        assert abs(score.mean) < 3.0 * (score.std / np.sqrt(score.splits) + 1e-12)

    def test_insufficient_rows_for_splits(self):
        with pytest.raises(InsufficientSamplesError):
            compute_kid(np.ones((19, 2)), np.ones((40, 2)), splits=10)

    def test_bad_split_count(self):
        with pytest.raises(ValueError):
            compute_kid(np.ones((4, 2)), np.ones((4, 2)), splits=0)


def test_unbiasedness_mini_study():
    # Mean of the estimator over independent resamples scatters around zero.
    values = []
    for rep in range(60):
        x = synth_features(SyntheticGaussianSpec(n=100, d=4, seed=1000 + 2 * rep))
        y = synth_features(SyntheticGaussianSpec(n=100, d=4, seed=1001 + 2 * rep))
        values.append(mmd2_unbiased(x, y))
    arr = np.asarray(values)
    stderr = arr.std(ddof=1) / np.sqrt(arr.size)
    assert abs(arr.mean()) < 3.0 * stderr
