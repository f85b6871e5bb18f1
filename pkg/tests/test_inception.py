"""Classifier score: extremes, bounds, invariances, probability input."""

import numpy as np
import pytest

from ganmetrics import (
    InputError,
    InsufficientSamplesError,
    inception_score,
    softmax_rows,
)


def _one_hot_logits(n_rows, n_classes, magnitude=1000.0):
    logits = np.zeros((n_rows, n_classes))
    for i in range(n_rows):
        logits[i, i % n_classes] = magnitude
    return logits


class TestExtremes:
    def test_identical_logits_score_one(self):
        logits = np.tile(np.array([0.3, -1.2, 0.7, 0.0]), (40, 1))
        score = inception_score(logits, splits=4)
        assert score.mean == pytest.approx(1.0, abs=1e-10)
        assert score.std == 0.0
        assert all(v == pytest.approx(1.0, abs=1e-10) for v in score.split_values)

    def test_uniform_one_hot_reaches_class_count(self):
        # Deterministic conditionals, uniform marginal: exp(log C) = C.
        score = inception_score(_one_hot_logits(10, 10), splits=1)
        assert score.mean == pytest.approx(10.0, abs=1e-6)

    def test_fifty_thousand_rows_ten_splits(self):
        rng = np.random.default_rng(0)
        logits = rng.normal(size=(50_000, 10))
        score = inception_score(logits, splits=10)
        assert score.splits == 10
        assert len(score.split_values) == 10
        assert score.std >= 0.0


class TestBounds:
    def test_values_between_one_and_class_count(self):
        rng = np.random.default_rng(3)
        for _ in range(8):
            n = int(rng.integers(10, 200))
            c = int(rng.integers(2, 20))
            logits = rng.normal(scale=rng.uniform(0.1, 30.0), size=(n, c))
            score = inception_score(logits, splits=int(rng.integers(1, 4)))
            for v in score.split_values:
                assert 1.0 <= v <= c


class TestInvariances:
    def test_per_row_shift_invariance(self):
        rng = np.random.default_rng(5)
        logits = rng.normal(size=(60, 7))
        shifted = logits + rng.normal(size=(60, 1))
        a = inception_score(logits, splits=3)
        b = inception_score(shifted, splits=3)
        assert b.mean == pytest.approx(a.mean, abs=1e-10)

    def test_class_permutation_invariance(self):
        rng = np.random.default_rng(6)
        logits = rng.normal(size=(45, 9))
        perm = rng.permutation(9)
        a = inception_score(logits, splits=3)
        b = inception_score(logits[:, perm], splits=3)
        assert b.mean == pytest.approx(a.mean, abs=1e-12)


class TestProbabilityInput:
    def test_matches_logit_path(self):
        rng = np.random.default_rng(7)
        logits = rng.normal(size=(30, 5))
        probs = softmax_rows(logits)
        a = inception_score(logits, splits=3)
        b = inception_score(probs, splits=3, from_probabilities=True)
        assert b.mean == pytest.approx(a.mean, abs=1e-12)

    def test_rejects_bad_row_sums(self):
        probs = np.full((4, 2), 0.6)
        with pytest.raises(InputError, match="sums to"):
            inception_score(probs, splits=1, from_probabilities=True)

    def test_rejects_negative_probabilities(self):
        probs = np.array([[1.2, -0.2], [0.5, 0.5]])
        with pytest.raises(InputError):
            inception_score(probs, splits=1, from_probabilities=True)


class TestErrors:
    def test_more_splits_than_rows(self):
        with pytest.raises(InsufficientSamplesError):
            inception_score(np.zeros((3, 4)), splits=5)

    def test_zero_splits(self):
        with pytest.raises(ValueError):
            inception_score(np.zeros((3, 4)), splits=0)

    def test_single_class_rejected(self):
        with pytest.raises(InputError):
            inception_score(np.zeros((5, 1)), splits=1)
