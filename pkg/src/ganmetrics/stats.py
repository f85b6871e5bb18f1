"""Shared numerical primitives: Gaussian fitting, subsampling, splitting, softmax.

Feature and logit matrices are plain 2-D numpy arrays; the ``as_*`` validators
enforce the invariants (finite entries, minimum shape) at every public entry
point.  Reductions over rows accumulate in float64 in a fixed left-to-right
block order, so results are deterministic for a given row ordering even when
inputs are float32.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InputError, InsufficientSamplesError
from .rng import permutation_prefix

_BLOCK_ROWS = 8192


def as_feature_matrix(data) -> np.ndarray:
    """Validate and return an n x d feature matrix (n >= 1, d >= 1, finite)."""
    arr = np.asarray(data)
    if arr.dtype not in (np.float32, np.float64):
        arr = arr.astype(np.float64)
    if arr.ndim != 2:
        raise InputError(f"feature matrix must be 2-D, got shape {arr.shape}")
    n, d = arr.shape
    if n < 1 or d < 1:
        raise InputError(f"feature matrix must be at least 1x1, got {n}x{d}")
    if not np.all(np.isfinite(arr)):
        r, c = np.argwhere(~np.isfinite(arr))[0]
        raise InputError(f"non-finite feature value at row {r}, column {c}")
    return np.ascontiguousarray(arr)


def as_logit_matrix(data) -> np.ndarray:
    """Validate and return an n x C logit matrix (C >= 2, finite)."""
    arr = as_feature_matrix(data)
    if arr.shape[1] < 2:
        raise InputError(f"logit matrix needs at least 2 classes, got {arr.shape[1]}")
    return arr


@dataclass(frozen=True)
class GaussianStats:
    """Mean vector and covariance matrix summarizing one feature set.

    The covariance is symmetrized on construction ((A + A.T) / 2) and must
    have a nonnegative diagonal.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.ascontiguousarray(np.asarray(self.mean, dtype=np.float64).reshape(-1))
        cov = np.asarray(self.cov, dtype=np.float64)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
            raise InputError(f"covariance must be square, got shape {cov.shape}")
        if cov.shape[0] != mean.shape[0]:
            raise InputError(
                f"mean has dimension {mean.shape[0]} but covariance is {cov.shape[0]}x{cov.shape[1]}"
            )
        cov = np.ascontiguousarray((cov + cov.T) / 2.0)
        if np.any(np.diag(cov) < 0):
            raise InputError("covariance diagonal has negative entries")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


def fit_gaussian(feats) -> GaussianStats:
    """Column means and unbiased (n-1) sample covariance of a feature matrix."""
    x = as_feature_matrix(feats)
    n, d = x.shape
    if n < 2:
        raise DegenerateInputError(f"covariance needs at least 2 rows, got {n}")

    col_sum = np.zeros(d, dtype=np.float64)
    for start in range(0, n, _BLOCK_ROWS):
        block = np.asarray(x[start : start + _BLOCK_ROWS], dtype=np.float64)
        col_sum += block.sum(axis=0)
    mean = col_sum / n

    scatter = np.zeros((d, d), dtype=np.float64)
    for start in range(0, n, _BLOCK_ROWS):
        centered = np.asarray(x[start : start + _BLOCK_ROWS], dtype=np.float64) - mean
        scatter += centered.T @ centered
    cov = scatter / (n - 1)
    return GaussianStats(mean=mean, cov=cov)


def subsample(feats, n_take: int, seed: int) -> np.ndarray:
    """Select `n_take` distinct rows without replacement, reproducibly.

    Row indices come from a partial Fisher-Yates shuffle driven by
    Philox4x64-10 keyed with `seed` (see :mod:`ganmetrics.rng`), so the same
    (feats, n_take, seed) triple selects the same rows on every platform.
    """
    x = as_feature_matrix(feats)
    n = x.shape[0]
    if n_take < 1:
        raise ValueError(f"n_take must be at least 1, got {n_take}")
    if n_take > n:
        raise InsufficientSamplesError(
            f"requested {n_take} rows but only {n} are available"
        )
    idx = permutation_prefix(n, n_take, key=seed)
    return x[idx]


def split_k(feats, k: int) -> list[np.ndarray]:
    """Split rows into k contiguous blocks, the first n % k taking the extra row."""
    x = as_feature_matrix(feats)
    n = x.shape[0]
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if k > n:
        raise InsufficientSamplesError(f"cannot split {n} rows into {k} blocks")
    base, extra = divmod(n, k)
    blocks = []
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        blocks.append(x[start : start + size])
        start += size
    return blocks


def softmax_rows(logits) -> np.ndarray:
    """Row-wise softmax with max-subtraction, float64 output."""
    z = np.asarray(as_logit_matrix(logits), dtype=np.float64)
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)
