"""Kernel distance: unbiased squared-MMD estimator with a degree-3 polynomial kernel.

Kernel sums run over blocked Gram products in float64.  The diagonal of each
within-set Gram block is zeroed before summation (rather than subtracting the
trace afterwards), and the two inputs are put into a canonical order first so
that swapping the arguments reproduces the exact same floating-point result.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientSamplesError
from .stats import as_feature_matrix, split_k

# Cap on entries per Gram block (float64): 2**20 entries = 8 MiB, so the
# block and its cube buffer stay cache-resident instead of streaming through
# main memory.
_GRAM_BLOCK_ENTRIES = 1 << 20


@dataclass(frozen=True)
class KidScore:
    split_values: list[float] = field(repr=False)
    mean: float = 0.0
    std: float = 0.0
    splits: int = 0


def poly_kernel(x, y) -> float:
    """Degree-3 polynomial kernel (<x, y>/d + 1)**3 with gamma = 1/d."""
    xv = np.asarray(x, dtype=np.float64).reshape(-1)
    yv = np.asarray(y, dtype=np.float64).reshape(-1)
    if xv.shape != yv.shape:
        raise ValueError(f"dimension mismatch: {xv.shape[0]} vs {yv.shape[0]}")
    if xv.shape[0] < 1:
        raise ValueError("vectors must have dimension >= 1")
    return (float(xv @ yv) / xv.shape[0] + 1.0) ** 3


def _poly_sum_blocked(a: np.ndarray, b: np.ndarray, exclude_matched_diagonal: bool) -> float:
    """Sum of (a_i . b_j / d + 1)^3 over the full Gram, blocked over rows of `a`.

    Block partial sums accumulate left to right; when summing a within-set
    Gram (`a is b`), the self-pair entry of each row is zeroed inside its
    block rather than subtracted from the total afterwards.
    """
    d = a.shape[1]
    a64 = np.asarray(a, dtype=np.float64)
    b64 = np.asarray(b, dtype=np.float64)
    m, n = a64.shape[0], b64.shape[0]
    step = max(1, _GRAM_BLOCK_ENTRIES // n)
    gram = np.empty((min(step, m), n), dtype=np.float64)
    cube = np.empty_like(gram)
    inv_d = 1.0 / d
    total = 0.0
    for start in range(0, m, step):
        rows = min(step, m - start)
        g = gram[:rows]
        np.matmul(a64[start : start + rows], b64.T, out=g)
        g *= inv_d
        g += 1.0
        c = cube[:rows]
        np.multiply(g, g, out=c)
        c *= g
        if exclude_matched_diagonal:
            c[np.arange(rows), np.arange(start, start + rows)] = 0.0
        total += float(c.sum())
    return total


def _within_offdiag_sum(x: np.ndarray) -> float:
    """Sum of k(x_i, x_j) over i != j."""
    return _poly_sum_blocked(x, x, exclude_matched_diagonal=True)


def _cross_sum(x: np.ndarray, y: np.ndarray) -> float:
    """Sum of k(x_i, y_j) over all pairs."""
    return _poly_sum_blocked(x, y, exclude_matched_diagonal=False)


def _canonical_pair(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Fixed total order (row count, then value-lexicographic) so that
    # mmd2_unbiased(X, Y) and mmd2_unbiased(Y, X) run identical computations.
    if x.shape[0] != y.shape[0]:
        return (x, y) if x.shape[0] > y.shape[0] else (y, x)
    xf, yf = x.reshape(-1), y.reshape(-1)
    chunk = 1 << 16
    for off in range(0, xf.size, chunk):
        xc, yc = xf[off : off + chunk], yf[off : off + chunk]
        if np.array_equal(xc, yc):
            continue
        first = np.nonzero(xc != yc)[0][0]
        return (x, y) if xc[first] > yc[first] else (y, x)
    return x, y


def mmd2_unbiased(x, y) -> float:
    """Unbiased squared-MMD estimate between two feature sets (may be negative)."""
    x = as_feature_matrix(x)
    y = as_feature_matrix(y)
    if x.shape[1] != y.shape[1]:
        raise ValueError(
            f"feature dimension mismatch: {x.shape[1]} vs {y.shape[1]}"
        )
    if x.shape[0] < 2 or y.shape[0] < 2:
        raise InsufficientSamplesError(
            f"unbiased estimator needs >= 2 rows per side, got {x.shape[0]} and {y.shape[0]}"
        )
    a, b = _canonical_pair(x, y)
    m, n = a.shape[0], b.shape[0]
    term_a = _within_offdiag_sum(a) / (m * (m - 1))
    term_b = _within_offdiag_sum(b) / (n * (n - 1))
    cross = _cross_sum(a, b) * (2.0 / (m * n))
    return (term_a + term_b) - cross


def compute_kid(real, fake, splits: int = 10) -> KidScore:
    """Paired-split KID: block i of real against block i of fake.

    Reported values are raw squared-MMD estimates; mean and std (population
    normalization) are taken over the per-split values.
    """
    real = as_feature_matrix(real)
    fake = as_feature_matrix(fake)
    if splits < 1:
        raise ValueError(f"splits must be at least 1, got {splits}")
    for name, mat in (("real", real), ("fake", fake)):
        if mat.shape[0] < 2 * splits:
            raise InsufficientSamplesError(
                f"{name} set has {mat.shape[0]} rows; {splits} splits need at least {2 * splits}"
            )
    values = [
        mmd2_unbiased(r_block, f_block)
        for r_block, f_block in zip(split_k(real, splits), split_k(fake, splits))
    ]
    arr = np.asarray(values, dtype=np.float64)
    return KidScore(
        split_values=values,
        mean=float(arr.mean()),
        std=float(arr.std(ddof=0)),
        splits=splits,
    )
