"""Frechet distance between Gaussians fitted to two feature sets.

The cross term Tr((A B)^(1/2)) is computed through the symmetrized product
A^(1/2) B A^(1/2), whose eigendecomposition stays real by construction;
negative eigenvalues from round-off are clamped at zero.  Near-singular
covariances get one retry with a small diagonal bump.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .stats import GaussianStats, as_feature_matrix, fit_gaussian

# Allow distances down to -NEG_CLAMP_TOL (round-off) and clamp them to zero;
# anything more negative indicates a bug and is surfaced as an error.
NEG_CLAMP_TOL = 1e-8
# Diagonal bump applied on the single retry after a non-finite square root.
EPSILON_RETRY = 1e-6


@dataclass(frozen=True)
class FidScore:
    value: float
    n_real: int
    n_fake: int
    epsilon_applied: bool = False


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root via eigendecomposition, negatives clamped at 0."""
    eigvals, eigvecs = np.linalg.eigh(matrix)
    root = np.sqrt(np.clip(eigvals, 0.0, None))
    return (eigvecs * root) @ eigvecs.T


def _condition_number(matrix: np.ndarray) -> float:
    eigvals = np.abs(np.linalg.eigvalsh(matrix))
    smallest = eigvals.min()
    if smallest == 0.0:
        return float("inf")
    return float(eigvals.max() / smallest)


def sqrtm_product_trace(cov_a: np.ndarray, cov_b: np.ndarray) -> float:
    """Tr((cov_a cov_b)^(1/2)) for symmetric PSD inputs."""
    a = np.asarray(cov_a, dtype=np.float64)
    b = np.asarray(cov_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"need two equal square matrices, got {a.shape} and {b.shape}")
    for name, m in (("cov_a", a), ("cov_b", b)):
        if not np.allclose(m, m.T, rtol=1e-10, atol=1e-10):
            raise ValueError(f"{name} is not symmetric")
        if np.any(np.diag(m) < 0):
            raise ValueError(f"{name} has negative diagonal entries")

    a_half = _psd_sqrt(a)
    inner = a_half @ b @ a_half
    inner = (inner + inner.T) / 2.0
    eigvals = np.linalg.eigvalsh(inner)
    trace = float(np.sum(np.sqrt(np.clip(eigvals, 0.0, None))))
    if not np.isfinite(trace):
        raise NumericalError(
            "square-root trace is non-finite "
            f"(cond(cov_a)={_condition_number(a):.3e}, cond(cov_b)={_condition_number(b):.3e})"
        )
    return trace


def frechet_distance(a: GaussianStats, b: GaussianStats) -> float:
    """Squared Frechet (Wasserstein-2) distance between two Gaussians."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    diff = a.mean - b.mean
    value = (
        float(diff @ diff)
        + float(np.trace(a.cov))
        + float(np.trace(b.cov))
        - 2.0 * sqrtm_product_trace(a.cov, b.cov)
    )
    if value < -NEG_CLAMP_TOL:
        raise NumericalError(
            f"Frechet distance {value:.6e} is below the -{NEG_CLAMP_TOL:g} clamp tolerance"
        )
    return max(value, 0.0)


def compute_fid(real, fake) -> FidScore:
    """Fit Gaussians to both feature sets and evaluate the Frechet distance.

    If the square root fails with non-finite values, both covariances get a
    single EPSILON_RETRY * I bump and the retry is flagged in the result.
    """
    real = as_feature_matrix(real)
    fake = as_feature_matrix(fake)
    if real.shape[1] != fake.shape[1]:
        raise ValueError(
            f"feature dimension mismatch: real has {real.shape[1]}, fake has {fake.shape[1]}"
        )
    stats_real = fit_gaussian(real)
    stats_fake = fit_gaussian(fake)

    epsilon_applied = False
    try:
        value = frechet_distance(stats_real, stats_fake)
    except NumericalError:
        epsilon_applied = True
        bump = EPSILON_RETRY * np.eye(stats_real.dim)
        value = frechet_distance(
            GaussianStats(stats_real.mean, stats_real.cov + bump),
            GaussianStats(stats_fake.mean, stats_fake.cov + bump),
        )
    return FidScore(
        value=value,
        n_real=real.shape[0],
        n_fake=fake.shape[0],
        epsilon_applied=epsilon_applied,
    )
