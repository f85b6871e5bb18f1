"""Classifier-based score: exponentiated mean KL between conditionals and marginal.

The marginal is taken per split (the standard convention for split-based
reporting).  KL terms are evaluated in log space with 0 * log 0 := 0 and the
marginal floored at 1e-300; the mean KL is clamped to [0, log C], which it
satisfies mathematically, so each split value lands in [1, C] exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, InsufficientSamplesError, NumericalError
from .stats import as_logit_matrix, softmax_rows, split_k

_MARGINAL_FLOOR = 1e-300
_PROB_ROW_SUM_TOL = 1e-6


@dataclass(frozen=True)
class IsScore:
    split_values: list[float] = field(repr=False)
    mean: float = 0.0
    std: float = 0.0
    splits: int = 0


def _split_value(probs: np.ndarray) -> float:
    marginal = probs.mean(axis=0)
    # log(1) = 0 at zero-probability entries makes the p * log p term vanish.
    log_cond = np.log(np.where(probs > 0.0, probs, 1.0))
    log_marg = np.log(np.maximum(marginal, _MARGINAL_FLOOR))
    kl_rows = (probs * (log_cond - log_marg)).sum(axis=1)
    mean_kl = float(kl_rows.mean())
    # The mean KL lies in [0, log C] mathematically; clamp away rounding noise
    # (including the exp(log C) > C ulp) so split values stay inside [1, C].
    value = float(np.exp(max(mean_kl, 0.0)))
    return min(value, float(probs.shape[1]))


def inception_score(logits, splits: int = 10, from_probabilities: bool = False) -> IsScore:
    """Per-split exp(mean KL(conditional || marginal)) from classifier outputs.

    `logits` rows are softmax-normalized unless `from_probabilities` is set,
    in which case rows must already sum to 1 within 1e-6.
    """
    if splits < 1:
        raise ValueError(f"splits must be at least 1, got {splits}")
    mat = as_logit_matrix(logits)
    if mat.shape[0] < splits:
        raise InsufficientSamplesError(
            f"{mat.shape[0]} rows cannot fill {splits} splits"
        )
    if from_probabilities:
        probs = np.asarray(mat, dtype=np.float64)
        if np.any(probs < 0.0):
            raise InputError("probability input has negative entries")
        row_sums = probs.sum(axis=1)
        bad = np.abs(row_sums - 1.0) > _PROB_ROW_SUM_TOL
        if np.any(bad):
            row = int(np.argmax(bad))
            raise InputError(
                f"probability row {row} sums to {row_sums[row]:.8f}, not 1 within {_PROB_ROW_SUM_TOL:g}"
            )
    else:
        probs = softmax_rows(mat)

    values = [_split_value(block) for block in split_k(probs, splits)]
    arr = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise NumericalError("non-finite split value")
    return IsScore(
        split_values=values,
        mean=float(arr.mean()),
        std=float(arr.std(ddof=0)),
        splits=splits,
    )
