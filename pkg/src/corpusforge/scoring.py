"""Numerical kernels for contrastive and reward scoring.

Pure functions over NumPy arrays: cosine similarity, the in-batch
contrastive (InfoNCE) loss value, the guide-model false-negative mask for
negative selection, and the gated multi-objective reward aggregate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TEMPERATURE = 0.05

GATING_SUM_TOLERANCE = 1e-9


@dataclass
class SimilarityMatrix:
    """N x M similarity grid (rows = queries, columns = documents) plus the
    per-row column index of the positive document."""

    values: np.ndarray
    positive_index: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        self.positive_index = np.asarray(self.positive_index, dtype=np.int64)
        if self.values.ndim != 2:
            raise ValueError("values must be a 2-D matrix")
        n, m = self.values.shape
        if self.positive_index.shape != (n,):
            raise ValueError("positive_index must have one entry per row")
        if np.any((self.positive_index < 0) | (self.positive_index >= m)):
            raise ValueError("positive_index out of range")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("similarity values must be finite")


@dataclass
class RewardBundle:
    """Gating coefficients (non-negative, summing to 1) and reward scores."""

    gating: np.ndarray
    rewards: np.ndarray

    def __post_init__(self):
        self.gating = np.asarray(self.gating, dtype=np.float64)
        self.rewards = np.asarray(self.rewards, dtype=np.float64)
        if self.gating.shape != self.rewards.shape or self.gating.ndim != 1:
            raise ValueError("gating and rewards must be 1-D and equal length")
        if np.any(self.gating < 0):
            raise ValueError("gating coefficients must be non-negative")
        if abs(float(self.gating.sum()) - 1.0) > GATING_SUM_TOLERANCE:
            raise ValueError("gating coefficients must sum to 1")


def cosine(u, v) -> float:
    """Cosine similarity, clamped into [-1, 1] against rounding."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise ValueError("vectors must be 1-D with equal dimensions")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ValueError("zero_norm")
    return float(np.clip(float(u @ v) / (nu * nv), -1.0, 1.0))


def _logsumexp_rows(x: np.ndarray) -> np.ndarray:
    # Max-shifted for stability (logits reach +-20 at temperature 0.05).
    # The max term is excluded from the sum and re-added through log1p so
    # rows dominated by their positive keep full relative precision instead
    # of cancelling against the leading 1.0.
    rows = np.arange(x.shape[0])
    argmax = x.argmax(axis=1)
    shift = x[rows, argmax]
    shifted = np.exp(x - shift[:, None])
    shifted[rows, argmax] = 0.0
    return shift + np.log1p(shifted.sum(axis=1))


def infonce_loss(
    sim: SimilarityMatrix, tau: float = DEFAULT_TEMPERATURE, positive_margin: float = 0.0
) -> float:
    """Mean in-batch contrastive loss.

    -(1/N) sum_i log( exp(S[i, pos_i]/tau) / sum_j exp(S[i, j]/tau) ),
    evaluated with a max-shifted log-sum-exp. ``positive_margin`` is
    subtracted from each row's positive logit before the softmax (the
    margin-adjusted variant; 0 gives the standard loss). Result is >= 0
    for margin 0 and exactly 0 for a single-candidate row set.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    values = sim.values
    if positive_margin != 0.0:
        values = values.copy()
        rows = np.arange(values.shape[0])
        values[rows, sim.positive_index] -= positive_margin
    logits = values / tau
    rows = np.arange(logits.shape[0])
    positive_logits = logits[rows, sim.positive_index]
    return float(np.mean(_logsumexp_rows(logits) - positive_logits))


def gist_negative_mask(sim_guide: SimilarityMatrix, margin: float = 0.0) -> np.ndarray:
    """Boolean N x M mask of valid in-batch negatives.

    Entry (i, j) is True iff the guide similarity of candidate j is
    strictly below the positive's guide similarity minus the margin;
    candidates at or above that bar are suspected false negatives and
    excluded. The positive column itself is always False.
    """
    values = sim_guide.values
    rows = np.arange(values.shape[0])
    bar = values[rows, sim_guide.positive_index] - margin
    mask = values < bar[:, None]
    mask[rows, sim_guide.positive_index] = False
    return mask


def armo_score(bundle: RewardBundle) -> float:
    """Gated multi-objective aggregate: dot(gating, rewards)."""
    return float(bundle.gating @ bundle.rewards)
