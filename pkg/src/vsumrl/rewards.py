"""Diversity and representativeness rewards for a selected frame subset.

Both rewards are label-free functions of the frame features alone. The
diversity term is the mean pairwise cosine dissimilarity among selected
frames, with pairs further apart than a temporal window forced to count as
maximally dissimilar so that distant near-duplicates are not punished. The
representativeness term scores how well the selection covers the whole
sequence, exponentiating the negative mean distance from every frame to its
nearest selected frame (a k-medoids style objective). An empty selection
earns zero total reward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist


@dataclass
class RewardConfig:
    """Reward knobs. ``lambda_window`` is the max temporal separation (in
    subsampled frames) inside which real dissimilarities are used; pairs
    further apart contribute 1. ``use_lambda=False`` disables the rule."""

    lambda_window: float = 20
    use_lambda: bool = True

    def __post_init__(self):
        if self.lambda_window < 0:
            raise ValueError("lambda_window must be >= 0")

    @property
    def effective_window(self):
        return self.lambda_window if self.use_lambda else math.inf


@dataclass
class RewardValue:
    r_div: float
    r_rep: float
    total: float


def dissimilarity(x, y):
    """Cosine dissimilarity ``1 - cos(x, y)`` in [0, 2].

    A zero-norm vector has no direction; the pair is scored 1 (neutral).
    """
    nx = np.linalg.norm(x)
    ny = np.linalg.norm(y)
    if nx == 0.0 or ny == 0.0:
        return 1.0
    return float(1.0 - np.dot(x, y) / (nx * ny))


def _pairwise_dissimilarity(feats):
    # 1 - cosine similarity for every row pair; zero-norm rows score 1.
    norms = np.linalg.norm(feats, axis=1)
    safe = np.where(norms == 0.0, 1.0, norms)
    unit = feats / safe[:, None]
    d = 1.0 - unit @ unit.T
    bad = norms == 0.0
    if bad.any():
        d[bad, :] = 1.0
        d[:, bad] = 1.0
    return d


def diversity_reward(features, selected, cfg=None):
    """Mean pairwise dissimilarity over the selected index set.

    Pairs more than ``cfg.lambda_window`` frames apart are counted as 1
    regardless of their feature-space similarity. Fewer than two selected
    frames yield 0: a single frame has no diversity.
    """
    cfg = cfg or RewardConfig()
    idx = np.unique(np.asarray(selected, dtype=int))
    k = idx.size
    if k < 2:
        return 0.0
    d = _pairwise_dissimilarity(features[idx])
    window = cfg.effective_window
    if np.isfinite(window):
        gaps = np.abs(idx[:, None] - idx[None, :])
        d = np.where(gaps > window, 1.0, d)
    np.fill_diagonal(d, 0.0)
    return float(d.sum() / (k * (k - 1)))


def representativeness_reward(features, selected):
    """exp(-mean over frames of the distance to the nearest selected frame)."""
    idx = np.unique(np.asarray(selected, dtype=int))
    if idx.size == 0:
        raise ValueError("representativeness_reward needs a nonempty selection")
    dists = cdist(features, features[idx], metric="euclidean")
    return float(np.exp(-dists.min(axis=1).mean()))


def total_reward(features, actions, cfg=None):
    """Score one sampled action sequence.

    The selection is the set of positions with action 1. No selection at
    all earns (0, 0, 0); otherwise the total is the sum of the diversity
    and representativeness terms.
    """
    cfg = cfg or RewardConfig()
    actions = np.asarray(actions)
    selected = np.flatnonzero(actions)
    if selected.size == 0:
        return RewardValue(0.0, 0.0, 0.0)
    r_div = diversity_reward(features, selected, cfg)
    r_rep = representativeness_reward(features, selected)
    return RewardValue(r_div, r_rep, r_div + r_rep)
