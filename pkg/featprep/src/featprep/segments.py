"""Shot boundaries and budgeted shot selection for annotation conversion.

A compact kernel temporal segmentation (cosine kernel, penalized DP over
within-segment scatter) plus an exact 0/1 knapsack. The prep tool carries
its own copies because it talks to the engine only through files.
"""

from __future__ import annotations

import numpy as np


def _scatters(K):
    n = K.shape[0]
    diag_cum = np.concatenate([[0.0], np.cumsum(np.diag(K))])
    block = np.zeros((n + 1, n + 1))
    block[1:, 1:] = np.cumsum(np.cumsum(K, axis=0), axis=1)
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    lengths = np.maximum((j - i + 1).astype(float), 1.0)
    bd = np.diag(block)
    block_sum = bd[1:][None, :] + bd[:-1][:, None] - block[1:, :-1].T - block[:-1, 1:]
    s = (diag_cum[1:][None, :] - diag_cum[:-1][:, None]) - block_sum / lengths
    s[j < i] = 0.0
    return s


def kts_change_points(features, max_change_points, penalty_weight=None):
    """Change-point indices (a new segment starts at each index).

    ``penalty_weight=None`` scales the model-selection penalty by the
    sequence's own average per-frame scatter, so the detector works for
    both well-separated and nearly duplicate feature spaces.
    """
    feats = np.asarray(features, dtype=np.float64)
    n = feats.shape[0]
    max_cp = int(min(max_change_points, n - 1))
    norms = np.linalg.norm(feats, axis=1)
    norms[norms == 0.0] = 1.0
    unit = feats / norms[:, None]
    J = _scatters(unit @ unit.T)
    if penalty_weight is None:
        penalty_weight = max(J[0, n - 1] / n, 1e-12)
    best = np.full((max_cp + 1, n + 1), np.inf)
    best[0, 1:] = J[0, :n]
    prev = np.zeros((max_cp + 1, n + 1), dtype=int)
    for k in range(1, max_cp + 1):
        for end in range(k + 1, n + 1):
            cand = best[k - 1, k:end] + J[k:end, end - 1]
            arg = int(np.argmin(cand))
            best[k, end] = cand[arg]
            prev[k, end] = arg + k
    m_vals = np.arange(max_cp + 1, dtype=float)
    penalties = np.zeros(max_cp + 1)
    penalties[1:] = m_vals[1:] * (np.log(n / m_vals[1:]) + 1.0)
    m_best = int(np.argmin(best[:, n] + penalty_weight * penalties))
    bounds = []
    cur = n
    for k in range(m_best, 0, -1):
        cur = int(prev[k, cur])
        bounds.append(cur)
    return sorted(bounds)


def intervals_from_change_points(change_points, n_frames):
    edges = [0] + [int(c) for c in change_points] + [n_frames]
    return [[edges[i], edges[i + 1] - 1] for i in range(len(edges) - 1)]


def knapsack_select(lengths, values, budget):
    """Indices maximizing total value with total length <= budget."""
    lengths = np.asarray(lengths, dtype=int)
    values = np.asarray(values, dtype=float)
    n = lengths.size
    budget = int(budget)
    if budget <= 0 or n == 0:
        return []
    table = np.zeros((n + 1, budget + 1))
    taken = np.zeros((n + 1, budget + 1), dtype=bool)
    for i in range(1, n + 1):
        w, v = lengths[i - 1], values[i - 1]
        table[i] = table[i - 1]
        if w <= budget:
            cand = table[i - 1, :budget + 1 - w] + v
            better = cand > table[i, w:]
            table[i, w:][better] = cand[better]
            taken[i, w:][better] = True
    picked = []
    cap = budget
    for i in range(n, 0, -1):
        if taken[i, cap]:
            picked.append(i - 1)
            cap -= lengths[i - 1]
    return sorted(picked)
