"""Kernel temporal segmentation: shot boundaries via penalized DP.

Frames are compared through a cosine kernel (dot product of l2-normalized
features). For a fixed number of change points m, dynamic programming
places boundaries to minimize the total within-segment kernel scatter

    sum_seg [ sum_{i in seg} K(i,i) - (1/|seg|) sum_{i,j in seg} K(i,j) ],

with every candidate segment's scatter read off cumulative Gram sums in
O(1). The number of boundaries is then chosen by minimizing
scatter(m) + penalty_weight * m * (log(T/m) + 1); ties prefer fewer
boundaries, so raising the penalty never adds change points.

Datasets that ship precomputed shot boundaries bypass this module; it runs
only when boundaries are absent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class SegmentationResult:
    """Sorted boundary indices plus the inclusive segments they induce.

    A change point at index c starts a new segment at c, so ``segments``
    has one more entry than ``change_points`` and tiles the frame range.
    """

    change_points: np.ndarray   # (m,) int
    segments: np.ndarray        # (m+1, 2) inclusive [start, end]

    @property
    def n_segments(self):
        return self.segments.shape[0]


def _segments_from_boundaries(boundaries, n):
    edges = [0] + [int(b) for b in boundaries] + [n]
    return np.array([[edges[i], edges[i + 1] - 1] for i in range(len(edges) - 1)])


def cosine_kernel(features):
    feats = np.asarray(features, dtype=np.float64)
    norms = np.linalg.norm(feats, axis=1)
    norms[norms == 0.0] = 1.0
    unit = feats / norms[:, None]
    return unit @ unit.T


def segment_scatters(K):
    """scatters[i, j] = within-segment scatter of frames i..j inclusive.

    Uses cumulative sums of the kernel diagonal and of the full Gram
    matrix, so each entry costs O(1) after O(T^2) preprocessing.
    """
    n = K.shape[0]
    diag_cum = np.concatenate([[0.0], np.cumsum(np.diag(K))])
    block = np.zeros((n + 1, n + 1))
    block[1:, 1:] = np.cumsum(np.cumsum(K, axis=0), axis=1)
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    lengths = (j - i + 1).astype(np.float64)
    lengths[lengths <= 0] = 1.0  # below-diagonal entries are unused
    diag_part = diag_cum[1:][None, :] - diag_cum[:-1][:, None]
    # sum of K over the square block [i..j] x [i..j]
    bd = np.diag(block)
    block_sum = bd[1:][None, :] + bd[:-1][:, None] - block[1:, :-1].T - block[:-1, 1:]
    scatters = diag_part - block_sum / lengths
    scatters[j < i] = 0.0
    return scatters


def _dp_change_points(scatters, max_cp):
    """Best objective and boundaries for every change-point count.

    Returns (costs, boundary_lists) where costs[m] is the minimal total
    scatter with exactly m change points over the full range and
    boundary_lists[m] the argmin boundary indices.
    """
    n = scatters.shape[0]
    best = np.full((max_cp + 1, n + 1), np.inf)
    best[0, 1:] = scatters[0, :n]
    prev = np.zeros((max_cp + 1, n + 1), dtype=int)
    for k in range(1, max_cp + 1):
        for end in range(k + 1, n + 1):
            # last segment starts at t; need k segments before it
            t_lo, t_hi = k, end
            cand = best[k - 1, t_lo:t_hi] + scatters[t_lo:t_hi, end - 1]
            arg = int(np.argmin(cand))
            best[k, end] = cand[arg]
            prev[k, end] = arg + t_lo
    boundary_lists = []
    for m in range(max_cp + 1):
        bounds = []
        cur = n
        for k in range(m, 0, -1):
            cur = int(prev[k, cur])
            bounds.append(cur)
        boundary_lists.append(sorted(bounds))
    costs = best[:, n].copy()
    return costs, boundary_lists


def kts_segment(features, max_change_points, penalty_weight=1.0):
    """Detect shot boundaries in a feature sequence.

    ``max_change_points`` caps the model-selection search; the chosen count
    minimizes scatter + penalty_weight * m * (log(T/m) + 1).
    """
    feats = np.asarray(features, dtype=np.float64)
    n = feats.shape[0]
    if n < 2:
        raise ValueError(f"need at least 2 frames to segment, got {n}")
    max_cp = int(max_change_points)
    if max_cp >= n:
        raise ValueError(f"max_change_points must be < T (got {max_cp} for T={n})")
    if max_cp < 0:
        raise ValueError("max_change_points must be >= 0")
    scatters = segment_scatters(cosine_kernel(feats))
    costs, boundary_lists = _dp_change_points(scatters, max_cp)
    m_values = np.arange(max_cp + 1, dtype=np.float64)
    penalties = np.zeros(max_cp + 1)
    penalties[1:] = m_values[1:] * (np.log(n / m_values[1:]) + 1.0)
    total = costs + penalty_weight * penalties
    m_best = int(np.argmin(total))  # first minimum, so fewer boundaries on ties
    boundaries = np.array(boundary_lists[m_best], dtype=int)
    return SegmentationResult(
        change_points=boundaries,
        segments=_segments_from_boundaries(boundaries, n),
    )


def map_segments_to_original(result, picks, n_frames_original):
    """Expand subsampled-frame boundaries to original-frame intervals.

    A change point at subsampled index c becomes an original-frame boundary
    at picks[c], the first original frame of the new segment's first pick.
    """
    picks = np.asarray(picks, dtype=int)
    boundaries = [int(picks[c]) for c in result.change_points]
    return SegmentationResult(
        change_points=np.array(boundaries, dtype=int),
        segments=_segments_from_boundaries(boundaries, n_frames_original),
    )
