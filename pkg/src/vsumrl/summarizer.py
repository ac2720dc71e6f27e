"""Keyshot assembly: per-frame probabilities -> budgeted shot selection.

Frame-selection probabilities computed on the subsampled sequence are
upsampled to original frames as a step function (each original frame takes
the probability of its nearest preceding pick), averaged within each shot,
and shots are chosen by an exact 0/1 knapsack over integer frame lengths
so that the summary never exceeds the length budget, by default 15% of the
original video.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class ShotTable:
    """Per-shot inclusive [start, end] interval, length, and mean score."""

    intervals: np.ndarray   # (S, 2) int, original-frame space
    lengths: np.ndarray     # (S,) int
    scores: np.ndarray      # (S,) float

    @property
    def n_shots(self):
        return self.intervals.shape[0]


@dataclass
class SummaryMask:
    """Binary per-original-frame summary plus which shots produced it."""

    frames: np.ndarray          # (n_frames_original,) uint8
    selected_shots: np.ndarray  # sorted shot indices
    total_length: int


def upsample_scores(frame_probs, picks, n_frames_original):
    """Step-function expansion of subsampled scores to original frames.

    Original frame f takes the score of the last pick at or before f;
    frames before the first pick take the first score.
    """
    probs = np.asarray(frame_probs, dtype=np.float64)
    picks = np.asarray(picks, dtype=int)
    frames = np.arange(n_frames_original)
    idx = np.searchsorted(picks, frames, side="right") - 1
    idx = np.clip(idx, 0, probs.size - 1)
    return probs[idx]


def shot_scores(frame_probs, picks, segments, n_frames_original=None):
    """Mean upsampled score per shot; ``segments`` are original-frame
    inclusive intervals."""
    segments = np.asarray(segments, dtype=int).reshape(-1, 2)
    if n_frames_original is None:
        n_frames_original = int(segments[-1, 1]) + 1
    full = upsample_scores(frame_probs, picks, n_frames_original)
    scores = np.array([full[s:e + 1].mean() for s, e in segments])
    lengths = segments[:, 1] - segments[:, 0] + 1
    return ShotTable(intervals=segments, lengths=lengths.astype(int), scores=scores)


def knapsack_select(shots, budget):
    """Exact 0/1 knapsack over shots: maximize total score within budget.

    DP over (shot, capacity) with integer frame lengths. Ties prefer the
    selection that excludes the later shot, which makes the result
    deterministic.
    """
    budget = int(budget)
    lengths = np.asarray(shots.lengths, dtype=int)
    scores = np.asarray(shots.scores, dtype=np.float64)
    n = lengths.size
    if budget <= 0 or n == 0:
        return np.array([], dtype=int)
    value = np.zeros((n + 1, budget + 1))
    taken = np.zeros((n + 1, budget + 1), dtype=bool)
    for i in range(1, n + 1):
        w = lengths[i - 1]
        v = scores[i - 1]
        value[i] = value[i - 1]
        if w <= budget:
            cand = value[i - 1, : budget + 1 - w] + v
            improved = cand > value[i, w:]
            value[i, w:][improved] = cand[improved]
            taken[i, w:][improved] = True
    picked = []
    cap = budget
    for i in range(n, 0, -1):
        if taken[i, cap]:
            picked.append(i - 1)
            cap -= lengths[i - 1]
    return np.array(sorted(picked), dtype=int)


def generate_summary(record, frame_probs, budget_fraction=0.15):
    """Compose shot scoring and knapsack selection into a summary mask."""
    if not 0.0 < budget_fraction <= 1.0:
        raise ValueError("budget_fraction must be in (0, 1]")
    n = record.n_frames_original
    table = shot_scores(frame_probs, record.picks, record.change_points, n)
    budget = int(np.floor(budget_fraction * n))
    chosen = knapsack_select(table, budget)
    mask = np.zeros(n, dtype=np.uint8)
    for idx in chosen:
        s, e = table.intervals[idx]
        mask[s:e + 1] = 1
    return SummaryMask(frames=mask, selected_shots=chosen, total_length=int(mask.sum()))


def mask_to_runs(mask):
    """Run-length encode the 1-runs of a binary mask as [start, length]."""
    mask = np.asarray(mask).astype(bool)
    if mask.size == 0:
        return []
    padded = np.concatenate([[0], mask.view(np.int8), [0]])
    diff = np.diff(padded)
    starts = np.flatnonzero(diff == 1)
    ends = np.flatnonzero(diff == -1)
    return [[int(s), int(e - s)] for s, e in zip(starts, ends)]
