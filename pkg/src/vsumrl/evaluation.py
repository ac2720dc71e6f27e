"""F-score evaluation against user summaries, plus curve cross-correlation.

A machine summary is compared to each annotator's binary frame vector via
overlap precision/recall; per-video scores aggregate over annotators by
mean or max (datasets differ in convention), and a fold's score is the
mean over its test videos. The zero-lag normalized cross-correlation of
mean-centered score curves quantifies how closely a predicted importance
curve tracks a ground-truth one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import policy_net, summarizer


@dataclass
class VideoScore:
    video_id: str
    precision: float   # percent
    recall: float
    f_score: float


@dataclass
class EvalResult:
    mode: str                       # "average" | "max" across annotators
    videos: list = field(default_factory=list)
    mean_f: float = 0.0


def fscore(machine, user):
    """Precision, recall and F of two binary frame vectors, in [0, 1]."""
    m = np.asarray(machine).astype(bool)
    u = np.asarray(user).astype(bool)
    if m.shape != u.shape:
        raise ValueError(f"mask length mismatch: {m.shape} vs {u.shape}")
    overlap = float(np.sum(m & u))
    precision = overlap / m.sum() if m.any() else 0.0
    recall = overlap / u.sum() if u.any() else 0.0
    if precision + recall == 0.0:
        return precision, recall, 0.0
    return precision, recall, 2.0 * precision * recall / (precision + recall)


def multi_user_fscore(machine, user_summaries, mode="average"):
    """Aggregate F over annotators; ``mode`` is "average" or "max"."""
    users = np.atleast_2d(np.asarray(user_summaries))
    fs = [fscore(machine, user)[2] for user in users]
    if mode == "average":
        return float(np.mean(fs))
    if mode == "max":
        return float(np.max(fs))
    raise ValueError(f"unknown aggregation mode {mode!r}")


def xcorr(pred_scores, gt_scores):
    """Zero-lag normalized cross-correlation of mean-centered curves.

    Constant input on either side yields 0 by convention.
    """
    a = np.asarray(pred_scores, dtype=np.float64)
    b = np.asarray(gt_scores, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"score length mismatch: {a.shape} vs {b.shape}")
    a = a - a.mean()
    b = b - b.mean()
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def evaluate_fold(params, test_videos, mode="average", budget_fraction=0.15):
    """Summarize and score every test video with a trained policy."""
    result = EvalResult(mode=mode)
    for video in test_videos:
        if video.user_summaries is None:
            raise ValueError(f"video {video.video_id!r} has no user summaries")
        trace = policy_net.forward(params, video.features)
        mask = summarizer.generate_summary(video, trace.probs, budget_fraction)
        per_user = np.array([fscore(mask.frames, u) for u in video.user_summaries])
        if mode == "average":
            p, r, f = per_user.mean(axis=0)
        elif mode == "max":
            p, r, f = per_user[np.argmax(per_user[:, 2])]
        else:
            raise ValueError(f"unknown aggregation mode {mode!r}")
        result.videos.append(VideoScore(
            video_id=video.video_id,
            precision=100.0 * p,
            recall=100.0 * r,
            f_score=100.0 * f,
        ))
    result.mean_f = float(np.mean([v.f_score for v in result.videos])) if result.videos else 0.0
    return result
