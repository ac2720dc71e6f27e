"""Deterministic synthetic corpora for desk-scale tests and demos.

Videos are built from temporally contiguous feature clusters whose centers
are distinct unit axes, so cross-cluster cosine dissimilarity is exactly 1
and reward expectations are analytic. Cluster medoids double as keyframe
labels, and user summaries mark a block of original frames around each
medoid.
"""

from __future__ import annotations

import numpy as np

from .dataio import VideoRecord, validate_record, write_video


def make_clustered_video(n_clusters, frames_per_cluster, dim, noise, seed,
                         video_id=None, stride=15):
    """One video of ``n_clusters`` contiguous feature clusters.

    Each subsampled frame is its cluster's unit-axis center plus gaussian
    noise. ``stride`` original frames back each subsampled frame, which
    fixes picks, change points and the original frame count.
    """
    if dim < n_clusters:
        raise ValueError("need dim >= n_clusters for distinct unit-axis centers")
    rng = np.random.default_rng(seed)
    t_total = n_clusters * frames_per_cluster
    feats = np.zeros((t_total, dim))
    labels = np.repeat(np.arange(n_clusters), frames_per_cluster)
    feats[np.arange(t_total), labels] = 1.0
    if noise > 0:
        feats += rng.normal(0.0, noise, size=feats.shape)

    medoids = []
    for c in range(n_clusters):
        members = np.flatnonzero(labels == c)
        block = feats[members]
        pair_d = np.linalg.norm(block[:, None, :] - block[None, :, :], axis=2)
        medoids.append(int(members[np.argmin(pair_d.sum(axis=1))]))

    n_original = t_total * stride
    picks = np.arange(t_total) * stride
    change_points = np.array([
        [c * frames_per_cluster * stride, (c + 1) * frames_per_cluster * stride - 1]
        for c in range(n_clusters)
    ])

    # two synthetic annotators: one marks the medoid's block, the other the
    # central block of each cluster
    user_summaries = np.zeros((2, n_original), dtype=np.uint8)
    for m in medoids:
        user_summaries[0, m * stride:(m + 1) * stride] = 1
    for c in range(n_clusters):
        mid = c * frames_per_cluster + frames_per_cluster // 2
        user_summaries[1, mid * stride:(mid + 1) * stride] = 1

    centers = np.zeros((n_clusters, dim))
    centers[np.arange(n_clusters), np.arange(n_clusters)] = 1.0
    dist_to_center = np.linalg.norm(feats - centers[labels], axis=1)
    gt_importance = 1.0 / (1.0 + dist_to_center)

    record = VideoRecord(
        video_id=video_id or f"synth{seed}",
        features=feats,
        n_frames_original=n_original,
        picks=picks,
        change_points=change_points,
        user_summaries=user_summaries,
        keyframe_indices=np.array(medoids),
        gt_importance=gt_importance,
    )
    return validate_record(record)


def make_corpus(n_videos, n_clusters, frames_per_cluster, dim, noise, seed):
    """A list of clustered videos with per-video derived seeds."""
    return [
        make_clustered_video(n_clusters, frames_per_cluster, dim, noise,
                             seed=seed + i, video_id=f"synth{i:03d}")
        for i in range(n_videos)
    ]


def write_corpus(records, out_dir):
    """Write records as FVS1 + sidecar files, like real data."""
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for rec in records:
        write_video(rec, out / f"{rec.video_id}.fvs")
    return out
