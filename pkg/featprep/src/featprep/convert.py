"""Public annotation archives -> engine sidecar fields.

Two layouts are recognized. SumMe ships one MATLAB file per video with a
binary ``user_score`` matrix (frames x annotators) marking each annotator's
selected frames; those columns become ``user_summaries`` rows directly.
TVSum ships one TSV with 20 rows per video of comma-separated frame-level
importance scores; each annotator's scores are averaged over the video's
shots and a knapsack picks shots under a 15% length budget, yielding one
binary keyshot summary per annotator. Anything else is rejected as an
unknown layout.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
from scipy.io import loadmat

from .fvs import FeatPrepError, read_sidecar, update_sidecar
from .segments import knapsack_select


def _require_length(name, got, expected):
    if got != expected:
        raise FeatPrepError(
            f"{name}: annotation covers {got} frames but the video has "
            f"{expected}; refusing to guess an alignment")


def attach_summe_annotations(mat_path, sidecar_path):
    """Merge a SumMe per-video .mat into an extracted video's sidecar."""
    mat_path = Path(mat_path)
    try:
        mat = loadmat(mat_path)
    except Exception as exc:
        raise FeatPrepError(f"cannot read {mat_path}: {exc}") from exc
    if "user_score" not in mat:
        raise FeatPrepError(
            f"{mat_path}: no user_score variable; keys {sorted(k for k in mat if not k.startswith('__'))} "
            "do not look like a SumMe annotation file")
    user_score = np.asarray(mat["user_score"], dtype=float)  # frames x users
    meta = read_sidecar(sidecar_path)
    _require_length(mat_path.name, user_score.shape[0], meta["n_frames_original"])
    summaries = (user_score.T > 0).astype(np.uint8)
    fields = {"user_summaries": summaries.tolist()}
    if "gt_score" in mat:
        gt = np.asarray(mat["gt_score"], dtype=float).reshape(-1)
        _require_length(f"{mat_path.name} gt_score", gt.size, meta["n_frames_original"])
        fields["gt_importance"] = gt[np.asarray(meta["picks"], dtype=int)].tolist()
    return update_sidecar(sidecar_path, **fields)


def read_tvsum_tsv(tsv_path):
    """Parse the TVSum annotation TSV into {video_id: score matrix U x n}."""
    tsv_path = Path(tsv_path)
    rows = {}
    try:
        with open(tsv_path, "r", encoding="utf-8") as fh:
            for line in csv.reader(fh, delimiter="\t"):
                if not line:
                    continue
                if len(line) != 3:
                    raise FeatPrepError(
                        f"{tsv_path}: expected 3 tab-separated columns "
                        f"(video id, category, scores), got {len(line)}")
                video_id, _category, scores = line
                values = np.fromstring(scores, dtype=float, sep=",")
                if values.size == 0:
                    raise FeatPrepError(f"{tsv_path}: empty score list for {video_id}")
                rows.setdefault(video_id, []).append(values)
    except OSError as exc:
        raise FeatPrepError(f"cannot read {tsv_path}: {exc}") from exc
    out = {}
    for video_id, score_rows in rows.items():
        lengths = {r.size for r in score_rows}
        if len(lengths) != 1:
            raise FeatPrepError(
                f"{tsv_path}: inconsistent score lengths for {video_id}: {sorted(lengths)}")
        out[video_id] = np.stack(score_rows)
    return out


def scores_to_keyshot_summary(scores, shot_intervals, budget_fraction=0.15):
    """One annotator's frame scores -> a binary keyshot summary.

    Shots are scored by their mean frame importance and selected by a 0/1
    knapsack under ``budget_fraction`` of the video length.
    """
    scores = np.asarray(scores, dtype=float)
    n = scores.size
    intervals = np.asarray(shot_intervals, dtype=int)
    lengths = intervals[:, 1] - intervals[:, 0] + 1
    values = np.array([scores[s:e + 1].mean() for s, e in intervals])
    chosen = knapsack_select(lengths, values, int(budget_fraction * n))
    mask = np.zeros(n, dtype=np.uint8)
    for i in chosen:
        s, e = intervals[i]
        mask[s:e + 1] = 1
    return mask


def attach_tvsum_annotations(scores, sidecar_path, budget_fraction=0.15):
    """Merge one TVSum video's U x n score matrix into its sidecar."""
    meta = read_sidecar(sidecar_path)
    scores = np.atleast_2d(np.asarray(scores, dtype=float))
    _require_length(meta["video_id"], scores.shape[1], meta["n_frames_original"])
    intervals = meta["change_points"]
    summaries = np.stack([
        scores_to_keyshot_summary(row, intervals, budget_fraction)
        for row in scores])
    picks = np.asarray(meta["picks"], dtype=int)
    return update_sidecar(
        sidecar_path,
        user_summaries=summaries.tolist(),
        gt_importance=scores.mean(axis=0)[picks].tolist(),
    )


def convert_summe(annotation_dir, data_dir):
    """Attach every <id>.mat in a SumMe archive to its extracted sidecar."""
    annotation_dir = Path(annotation_dir)
    data_dir = Path(data_dir)
    mats = sorted(annotation_dir.glob("*.mat"))
    if not mats:
        raise FeatPrepError(f"no .mat annotation files under {annotation_dir}")
    converted = []
    for mat_path in mats:
        sidecar = data_dir / f"{mat_path.stem}.json"
        if not sidecar.is_file():
            continue
        attach_summe_annotations(mat_path, sidecar)
        converted.append(mat_path.stem)
    if not converted:
        raise FeatPrepError(
            f"no annotation file in {annotation_dir} matches a sidecar in {data_dir}")
    return converted


def convert_tvsum(tsv_path, data_dir, budget_fraction=0.15):
    """Attach every matching video's rows of a TVSum TSV to its sidecar."""
    data_dir = Path(data_dir)
    table = read_tvsum_tsv(tsv_path)
    converted = []
    for video_id, scores in table.items():
        sidecar = data_dir / f"{video_id}.json"
        if not sidecar.is_file():
            continue
        attach_tvsum_annotations(scores, sidecar, budget_fraction)
        converted.append(video_id)
    if not converted:
        raise FeatPrepError(
            f"no video id in {tsv_path} matches a sidecar in {data_dir}")
    return converted
