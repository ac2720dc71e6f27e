"""On-disk container for per-video features and annotations.

Features live in a flat binary file: magic ``FVS1``, a u32 format version,
u32 frame count T, u32 feature dim D, then T*D float32 little-endian values
in row-major order. Everything else (frame mapping, shot boundaries, user
annotations) sits in a JSON sidecar named ``<video_id>.json`` next to the
feature file. Loading validates every invariant and reports the offending
field; computation downstream happens in float64 regardless of the 32-bit
storage.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

FEATURE_MAGIC = b"FVS1"
FEATURE_VERSION = 1
FEATURE_SUFFIX = ".fvs"


class DataError(Exception):
    """Malformed file or violated record invariant."""


@dataclass
class VideoRecord:
    """One video's feature matrix plus the metadata the engine needs.

    ``features`` is T x D over the subsampled frames; ``picks[t]`` is the
    original frame index of subsampled frame t; ``change_points`` are
    inclusive [start, end] original-frame intervals that tile the video.
    ``user_summaries`` (U x n_frames_original, binary), ``keyframe_indices``
    (subsampled space) and ``gt_importance`` (length T) are optional
    annotation payloads for evaluation and supervised training.
    """

    video_id: str
    features: np.ndarray
    n_frames_original: int
    picks: np.ndarray
    change_points: np.ndarray
    user_summaries: np.ndarray | None = None
    keyframe_indices: np.ndarray | None = None
    gt_importance: np.ndarray | None = None

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.picks = np.asarray(self.picks, dtype=np.int64)
        self.change_points = np.asarray(self.change_points, dtype=np.int64).reshape(-1, 2)
        if self.user_summaries is not None:
            self.user_summaries = np.asarray(self.user_summaries, dtype=np.uint8)
        if self.keyframe_indices is not None:
            self.keyframe_indices = np.asarray(self.keyframe_indices, dtype=np.int64)
        if self.gt_importance is not None:
            self.gt_importance = np.asarray(self.gt_importance, dtype=np.float64)

    @property
    def n_frames(self):
        return self.features.shape[0]

    @property
    def feature_dim(self):
        return self.features.shape[1]


def validate_record(record):
    """Raise :class:`DataError` naming the first violated field."""
    feats = record.features
    if feats.ndim != 2:
        raise DataError(f"features: expected a 2-d matrix, got ndim={feats.ndim}")
    t, d = feats.shape
    if t < 2:
        raise DataError(f"features: need at least 2 frames, got T={t}")
    if d < 1:
        raise DataError(f"features: need at least 1 dimension, got D={d}")
    if not np.all(np.isfinite(feats)):
        raise DataError("features: non-finite value")
    n = record.n_frames_original
    if n <= 0:
        raise DataError(f"n_frames_original: must be positive, got {n}")
    picks = record.picks
    if picks.shape != (t,):
        raise DataError(f"picks: expected length {t}, got {picks.shape}")
    if np.any(np.diff(picks) <= 0):
        raise DataError("picks not increasing")
    if picks[0] < 0 or picks[-1] >= n:
        raise DataError(f"picks: values must lie in [0, {n})")
    cps = record.change_points
    if cps.shape[0] == 0:
        raise DataError("change_points: empty")
    if cps[0, 0] != 0 or cps[-1, 1] != n - 1:
        raise DataError(f"change_points: must cover [0, {n - 1}] exactly")
    if np.any(cps[:, 0] > cps[:, 1]):
        raise DataError("change_points: interval with start > end")
    if np.any(cps[1:, 0] != cps[:-1, 1] + 1):
        raise DataError("change_points: intervals must be sorted, disjoint and contiguous")
    if record.user_summaries is not None:
        us = record.user_summaries
        if us.ndim != 2 or us.shape[1] != n:
            raise DataError(f"user_summaries: expected U x {n}, got {us.shape}")
        if not np.isin(us, (0, 1)).all():
            raise DataError("user_summaries: entries must be 0 or 1")
    if record.keyframe_indices is not None:
        kf = record.keyframe_indices
        if kf.size and (kf.min() < 0 or kf.max() >= t):
            raise DataError(f"keyframe_indices: values must lie in [0, {t})")
    if record.gt_importance is not None:
        gt = record.gt_importance
        if gt.shape != (t,):
            raise DataError(f"gt_importance: expected length {t}, got {gt.shape}")
        if not np.all(np.isfinite(gt)):
            raise DataError("gt_importance: non-finite value")
    return record


def _sidecar_path(feature_path):
    return Path(feature_path).with_suffix(".json")


def write_video(record, path):
    """Write the feature file and JSON sidecar; validates first."""
    validate_record(record)
    path = Path(path)
    payload = record.features.astype("<f4").tobytes(order="C")
    header = FEATURE_MAGIC + struct.pack(
        "<III", FEATURE_VERSION, record.n_frames, record.feature_dim)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)
    meta = {
        "video_id": record.video_id,
        "n_frames_original": int(record.n_frames_original),
        "picks": record.picks.tolist(),
        "change_points": record.change_points.tolist(),
    }
    if record.user_summaries is not None:
        meta["user_summaries"] = record.user_summaries.tolist()
    if record.keyframe_indices is not None:
        meta["keyframe_indices"] = record.keyframe_indices.tolist()
    if record.gt_importance is not None:
        meta["gt_importance"] = record.gt_importance.tolist()
    with open(_sidecar_path(path), "w", encoding="utf-8") as fh:
        json.dump(meta, fh)
        fh.write("\n")


def load_video(path):
    """Load and validate one video from its feature file path."""
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read feature file {path}: {exc}") from exc
    if len(blob) < 16 or blob[:4] != FEATURE_MAGIC:
        raise DataError(f"{path}: bad magic, not an FVS1 feature file")
    version, t, d = struct.unpack_from("<III", blob, 4)
    if version != FEATURE_VERSION:
        raise DataError(f"{path}: unsupported version {version}")
    expected = 16 + 4 * t * d
    if len(blob) != expected:
        raise DataError(
            f"{path}: payload size mismatch, header says T={t} D={d} "
            f"({expected} bytes) but file has {len(blob)}")
    feats = np.frombuffer(blob, dtype="<f4", count=t * d, offset=16).reshape(t, d)
    sidecar = _sidecar_path(path)
    try:
        with open(sidecar, "r", encoding="utf-8") as fh:
            meta = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read sidecar {sidecar}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"sidecar {sidecar}: invalid JSON ({exc})") from exc
    for key in ("video_id", "n_frames_original", "picks", "change_points"):
        if key not in meta:
            raise DataError(f"sidecar {sidecar}: missing field {key!r}")
    record = VideoRecord(
        video_id=meta["video_id"],
        features=feats.astype(np.float64),
        n_frames_original=int(meta["n_frames_original"]),
        picks=meta["picks"],
        change_points=meta["change_points"],
        user_summaries=meta.get("user_summaries"),
        keyframe_indices=meta.get("keyframe_indices"),
        gt_importance=meta.get("gt_importance"),
    )
    return validate_record(record)


def load_corpus(data_dir):
    """Load every ``*.fvs`` under a directory, sorted by file name."""
    paths = sorted(Path(data_dir).glob(f"*{FEATURE_SUFFIX}"))
    if not paths:
        raise DataError(f"no {FEATURE_SUFFIX} files under {data_dir}")
    return [load_video(p) for p in paths]


@dataclass
class SplitSpec:
    """Named train/test fold list over video ids (datasets may be mixed)."""

    name: str
    folds: list = field(default_factory=list)  # [(train_ids, test_ids), ...]

    def __post_init__(self):
        for i, (train, test) in enumerate(self.folds):
            overlap = set(train) & set(test)
            if overlap:
                raise DataError(f"fold {i}: train/test overlap {sorted(overlap)}")


def make_folds(video_ids, k, seed, name="canonical"):
    """Deterministic k-fold split: each id lands in exactly one test set."""
    ids = list(video_ids)
    if k < 2:
        raise ValueError(f"need k >= 2 folds, got {k}")
    if len(ids) < k:
        raise ValueError(f"need at least {k} videos for {k} folds, got {len(ids)}")
    order = list(np.random.default_rng(seed).permutation(len(ids)))
    shuffled = [ids[i] for i in order]
    chunks = [list(c) for c in np.array_split(shuffled, k)]
    folds = []
    for i, test in enumerate(chunks):
        train = [v for j, c in enumerate(chunks) if j != i for v in c]
        folds.append((train, test))
    return SplitSpec(name=name, folds=folds)


def save_split(spec, path):
    doc = {
        "name": spec.name,
        "folds": [{"train": list(tr), "test": list(te)} for tr, te in spec.folds],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_split(path):
    """Read a split file; accepts the object form or a bare fold list."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read split file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"split file {path}: invalid JSON ({exc})") from exc
    if isinstance(doc, list):
        doc = {"name": "custom", "folds": doc}
    folds = []
    for i, fold in enumerate(doc.get("folds", [])):
        if isinstance(fold, dict):
            folds.append((list(fold["train"]), list(fold["test"])))
        else:
            train, test = fold
            folds.append((list(train), list(test)))
    if not folds:
        raise DataError(f"split file {path}: no folds")
    return SplitSpec(name=doc.get("name", "custom"), folds=folds)
