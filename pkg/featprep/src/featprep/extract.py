"""Video decoding, 2 fps frame sampling, and feature file emission.

Frames are sampled with a uniform stride anchored at frame 0 (stride =
round(native_fps / target_fps)), embedded by the CNN backbone, and written
as an FVS1 feature file plus JSON sidecar. Shot boundaries come from kernel
temporal segmentation on the sampled features and are expanded to original
frame space at the first frame of each boundary pick.
"""

from __future__ import annotations

from pathlib import Path

import cv2
import numpy as np

from .backbone import FeatureBackbone
from .fvs import FeatPrepError, write_features, write_sidecar
from .segments import intervals_from_change_points, kts_change_points


def _decode_sampled(video_path, stride):
    """Read a video once; keep every stride-th frame. Returns (frames,
    total_frame_count, native_fps)."""
    cap = cv2.VideoCapture(str(video_path))
    if not cap.isOpened():
        raise FeatPrepError(f"cannot decode video: {video_path}")
    fps = cap.get(cv2.CAP_PROP_FPS) or 0.0
    frames = []
    index = 0
    while True:
        ok, frame = cap.read()
        if not ok:
            break
        if index % stride == 0:
            frames.append(frame)
        index += 1
    cap.release()
    if index == 0:
        raise FeatPrepError(f"video has no decodable frames: {video_path}")
    return frames, index, fps


def extract_features(video_path, out_dir, fps=2.0, backbone=None,
                     batch_size=16, shot_seconds=2.0, video_id=None):
    """Decode, sample at ``fps``, embed, segment, and write engine files.

    Returns the path of the written feature file. The sidecar records the
    frame mapping, the detected shot boundaries and the weight source of
    the backbone.
    """
    video_path = Path(video_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if backbone is None:
        backbone = FeatureBackbone()
    vid = video_id or video_path.stem

    probe = cv2.VideoCapture(str(video_path))
    if not probe.isOpened():
        raise FeatPrepError(f"cannot decode video: {video_path}")
    native_fps = probe.get(cv2.CAP_PROP_FPS) or 0.0
    probe.release()
    if native_fps <= 0:
        native_fps = 30.0  # container did not say; assume a common rate
    stride = max(1, round(native_fps / fps))

    frames, n_frames, _ = _decode_sampled(video_path, stride)
    if len(frames) < 2:
        raise FeatPrepError(
            f"{video_path}: too short, only {len(frames)} sampled frames")
    features = backbone.extract(frames, batch_size=batch_size)
    picks = (np.arange(len(frames)) * stride).tolist()

    seconds_per_sample = stride / native_fps
    max_cp = max(1, int(len(frames) * seconds_per_sample / shot_seconds))
    change_points = kts_change_points(features, max_cp)
    boundaries = [picks[c] for c in change_points]
    intervals = intervals_from_change_points(boundaries, n_frames)

    feature_path = out_dir / f"{vid}.fvs"
    write_features(feature_path, features)
    write_sidecar(out_dir / f"{vid}.json", {
        "video_id": vid,
        "n_frames_original": int(n_frames),
        "picks": picks,
        "change_points": intervals,
        "native_fps": native_fps,
        "sample_fps": native_fps / stride,
        "backbone_weights": backbone.weight_source,
    })
    return feature_path


def extract_directory(video_dir, out_dir, pattern="*", **kwargs):
    """Batch extraction over every video file matching ``pattern``."""
    video_dir = Path(video_dir)
    videos = sorted(p for p in video_dir.glob(pattern)
                    if p.suffix.lower() in (".avi", ".mp4", ".mkv", ".mov", ".webm"))
    if not videos:
        raise FeatPrepError(f"no video files under {video_dir}")
    backbone = kwargs.pop("backbone", None) or FeatureBackbone()
    return [extract_features(v, out_dir, backbone=backbone, **kwargs)
            for v in videos]
