import cv2
import numpy as np
import pytest

from featprep.backbone import FeatureBackbone


def write_scene_video(path, scene_seconds, fps=30, size=(96, 64), seed=0):
    """Encode a real video file with one flat-colored scene per entry."""
    rng = np.random.default_rng(seed)
    writer = cv2.VideoWriter(str(path), cv2.VideoWriter_fourcc(*"MJPG"),
                             float(fps), size)
    assert writer.isOpened(), "OpenCV cannot encode MJPG AVI in this environment"
    total = 0
    for scene_idx, seconds in enumerate(scene_seconds):
        color = tuple(int(c) for c in rng.integers(30, 226, size=3))
        for _ in range(int(round(seconds * fps))):
            frame = np.full((size[1], size[0], 3), color, dtype=np.uint8)
            noise = rng.integers(0, 12, size=frame.shape, dtype=np.uint8)
            frame = cv2.add(frame, noise)
            cv2.putText(frame, f"s{scene_idx}", (4, 20),
                        cv2.FONT_HERSHEY_SIMPLEX, 0.5, (255, 255, 255))
            writer.write(frame)
            total += 1
    writer.release()
    return total


@pytest.fixture(scope="session")
def backbone():
    # random weights: deterministic, no network; width matches the
    # architecture's penultimate layer either way
    return FeatureBackbone(weights="random", seed=0)


@pytest.fixture(scope="session")
def video_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("videos")
    write_scene_video(root / "clip_a.avi", [2.0, 2.0, 2.0], fps=24, seed=1)
    write_scene_video(root / "clip_b.avi", [3.0, 2.0], fps=30, seed=2)
    write_scene_video(root / "clip_c.avi", [1.5, 1.5, 1.5, 1.5], fps=25, seed=3)
    return root
