#!/usr/bin/env python3
"""Shot segmentation + knapsack summary assembly, end to end on one video.

Run: python demos/demo_segmentation_summary.py
"""
import numpy as np

from vsumrl.segmentation import kts_segment, map_segments_to_original
from vsumrl.summarizer import generate_summary, mask_to_runs, shot_scores
from vsumrl.synthgen import make_clustered_video

# eight short scenes so single shots fit comfortably inside a 15% budget
video = make_clustered_video(n_clusters=8, frames_per_cluster=5, dim=10,
                             noise=0.08, seed=3)
print(f"video {video.video_id}: T={video.n_frames} subsampled frames, "
      f"{video.n_frames_original} original frames")

print("\n=== kernel temporal segmentation on the features ===")
result = kts_segment(video.features, max_change_points=12, penalty_weight=1.0)
print(f"detected change points (subsampled space): {result.change_points.tolist()}")
print(f"ground-truth cluster boundaries:           "
      f"{[int(cp[0] / 15) for cp in video.change_points[1:]]}")

mapped = map_segments_to_original(result, video.picks, video.n_frames_original)
print(f"shots in original frame space: {mapped.segments.tolist()}")

print("\n=== scoring shots with a synthetic importance curve ===")
# a made-up importance curve peaking in scenes 1, 4 and 6
t = np.arange(video.n_frames)
probs = 0.25 + 0.6 * np.isin(t // 5, [1, 4, 6])
table = shot_scores(probs, video.picks, mapped.segments, video.n_frames_original)
for i, ((s, e), length, score) in enumerate(
        zip(table.intervals, table.lengths, table.scores)):
    print(f"  shot {i}: frames [{s:4d}, {e:4d}]  length {length:4d}  score {score:.3f}")

print("\n=== knapsack selection under a 15% budget ===")
mask = generate_summary(video, probs, budget_fraction=0.15)
budget = int(0.15 * video.n_frames_original)
print(f"budget {budget} frames -> selected shots {mask.selected_shots.tolist()}, "
      f"summary length {mask.total_length}")
print(f"summary mask runs [start, length]: {mask_to_runs(mask.frames)}")
print("only whole shots are eligible, so the budget admits one 75-frame shot")
print("and the knapsack picks a top-scoring one")
