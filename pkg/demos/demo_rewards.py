#!/usr/bin/env python3
"""Walk through the diversity / representativeness reward on toy features.

Run: python demos/demo_rewards.py
"""
import numpy as np

from vsumrl.rewards import (
    RewardConfig,
    dissimilarity,
    diversity_reward,
    representativeness_reward,
    total_reward,
)

print("=== cosine dissimilarity basics ===")
e1 = np.array([1.0, 0.0])
e2 = np.array([0.0, 1.0])
print(f"d(e1, e1)  = {dissimilarity(e1, e1):.3f}   (identical)")
print(f"d(e1, e2)  = {dissimilarity(e1, e2):.3f}   (orthogonal)")
print(f"d(e1, -e1) = {dissimilarity(e1, -e1):.3f}   (antiparallel)")

# a 12-frame sequence made of three 4-frame clusters on unit axes
rng = np.random.default_rng(0)
frames_per_cluster = 4
centers = np.eye(3)
features = np.repeat(centers, frames_per_cluster, axis=0)
features += rng.normal(0, 0.05, size=features.shape)
T = features.shape[0]
print(f"\n=== {T}-frame sequence, three temporal clusters ===")

no_window = RewardConfig(use_lambda=False)
selections = {
    "one frame per cluster (0, 5, 10)": [0, 5, 10],
    "all frames of one cluster (0..3)": [0, 1, 2, 3],
    "everything": list(range(T)),
    "single frame": [6],
}
print(f"{'selection':40s} {'r_div':>7s} {'r_rep':>7s} {'total':>7s}")
for name, sel in selections.items():
    actions = np.zeros(T, dtype=int)
    actions[sel] = 1
    value = total_reward(features, actions, no_window)
    print(f"{name:40s} {value.r_div:7.3f} {value.r_rep:7.3f} {value.total:7.3f}")

print("\nSpreading the selection across clusters maximizes both terms;")
print("an empty selection would earn exactly zero.")

print("\n=== the temporal window on the diversity term ===")
# two identical frames far apart in time: with a window, their pairwise
# dissimilarity is forced to 1, so distant near-duplicates are not punished
dup = np.tile([[1.0, 0.0]], (31, 1))
for window in (np.inf, 20):
    cfg = RewardConfig(use_lambda=np.isfinite(window),
                       lambda_window=window if np.isfinite(window) else 20)
    div = diversity_reward(dup, [0, 30], cfg)
    print(f"identical frames at t=0 and t=30, window={window}: r_div = {div:.3f}")

print("\n=== representativeness is a coverage score ===")
for sel in ([0], [0, 5], [0, 5, 10], list(range(T))):
    rep = representativeness_reward(features, sel)
    print(f"selected {str(sel):28s} -> r_rep = {rep:.4f}")
