import math

import numpy as np
import pytest

from vsumrl.rewards import (
    RewardConfig,
    RewardValue,
    dissimilarity,
    diversity_reward,
    representativeness_reward,
    total_reward,
)

NO_WINDOW = RewardConfig(use_lambda=False)


def brute_diversity(features, selected, lam=math.inf):
    """Direct double loop over ordered pairs of selected indices."""
    idx = sorted(set(selected))
    k = len(idx)
    if k < 2:
        return 0.0
    acc = 0.0
    for t in idx:
        for tp in idx:
            if tp == t:
                continue
            if abs(t - tp) > lam:
                acc += 1.0
            else:
                acc += dissimilarity(features[t], features[tp])
    return acc / (k * (k - 1))


def brute_representativeness(features, selected):
    idx = sorted(set(selected))
    total = 0.0
    for t in range(features.shape[0]):
        total += min(np.linalg.norm(features[t] - features[tp]) for tp in idx)
    return math.exp(-total / features.shape[0])


def test_dissimilarity_hand_cases():
    assert dissimilarity(np.array([1.0, 0.0]), np.array([1.0, 0.0])) == pytest.approx(0.0)
    assert dissimilarity(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == pytest.approx(1.0)
    assert dissimilarity(np.array([1.0, 0.0]), np.array([-1.0, 0.0])) == pytest.approx(2.0)


def test_dissimilarity_zero_norm_is_neutral():
    assert dissimilarity(np.zeros(3), np.array([1.0, 0.0, 0.0])) == 1.0


def test_diversity_identical_frames_zero():
    feats = np.tile([[1.0, 2.0]], (5, 1))
    assert diversity_reward(feats, [0, 2, 4], NO_WINDOW) == pytest.approx(0.0)


def test_diversity_hand_case_unit_axes():
    feats = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])
    assert diversity_reward(feats, [0, 1], NO_WINDOW) == pytest.approx(1.0)


def test_diversity_single_frame_zero():
    feats = np.eye(3)
    assert diversity_reward(feats, [1], NO_WINDOW) == 0.0


def test_lambda_rule_forces_distant_pairs_to_one():
    # identical frames 30 steps apart still count as fully diverse
    feats = np.tile([[1.0, 0.0]], (31, 1))
    cfg = RewardConfig(lambda_window=20)
    assert diversity_reward(feats, [0, 30], cfg) == pytest.approx(1.0)
    assert diversity_reward(feats, [0, 30], NO_WINDOW) == pytest.approx(0.0)


def test_diversity_matches_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(50):
        t = rng.integers(2, 20)
        feats = rng.normal(size=(t, 4))
        k = rng.integers(1, t + 1)
        sel = rng.choice(t, size=k, replace=False)
        assert diversity_reward(feats, sel, NO_WINDOW) == pytest.approx(
            brute_diversity(feats, sel), abs=1e-12)
        cfg = RewardConfig(lambda_window=3)
        assert diversity_reward(feats, sel, cfg) == pytest.approx(
            brute_diversity(feats, sel, lam=3), abs=1e-12)


def test_diversity_permutation_invariant_without_window():
    rng = np.random.default_rng(5)
    feats = rng.normal(size=(10, 3))
    sel = [1, 4, 7]
    perm = rng.permutation(10)
    permuted = feats[np.argsort(perm)]
    sel_perm = perm[sel]
    assert diversity_reward(feats, sel, NO_WINDOW) == pytest.approx(
        diversity_reward(permuted, sel_perm, NO_WINDOW), abs=1e-12)


def test_representativeness_all_selected_is_one():
    rng = np.random.default_rng(2)
    feats = rng.normal(size=(6, 3))
    assert representativeness_reward(feats, range(6)) == pytest.approx(1.0)


def test_representativeness_hand_case():
    feats = np.array([[0.0], [2.0]])
    assert representativeness_reward(feats, [0]) == pytest.approx(math.exp(-1.0))


def test_representativeness_identical_frames():
    feats = np.tile([[3.0, 1.0]], (7, 1))
    assert representativeness_reward(feats, [4]) == pytest.approx(1.0)


def test_representativeness_matches_brute_force():
    rng = np.random.default_rng(13)
    for _ in range(50):
        t = rng.integers(2, 20)
        feats = rng.normal(size=(t, 5))
        k = rng.integers(1, t + 1)
        sel = rng.choice(t, size=k, replace=False)
        assert representativeness_reward(feats, sel) == pytest.approx(
            brute_representativeness(feats, sel), abs=1e-12)


def test_representativeness_monotone_under_additions():
    rng = np.random.default_rng(17)
    feats = rng.normal(size=(12, 4))
    sel = [3, 8]
    base = representativeness_reward(feats, sel)
    for extra in range(12):
        grown = representativeness_reward(feats, sel + [extra])
        assert grown >= base - 1e-12


def test_rep_is_one_iff_every_frame_covered_by_duplicate():
    feats = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    assert representativeness_reward(feats, [0, 2]) == pytest.approx(1.0)
    assert representativeness_reward(feats, [0, 1]) < 1.0


def test_total_reward_zero_when_nothing_selected():
    feats = np.random.default_rng(0).normal(size=(5, 3))
    value = total_reward(feats, np.zeros(5, dtype=int))
    assert value == RewardValue(0.0, 0.0, 0.0)


def test_total_reward_all_ones_identical_frames_window_zero():
    feats = np.tile([[1.0, 1.0]], (4, 1))
    cfg = RewardConfig(lambda_window=0)
    value = total_reward(feats, np.ones(4, dtype=int), cfg)
    assert value.r_rep == pytest.approx(1.0)
    assert value.r_div == pytest.approx(1.0)  # every pair is temporally distant
    assert value.total == pytest.approx(2.0)


def test_total_reward_single_selection():
    rng = np.random.default_rng(9)
    feats = rng.normal(size=(6, 3))
    actions = np.zeros(6, dtype=int)
    actions[2] = 1
    value = total_reward(feats, actions, NO_WINDOW)
    assert value.r_div == 0.0
    assert value.total == pytest.approx(value.r_rep)


def test_reward_bounds_random_selections():
    rng = np.random.default_rng(23)
    for _ in range(100):
        t = rng.integers(2, 15)
        feats = rng.normal(size=(t, 3))
        actions = rng.integers(0, 2, size=t)
        value = total_reward(feats, actions, NO_WINDOW)
        if actions.sum() == 0:
            assert value.total == 0.0
        else:
            assert 0.0 <= value.r_div <= 2.0
            assert 0.0 < value.r_rep <= 1.0
            assert value.total == pytest.approx(value.r_div + value.r_rep)


def test_reward_config_rejects_negative_window():
    with pytest.raises(ValueError):
        RewardConfig(lambda_window=-1)
