from itertools import combinations

import numpy as np
import pytest

from vsumrl.dataio import load_video, validate_record
from vsumrl.rewards import representativeness_reward
from vsumrl.synthgen import make_clustered_video, make_corpus, write_corpus


def test_generated_record_passes_validation():
    rec = make_clustered_video(3, 6, dim=8, noise=0.1, seed=0)
    validate_record(rec)
    assert rec.n_frames == 18
    assert rec.keyframe_indices.size == 3


def test_same_seed_same_record():
    a = make_clustered_video(2, 5, dim=4, noise=0.2, seed=42)
    b = make_clustered_video(2, 5, dim=4, noise=0.2, seed=42)
    assert np.array_equal(a.features, b.features)
    assert np.array_equal(a.user_summaries, b.user_summaries)
    c = make_clustered_video(2, 5, dim=4, noise=0.2, seed=43)
    assert not np.array_equal(a.features, c.features)


def test_noiseless_medoids_are_perfect_representatives():
    rec = make_clustered_video(3, 4, dim=6, noise=0.0, seed=1)
    assert representativeness_reward(rec.features, rec.keyframe_indices) == pytest.approx(1.0)


def test_noiseless_medoid_set_beats_every_same_size_set():
    rec = make_clustered_video(2, 3, dim=4, noise=0.0, seed=2)
    medoid_rep = representativeness_reward(rec.features, rec.keyframe_indices)
    for subset in combinations(range(rec.n_frames), rec.keyframe_indices.size):
        assert medoid_rep >= representativeness_reward(rec.features, list(subset)) - 1e-12


def test_cluster_structure_is_temporal():
    rec = make_clustered_video(3, 5, dim=5, noise=0.0, seed=3)
    # change points align with cluster boundaries in original space
    assert rec.change_points.shape == (3, 2)
    assert rec.change_points[0][0] == 0
    assert rec.change_points[-1][1] == rec.n_frames_original - 1


def test_corpus_write_and_load(tmp_path):
    records = make_corpus(3, 2, 4, dim=4, noise=0.05, seed=0)
    out = write_corpus(records, tmp_path / "corpus")
    for rec in records:
        loaded = load_video(out / f"{rec.video_id}.fvs")
        assert loaded.video_id == rec.video_id
        assert np.allclose(loaded.features, rec.features, atol=1e-6)


def test_dim_smaller_than_clusters_rejected():
    with pytest.raises(ValueError):
        make_clustered_video(4, 3, dim=2, noise=0.0, seed=0)
