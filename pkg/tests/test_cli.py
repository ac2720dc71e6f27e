import json

import numpy as np
import pytest

from vsumrl import cli
from vsumrl.dataio import load_split
from vsumrl.synthgen import make_corpus, write_corpus


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    path = tmp_path_factory.mktemp("data")
    write_corpus(make_corpus(6, 2, 5, dim=5, noise=0.05, seed=0), path)
    return path


def run(args):
    return cli.main([str(a) for a in args])


def train_args(corpus_dir, out, **extra):
    args = ["train", "--data", corpus_dir, "--out", out,
            "--hidden", 6, "--epochs", 3, "--episodes", 3,
            "--lr", 0.01, "--seed", 1]
    for key, value in extra.items():
        args.extend([f"--{key}", value])
    return args


def test_make_splits(corpus_dir, tmp_path):
    out = tmp_path / "splits.json"
    assert run(["make-splits", "--data", corpus_dir, "--out", out,
                "--folds", 3, "--seed", 5]) == 0
    spec = load_split(out)
    assert len(spec.folds) == 3
    tests = [v for _, test in spec.folds for v in test]
    assert sorted(tests) == sorted(f"synth{i:03d}" for i in range(6))


def test_train_writes_checkpoint_and_log(corpus_dir, tmp_path):
    out = tmp_path / "run"
    assert run(train_args(corpus_dir, out)) == 0
    assert (out / "fold_0" / "checkpoint.fvsp").is_file()
    rewards = (out / "fold_0" / "rewards.csv").read_text().splitlines()
    assert rewards[0] == "epoch,mean_reward,r_div,r_rep,pct_loss,wt_loss"
    assert len(rewards) == 4  # header + 3 epochs
    assert (out / "config.json").is_file()


def test_train_deterministic_outputs(corpus_dir, tmp_path):
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert run(train_args(corpus_dir, out1)) == 0
    assert run(train_args(corpus_dir, out2)) == 0
    assert (out1 / "fold_0" / "rewards.csv").read_bytes() == \
        (out2 / "fold_0" / "rewards.csv").read_bytes()
    assert (out1 / "fold_0" / "checkpoint.fvsp").read_bytes() == \
        (out2 / "fold_0" / "checkpoint.fvsp").read_bytes()


def test_full_pipeline_with_split(corpus_dir, tmp_path):
    split = tmp_path / "splits.json"
    assert run(["make-splits", "--data", corpus_dir, "--out", split,
                "--folds", 2, "--seed", 0]) == 0
    run_dir = tmp_path / "run"
    assert run(train_args(corpus_dir, run_dir, split=split)) == 0
    assert (run_dir / "fold_1" / "checkpoint.fvsp").is_file()

    summaries = tmp_path / "summaries"
    assert run(["summarize", "--data", corpus_dir,
                "--checkpoint", run_dir / "fold_0" / "checkpoint.fvsp",
                "--out", summaries]) == 0
    docs = sorted(summaries.glob("*.summary.json"))
    assert len(docs) == 6
    doc = json.loads(docs[0].read_text())
    assert set(doc) >= {"video_id", "selected_shots", "mask_runs",
                        "summary_length", "frame_scores"}
    covered = sum(length for _, length in doc["mask_runs"])
    assert covered == doc["summary_length"]

    reports = tmp_path / "reports"
    assert run(["eval", "--data", corpus_dir, "--split", split,
                "--checkpoint", run_dir, "--out", reports,
                "--agg", "max"]) == 0
    report = json.loads((reports / "report.json").read_text())
    assert report["aggregation"] == "max"
    assert len(report["folds"]) == 2
    fold_means = [f["mean_f"] for f in report["folds"]]
    assert report["mean_f"] == pytest.approx(np.mean(fold_means))
    csv_lines = (reports / "fold_0_report.csv").read_text().splitlines()
    assert csv_lines[0] == "video_id,precision,recall,f_score"


def test_summary_scores_match_direct_forward(corpus_dir, tmp_path):
    from vsumrl import policy_net, summarizer
    from vsumrl.dataio import load_corpus
    from vsumrl.numerics import load_checkpoint

    run_dir = tmp_path / "run"
    assert run(train_args(corpus_dir, run_dir)) == 0
    summaries = tmp_path / "sums"
    ckpt = run_dir / "fold_0" / "checkpoint.fvsp"
    assert run(["summarize", "--data", corpus_dir, "--checkpoint", ckpt,
                "--out", summaries]) == 0
    video = load_corpus(corpus_dir)[0]
    params = policy_net.PolicyParams.from_tensors(load_checkpoint(ckpt))
    trace = policy_net.forward(params, video.features)
    expected = summarizer.upsample_scores(
        trace.probs, video.picks, video.n_frames_original)
    doc = json.loads((summaries / f"{video.video_id}.summary.json").read_text())
    assert np.allclose(doc["frame_scores"], expected, atol=1e-5)


def test_config_file_and_flag_precedence(corpus_dir, tmp_path):
    config = tmp_path / "conf.json"
    config.write_text(json.dumps({
        "hidden_size": 6, "max_epochs": 2, "episodes_per_video": 2,
        "learning_rate": 0.02, "seed": 3,
    }))
    out = tmp_path / "run"
    # flag --epochs 4 overrides the config file's 2
    assert run(["train", "--data", corpus_dir, "--out", out,
                "--config", config, "--epochs", 4]) == 0
    dumped = json.loads((out / "config.json").read_text())
    assert dumped["max_epochs"] == 4
    assert dumped["hidden_size"] == 6
    rewards = (out / "fold_0" / "rewards.csv").read_text().splitlines()
    assert len(rewards) == 5  # header + 4 epochs


def test_missing_required_flag_is_config_error(tmp_path):
    assert run(["train", "--out", tmp_path / "x"]) == cli.EXIT_CONFIG


def test_invalid_epsilon_is_config_error(corpus_dir, tmp_path):
    assert run(train_args(corpus_dir, tmp_path / "x") +
               ["--epsilon", "1.5"]) == cli.EXIT_CONFIG


def test_unknown_config_key_is_config_error(corpus_dir, tmp_path):
    config = tmp_path / "conf.json"
    config.write_text(json.dumps({"not_a_key": 1}))
    assert run(["train", "--data", corpus_dir, "--out", tmp_path / "x",
                "--config", config]) == cli.EXIT_CONFIG


def test_missing_data_dir_is_data_error(tmp_path):
    assert run(["train", "--data", tmp_path / "nope",
                "--out", tmp_path / "x"]) == cli.EXIT_DATA


def test_corrupt_feature_file_is_data_error(tmp_path):
    data = tmp_path / "data"
    data.mkdir()
    (data / "bad.fvs").write_bytes(b"JUNK")
    assert run(["train", "--data", data, "--out", tmp_path / "x"]) == cli.EXIT_DATA


def test_missing_checkpoint_is_data_error(corpus_dir, tmp_path):
    assert run(["summarize", "--data", corpus_dir,
                "--checkpoint", tmp_path / "none.fvsp",
                "--out", tmp_path / "x"]) == cli.EXIT_DATA
