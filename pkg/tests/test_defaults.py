"""The advertised default hyperparameters, pinned so they cannot drift."""

from vsumrl import cli
from vsumrl.rewards import RewardConfig
from vsumrl.trainer import TrainConfig


def test_train_defaults():
    cfg = TrainConfig()
    assert cfg.lambda_window == 20
    assert cfg.target_fraction == 0.5
    assert cfg.episodes_per_video == 5
    assert cfg.hidden_size == 256
    assert cfg.max_epochs == 60
    assert cfg.early_stop_patience == 10


def test_reward_defaults():
    cfg = RewardConfig()
    assert cfg.lambda_window == 20
    assert cfg.use_lambda


def test_cli_defaults():
    assert cli.TRAIN_DEFAULTS["lambda_window"] == 20.0
    assert cli.TRAIN_DEFAULTS["target_fraction"] == 0.5
    assert cli.TRAIN_DEFAULTS["episodes_per_video"] == 5
    assert cli.TRAIN_DEFAULTS["hidden_size"] == 256
    assert cli.TRAIN_DEFAULTS["max_epochs"] == 60
    assert cli.TRAIN_DEFAULTS["early_stop_patience"] == 10
    assert cli.SUMMARIZE_DEFAULTS["budget"] == 0.15
    assert cli.EVAL_DEFAULTS["budget"] == 0.15
    assert cli.SPLIT_DEFAULTS["folds"] == 5
