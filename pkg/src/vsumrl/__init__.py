"""Reinforcement-learned keyshot video summarization on precomputed features.

The library trains a bidirectional LSTM frame-selection policy with an
unsupervised diversity + representativeness reward (plus an optional
supervised keyframe objective), segments videos into shots with kernel
temporal segmentation, assembles budgeted keyshot summaries via knapsack
selection, and evaluates them against multi-annotator ground truth.
"""

from . import (  # noqa: F401
    cli,
    dataio,
    evaluation,
    numerics,
    policy_net,
    rewards,
    segmentation,
    summarizer,
    synthgen,
    trainer,
)
from .dataio import SplitSpec, VideoRecord, load_video, make_folds, write_video  # noqa: F401
from .evaluation import fscore, multi_user_fscore, xcorr  # noqa: F401
from .policy_net import PolicyParams, forward, sample_actions  # noqa: F401
from .rewards import RewardConfig, diversity_reward, representativeness_reward, total_reward  # noqa: F401
from .segmentation import kts_segment  # noqa: F401
from .summarizer import generate_summary, knapsack_select  # noqa: F401
from .trainer import TrainConfig, fit  # noqa: F401

__version__ = "0.1.0"
