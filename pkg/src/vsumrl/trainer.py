"""Episodic policy-gradient training with a moving-average reward baseline.

Per video and epoch the policy is run forward once, several action
sequences are sampled from the same trace, and each episode's
log-likelihood gradient is weighted by its reward minus a running baseline.
Two regularizers shape the policy: a penalty steering the mean selection
probability toward a target fraction, and an l2 penalty on the weight
matrices. The minimized objective is

    -J_hat + pct_weight * L_percentage + l2_weight * L_weight
        [- supervised_weight * L_MLE in supervised mode]

where J_hat is the baseline-subtracted episodic policy-gradient estimate
averaged over episodes. One Adam step is applied per video.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from . import policy_net
from .numerics import Adam
from .rewards import RewardConfig, total_reward


@dataclass
class TrainConfig:
    learning_rate: float = 1e-3
    pct_weight: float = 0.01        # weight on the selection-fraction penalty
    l2_weight: float = 1e-5         # weight on the l2 weight penalty
    target_fraction: float = 0.5    # desired mean selection probability
    episodes_per_video: int = 5
    lambda_window: float = 20
    use_lambda: bool = True
    max_epochs: int = 60
    early_stop_patience: int = 10
    seed: int = 0
    mode: str = "unsupervised"      # "unsupervised" | "supervised"
    supervised_weight: float = 1.0
    hidden_size: int = 256
    init_bound: float = 0.05
    baseline_decay: float = 0.9
    baseline_scope: str = "per_video"  # "per_video" | "global"

    def __post_init__(self):
        if not 0.0 < self.target_fraction < 1.0:
            raise ValueError("target_fraction must be in (0, 1)")
        if self.episodes_per_video < 1:
            raise ValueError("episodes_per_video must be >= 1")
        if self.early_stop_patience < 1:
            raise ValueError("early_stop_patience must be >= 1")
        if self.mode not in ("unsupervised", "supervised"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.baseline_scope not in ("per_video", "global"):
            raise ValueError(f"unknown baseline_scope {self.baseline_scope!r}")

    def reward_config(self):
        return RewardConfig(lambda_window=self.lambda_window, use_lambda=self.use_lambda)


class BaselineState:
    """Running average of rewards, kept per video or globally."""

    def __init__(self, decay=0.9, scope="per_video"):
        self.decay = decay
        self.scope = scope
        self._values = {}

    def _key(self, video_id):
        return video_id if self.scope == "per_video" else "__global__"

    def get(self, video_id):
        return self._values.get(self._key(video_id), 0.0)

    def update(self, video_id, mean_reward):
        key = self._key(video_id)
        prev = self._values.get(key, 0.0)
        self._values[key] = self.decay * prev + (1.0 - self.decay) * mean_reward


def update_baseline(state, video_id, mean_reward):
    state.update(video_id, mean_reward)


def percentage_penalty(probs, target_fraction):
    """Squared gap between the mean selection probability and its target.

    Returns the penalty value and its gradient w.r.t. each probability,
    2 * (mean(p) - target) / T per coordinate.
    """
    probs = np.asarray(probs, dtype=np.float64)
    diff = probs.mean() - target_fraction
    grad = np.full(probs.shape, 2.0 * diff / probs.size)
    return float(diff * diff), grad


def weight_penalty(params):
    """Sum of squared entries over weight matrices (biases excluded)."""
    value = 0.0
    grads = {}
    for name, p in params.tensors.items():
        if name.endswith(".b"):
            continue
        value += float(np.sum(p.values * p.values))
        grads[name] = 2.0 * p.values
    return value, grads


def supervised_loss(trace, keyframe_indices):
    """Log-likelihood of the labeled keyframes plus its logit gradient.

    The value sum_{t in keyframes} log p_t is to be maximized; its gradient
    w.r.t. the step-t logit is (1 - p_t) on keyframes, 0 elsewhere.
    """
    kf = np.asarray(keyframe_indices, dtype=int)
    if kf.size == 0:
        raise ValueError("supervised_loss needs a nonempty keyframe set")
    p = np.clip(trace.probs, policy_net.PROB_CLAMP, 1.0 - policy_net.PROB_CLAMP)
    value = float(np.sum(np.log(p[kf])))
    grad_logits = np.zeros_like(trace.probs)
    grad_logits[kf] = 1.0 - trace.probs[kf]
    return value, grad_logits


@dataclass
class EpochStats:
    epoch: int
    mean_reward: float
    mean_div: float
    mean_rep: float
    pct_loss: float
    wt_loss: float
    mle_loss: float = 0.0


@dataclass
class FitResult:
    params: "policy_net.PolicyParams"
    log: list = field(default_factory=list)
    best_epoch: int = 0
    best_reward: float = float("-inf")


def train_epoch(params, videos, cfg, baseline, adam, rng, epoch=0):
    """One pass over the corpus; one Adam step per video."""
    reward_cfg = cfg.reward_config()
    n_ep = cfg.episodes_per_video
    totals, divs, reps, pct_vals, wt_vals, mle_vals = [], [], [], [], [], []
    for video in videos:
        trace = policy_net.forward(params, video.features)
        actions = [policy_net.sample_actions(trace, rng) for _ in range(n_ep)]
        values = [total_reward(video.features, a, reward_cfg) for a in actions]
        b = baseline.get(video.video_id)
        # descent on -J_hat: each episode contributes -(R_n - b)/N
        episodes = [(a, -(r.total - b) / n_ep) for a, r in zip(actions, values)]

        pct_value, pct_grad_p = percentage_penalty(trace.probs, cfg.target_fraction)
        wt_value, wt_grads = weight_penalty(params)
        sig_slope = trace.probs * (1.0 - trace.probs)
        extra_logit = cfg.pct_weight * pct_grad_p * sig_slope
        extra_param = {name: cfg.l2_weight * g for name, g in wt_grads.items()}

        mle_value = 0.0
        if cfg.mode == "supervised" and video.keyframe_indices is not None \
                and video.keyframe_indices.size:
            mle_value, mle_grad = supervised_loss(trace, video.keyframe_indices)
            extra_logit -= cfg.supervised_weight * mle_grad

        params.zero_grads()
        policy_net.backward_reinforce(params, trace, episodes, extra_logit, extra_param)
        adam.step()

        mean_total = float(np.mean([r.total for r in values]))
        baseline.update(video.video_id, mean_total)
        totals.append(mean_total)
        divs.append(float(np.mean([r.r_div for r in values])))
        reps.append(float(np.mean([r.r_rep for r in values])))
        pct_vals.append(pct_value)
        wt_vals.append(wt_value)
        mle_vals.append(mle_value)
    return EpochStats(
        epoch=epoch,
        mean_reward=float(np.mean(totals)),
        mean_div=float(np.mean(divs)),
        mean_rep=float(np.mean(reps)),
        pct_loss=float(np.mean(pct_vals)),
        wt_loss=float(np.mean(wt_vals)),
        mle_loss=float(np.mean(mle_vals)),
    )


def fit(params, train_videos, cfg):
    """Train until max_epochs or until the best mean reward stalls.

    Keeps a snapshot of the parameters from the best-reward epoch and
    restores it before returning, so the result is the best checkpoint
    rather than the last one.
    """
    if not train_videos:
        raise ValueError("empty training corpus")
    adam = Adam(params.tensors, lr=cfg.learning_rate)
    baseline = BaselineState(decay=cfg.baseline_decay, scope=cfg.baseline_scope)
    rng = np.random.default_rng(cfg.seed)
    result = FitResult(params=params)
    best_values = None
    stall = 0
    for epoch in range(1, cfg.max_epochs + 1):
        stats = train_epoch(params, train_videos, cfg, baseline, adam, rng, epoch)
        result.log.append(stats)
        if stats.mean_reward > result.best_reward:
            result.best_reward = stats.mean_reward
            result.best_epoch = epoch
            best_values = {n: p.values.copy() for n, p in params.tensors.items()}
            stall = 0
        else:
            stall += 1
            if stall >= cfg.early_stop_patience:
                break
    if best_values is not None:
        for name, values in best_values.items():
            params.tensors[name].values[...] = values
    return result


REWARD_LOG_FIELDS = ("epoch", "mean_reward", "r_div", "r_rep", "pct_loss", "wt_loss")


def write_reward_log(log, path):
    """Emit the per-epoch reward curve as rewards.csv."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REWARD_LOG_FIELDS)
        for s in log:
            writer.writerow([
                s.epoch,
                f"{s.mean_reward:.10f}",
                f"{s.mean_div:.10f}",
                f"{s.mean_rep:.10f}",
                f"{s.pct_loss:.10f}",
                f"{s.wt_loss:.10f}",
            ])
