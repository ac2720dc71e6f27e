"""Command-line entry point: train, summarize, eval, make-splits.

Configuration precedence is flags over config-file values over built-in
defaults. Every command is deterministic given its config and seed, and
writes only under the requested output directory. Exit codes: 0 success,
2 configuration error, 3 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import evaluation, policy_net, summarizer, trainer
from .dataio import (
    DataError,
    SplitSpec,
    load_corpus,
    load_split,
    make_folds,
    save_split,
)
from .numerics import NumericsError, load_checkpoint, save_checkpoint

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3


class ConfigError(Exception):
    pass


TRAIN_DEFAULTS = {
    "lambda_window": 20.0,
    "target_fraction": 0.5,
    "episodes_per_video": 5,
    "hidden_size": 256,
    "max_epochs": 60,
    "early_stop_patience": 10,
    "learning_rate": 1e-3,
    "pct_weight": 0.01,
    "l2_weight": 1e-5,
    "seed": 0,
    "mode": "unsup",
    "setting": "canonical",
}

SUMMARIZE_DEFAULTS = {"budget": 0.15, "seed": 0}
EVAL_DEFAULTS = {"budget": 0.15, "agg": "average", "setting": "canonical", "seed": 0}
SPLIT_DEFAULTS = {"folds": 5, "seed": 0, "setting": "canonical"}


def _build_parser():
    parser = argparse.ArgumentParser(prog="vsumrl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--data", help="directory of .fvs feature files with sidecars")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int)

    p_train = sub.add_parser("train", help="train per-fold policies")
    common(p_train)
    p_train.add_argument("--split", help="split JSON; omitted = one fold on all videos")
    p_train.add_argument("--setting", choices=["canonical", "augmented", "transfer"])
    p_train.add_argument("--mode", choices=["unsup", "sup"])
    p_train.add_argument("--lambda", dest="lambda_window", type=float,
                         help="temporal window for the diversity reward")
    p_train.add_argument("--epsilon", dest="target_fraction", type=float,
                         help="target mean selection probability")
    p_train.add_argument("--episodes", dest="episodes_per_video", type=int)
    p_train.add_argument("--hidden", dest="hidden_size", type=int)
    p_train.add_argument("--epochs", dest="max_epochs", type=int)
    p_train.add_argument("--patience", dest="early_stop_patience", type=int)
    p_train.add_argument("--lr", dest="learning_rate", type=float)
    p_train.add_argument("--beta1", dest="pct_weight", type=float,
                         help="weight of the selection-fraction penalty")
    p_train.add_argument("--beta2", dest="l2_weight", type=float,
                         help="weight of the l2 weight penalty")

    p_sum = sub.add_parser("summarize", help="export summaries from a checkpoint")
    common(p_sum)
    p_sum.add_argument("--checkpoint", help="checkpoint file from train")
    p_sum.add_argument("--budget", type=float, help="summary length fraction")

    p_eval = sub.add_parser("eval", help="score checkpoints on test folds")
    common(p_eval)
    p_eval.add_argument("--split", help="split JSON used during training")
    p_eval.add_argument("--checkpoint",
                        help="train output directory (fold_*/checkpoint.fvsp) or one file")
    p_eval.add_argument("--setting", choices=["canonical", "augmented", "transfer"])
    p_eval.add_argument("--budget", type=float)
    p_eval.add_argument("--agg", choices=["average", "max"],
                        help="aggregation over annotators")

    p_split = sub.add_parser("make-splits", help="write a k-fold split file")
    common(p_split)
    p_split.add_argument("--folds", type=int)
    p_split.add_argument("--setting", choices=["canonical", "augmented", "transfer"])

    return parser


def _merge_config(args, defaults):
    """defaults < config file < explicitly passed flags."""
    merged = dict(defaults)
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                file_cfg = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        unknown = set(file_cfg) - set(defaults) - {"data", "out", "split", "checkpoint"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        merged.update(file_cfg)
    for key, value in vars(args).items():
        if key in ("command", "config"):
            continue
        if value is not None:
            merged[key] = value
    return merged


def _require(cfg, *keys):
    for key in keys:
        if not cfg.get(key):
            raise ConfigError(f"missing required option --{key.replace('_', '-')}")


def _train_config(cfg):
    try:
        return trainer.TrainConfig(
            learning_rate=cfg["learning_rate"],
            pct_weight=cfg["pct_weight"],
            l2_weight=cfg["l2_weight"],
            target_fraction=cfg["target_fraction"],
            episodes_per_video=cfg["episodes_per_video"],
            lambda_window=cfg["lambda_window"],
            max_epochs=cfg["max_epochs"],
            early_stop_patience=cfg["early_stop_patience"],
            seed=cfg["seed"],
            mode={"unsup": "unsupervised", "sup": "supervised"}[cfg["mode"]],
            hidden_size=cfg["hidden_size"],
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"invalid training configuration: {exc}") from exc


def _dump_config(cfg, out_dir):
    with open(out_dir / "config.json", "w", encoding="utf-8") as fh:
        json.dump(cfg, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_train(cfg):
    _require(cfg, "data", "out")
    train_cfg = _train_config(cfg)
    videos = load_corpus(cfg["data"])
    by_id = {v.video_id: v for v in videos}
    if cfg.get("split"):
        split = load_split(cfg["split"])
    else:
        all_ids = [v.video_id for v in videos]
        split = SplitSpec(name="all", folds=[(all_ids, [])])
    out_dir = Path(cfg["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    _dump_config(cfg, out_dir)
    for i, (train_ids, _test_ids) in enumerate(split.folds):
        missing = [v for v in train_ids if v not in by_id]
        if missing:
            raise DataError(f"fold {i}: training ids not in data dir: {missing}")
        fold_videos = [by_id[v] for v in train_ids]
        if not fold_videos:
            raise DataError(f"fold {i}: empty training set")
        dim = fold_videos[0].feature_dim
        params = policy_net.PolicyParams(dim, train_cfg.hidden_size,
                                         seed=train_cfg.seed + i)
        fold_cfg = trainer.TrainConfig(**{**vars(train_cfg), "seed": train_cfg.seed + i})
        result = trainer.fit(params, fold_videos, fold_cfg)
        fold_dir = out_dir / f"fold_{i}"
        fold_dir.mkdir(exist_ok=True)
        save_checkpoint(params.tensors, fold_dir / "checkpoint.fvsp")
        trainer.write_reward_log(result.log, fold_dir / "rewards.csv")
        print(f"fold {i}: best mean reward {result.best_reward:.4f} "
              f"at epoch {result.best_epoch} ({len(result.log)} epochs run)")
    return EXIT_OK


def cmd_summarize(cfg):
    _require(cfg, "data", "out", "checkpoint")
    ckpt = Path(cfg["checkpoint"])
    if not ckpt.is_file():
        raise DataError(f"checkpoint not found: {ckpt}")
    params = policy_net.PolicyParams.from_tensors(load_checkpoint(ckpt))
    videos = load_corpus(cfg["data"])
    out_dir = Path(cfg["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    for video in videos:
        trace = policy_net.forward(params, video.features)
        mask = summarizer.generate_summary(video, trace.probs, cfg["budget"])
        frame_scores = summarizer.upsample_scores(
            trace.probs, video.picks, video.n_frames_original)
        doc = {
            "video_id": video.video_id,
            "budget_fraction": cfg["budget"],
            "selected_shots": [
                [int(s), int(e)]
                for s, e in np.asarray(video.change_points)[mask.selected_shots]
            ],
            "mask_runs": summarizer.mask_to_runs(mask.frames),
            "summary_length": mask.total_length,
            "frame_scores": [round(float(x), 6) for x in frame_scores],
        }
        with open(out_dir / f"{video.video_id}.summary.json", "w", encoding="utf-8") as fh:
            json.dump(doc, fh)
            fh.write("\n")
        print(f"{video.video_id}: {mask.total_length} frames in "
              f"{len(mask.selected_shots)} shots")
    return EXIT_OK


def _fold_checkpoints(ckpt_arg, n_folds):
    ckpt = Path(ckpt_arg)
    if ckpt.is_file():
        return [ckpt] * n_folds
    paths = [ckpt / f"fold_{i}" / "checkpoint.fvsp" for i in range(n_folds)]
    missing = [str(p) for p in paths if not p.is_file()]
    if missing:
        raise DataError(f"missing fold checkpoints: {missing}")
    return paths


def cmd_eval(cfg):
    _require(cfg, "data", "out", "split", "checkpoint")
    videos = load_corpus(cfg["data"])
    by_id = {v.video_id: v for v in videos}
    split = load_split(cfg["split"])
    ckpts = _fold_checkpoints(cfg["checkpoint"], len(split.folds))
    out_dir = Path(cfg["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    fold_reports = []
    for i, (_train_ids, test_ids) in enumerate(split.folds):
        missing = [v for v in test_ids if v not in by_id]
        if missing:
            raise DataError(f"fold {i}: test ids not in data dir: {missing}")
        params = policy_net.PolicyParams.from_tensors(load_checkpoint(ckpts[i]))
        result = evaluation.evaluate_fold(
            params, [by_id[v] for v in test_ids], mode=cfg["agg"],
            budget_fraction=cfg["budget"])
        with open(out_dir / f"fold_{i}_report.csv", "w", encoding="utf-8") as fh:
            fh.write("video_id,precision,recall,f_score\n")
            for v in result.videos:
                fh.write(f"{v.video_id},{v.precision:.4f},{v.recall:.4f},{v.f_score:.4f}\n")
        fold_reports.append({
            "fold": i,
            "mean_f": result.mean_f,
            "videos": [vars(v) for v in result.videos],
        })
        print(f"fold {i}: mean F {result.mean_f:.2f} over {len(result.videos)} videos")
    mean_f = float(np.mean([f["mean_f"] for f in fold_reports])) if fold_reports else 0.0
    report = {
        "setting": cfg["setting"],
        "aggregation": cfg["agg"],
        "mean_f": mean_f,
        "folds": fold_reports,
    }
    with open(out_dir / "report.json", "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    print(f"overall mean F {mean_f:.2f} ({cfg['setting']}, {cfg['agg']})")
    return EXIT_OK


def cmd_make_splits(cfg):
    _require(cfg, "data", "out")
    videos = load_corpus(cfg["data"])
    ids = [v.video_id for v in videos]
    try:
        spec = make_folds(ids, cfg["folds"], cfg["seed"], name=cfg["setting"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out_path = Path(cfg["out"])
    if out_path.suffix != ".json":
        out_path.mkdir(parents=True, exist_ok=True)
        out_path = out_path / "splits.json"
    save_split(spec, out_path)
    print(f"wrote {len(spec.folds)} folds over {len(ids)} videos to {out_path}")
    return EXIT_OK


_COMMANDS = {
    "train": (cmd_train, TRAIN_DEFAULTS),
    "summarize": (cmd_summarize, SUMMARIZE_DEFAULTS),
    "eval": (cmd_eval, EVAL_DEFAULTS),
    "make-splits": (cmd_make_splits, SPLIT_DEFAULTS),
}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    runner, defaults = _COMMANDS[args.command]
    try:
        cfg = _merge_config(args, defaults)
        return runner(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, NumericsError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
