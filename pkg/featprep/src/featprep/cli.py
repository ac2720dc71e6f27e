"""featprep command line: extract features, convert annotation archives."""

from __future__ import annotations

import argparse
import sys

from .backbone import FeatureBackbone
from .convert import convert_summe, convert_tvsum
from .extract import extract_directory, extract_features
from .fvs import FeatPrepError


def _build_parser():
    parser = argparse.ArgumentParser(prog="featprep", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_ext = sub.add_parser("extract", help="videos -> FVS1 + sidecars")
    p_ext.add_argument("videos", nargs="+", help="video files or one directory")
    p_ext.add_argument("--out", required=True)
    p_ext.add_argument("--fps", type=float, default=2.0)
    p_ext.add_argument("--weights", choices=["pretrained", "random"],
                       default="pretrained")
    p_ext.add_argument("--seed", type=int, default=0,
                       help="init seed when weights are random")
    p_ext.add_argument("--batch-size", type=int, default=16)

    p_conv = sub.add_parser("convert", help="annotation archive -> sidecar fields")
    p_conv.add_argument("--dataset", choices=["summe", "tvsum"], required=True)
    p_conv.add_argument("--annotations", required=True,
                        help="SumMe .mat directory or TVSum .tsv file")
    p_conv.add_argument("--data", required=True,
                        help="directory of extracted .fvs/.json pairs")
    p_conv.add_argument("--budget", type=float, default=0.15,
                        help="keyshot budget for TVSum score conversion")
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "extract":
            backbone = FeatureBackbone(weights=args.weights, seed=args.seed)
            from pathlib import Path

            paths = []
            for item in args.videos:
                item = Path(item)
                if item.is_dir():
                    paths.extend(extract_directory(
                        item, args.out, fps=args.fps, backbone=backbone,
                        batch_size=args.batch_size))
                else:
                    paths.append(extract_features(
                        item, args.out, fps=args.fps, backbone=backbone,
                        batch_size=args.batch_size))
            for p in paths:
                print(p)
        else:
            if args.dataset == "summe":
                done = convert_summe(args.annotations, args.data)
            else:
                done = convert_tvsum(args.annotations, args.data, args.budget)
            print(f"converted {len(done)} videos: {', '.join(done)}")
        return 0
    except FeatPrepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
