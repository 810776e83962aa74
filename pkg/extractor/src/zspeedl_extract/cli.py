"""Command-line entry point: `run` extracts features, `convert` turns the
official precomputed archives into toolkit bundles."""

import argparse
import json
import sys

from .backbones import BACKBONES
from .convert import DATASET_STATS, convert_official
from .extract import extract, list_images


def build_parser():
    parser = argparse.ArgumentParser(prog="zspeedl-extract", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="extract pooled CNN features from images")
    run.add_argument("--backbone", required=True, choices=sorted(BACKBONES))
    run.add_argument("--images", required=True, help="directory of images")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--batch", type=int, default=16)
    run.add_argument("--weights", default="imagenet",
                     help='"imagenet" (default) or "random" for offline smoke runs')
    run.add_argument("--warmup", type=int, default=10)
    run.add_argument("--repeats", type=int, default=100)
    run.add_argument("--device-label", default="desktop")

    convert = sub.add_parser("convert", help="convert an official archive")
    convert.add_argument("--dataset", required=True, choices=sorted(DATASET_STATS))
    convert.add_argument("--archive", required=True, help="directory with the .mat files")
    convert.add_argument("--out", required=True, help="output directory")
    convert.add_argument("--backbone-tag", default="resnet101")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            images = list_images(args.images)
            if not images:
                print(f"no images found under {args.images}", file=sys.stderr)
                return 2
            summary = extract(args.backbone, images, args.out, batch=args.batch,
                              weights=args.weights, warmup=args.warmup,
                              repeats=args.repeats, device_label=args.device_label)
            print(json.dumps(summary, indent=2))
        else:
            manifest_path, stats = convert_official(args.dataset, args.archive,
                                                    args.out,
                                                    backbone_tag=args.backbone_tag)
            print(json.dumps({"manifest": manifest_path, **stats}, indent=2))
        return 0
    except (OSError, KeyError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
