"""Command-line entry point.

Subcommands: train, eval, bench, sweep, fps. All randomness flows from
--seed (default 42). Exit codes: 0 success, 1 usage error, 2 data error,
3 numerical failure. The ZSPEEDL_THREADS environment variable caps BLAS
threads: benchmarks default to 1 thread, training to all cores.
"""

import argparse
import contextlib
import csv
import datetime
import json
import os
import sys

import numpy as np
from threadpoolctl import threadpool_limits

from . import __version__
from .bench import (
    BenchReport,
    bench_classification,
    compose_fps,
    load_report,
    write_report,
    THREADS_ENV,
)
from .data import load_manifest, view_split
from .errors import DataError, NumericalError, UsageError, ZspeedlError
from .evaluate import gzsl_eval, mca, result_record, write_result
from .infer import predict_class_ids
from .model_io import load_model, manifest_hash, save_model
from .models import (
    DAP,
    DEM,
    ESZSL,
    SAE,
    AttributeDecoder,
    DecoderAugmentedClassifier,
    GaussianFeatureGenerator,
    SoftmaxClassifier,
)
from .selection import grid_search_eszsl, grid_search_sae

METHODS = ("dap", "eszsl", "sae", "dem", "gen-softmax", "gen-decoder")

# user-settable hyperparameter keys, validated before any data is loaded
_HP_KEYS = {
    "eszsl": {"gamma", "lam"},
    "sae": {"lam", "direction", "metric"},
    "dap": {"l2", "epochs", "lr"},
    "dem": {"hidden", "lr", "l2", "epochs", "batch"},
    "gen-softmax": {"ridge", "n_per_class", "lr", "l2", "epochs", "batch"},
    "gen-decoder": {"ridge", "n_per_class", "lr", "l2", "epochs", "batch", "hidden"},
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_hp(pairs, method):
    hp = {}
    for raw in pairs or []:
        if "=" not in raw:
            raise UsageError(f"--hp expects key=value, got {raw!r}")
        key, value = raw.split("=", 1)
        if key not in _HP_KEYS[method]:
            raise UsageError(
                f"unknown hyperparameter {key!r} for {method} "
                f"(valid: {sorted(_HP_KEYS[method])})")
        for cast in (int, float):
            try:
                value = cast(value)
                break
            except ValueError:
                continue
        hp[key] = value
    return hp


def _train_threads():
    raw = os.environ.get(THREADS_ENV, "")
    if not raw:
        return contextlib.nullcontext()
    try:
        return threadpool_limits(limits=max(1, int(raw)))
    except ValueError:
        raise DataError(f"{THREADS_ENV} must be an integer, got {raw!r}")


def _all_split_classes(bundle):
    return np.union1d(bundle.split.seen_classes, bundle.split.unseen_classes)


def _fit_generative(method, bundle, hp, seed):
    """Generator stand-in + softmax (optionally decoder-augmented) pipeline."""
    ridge = hp.pop("ridge", 1.0)
    n_per_class = int(hp.pop("n_per_class", 300))
    hidden = int(hp.pop("hidden", 256))
    clf_hp = {k: hp[k] for k in ("lr", "l2", "epochs", "batch") if k in hp}

    x_train, y_train = view_split(bundle, "train")
    gen = GaussianFeatureGenerator(ridge=ridge, seed=seed)
    gen.fit(x_train, y_train, bundle.attributes)
    x_syn, y_syn = gen.generate(bundle.attributes, bundle.split.unseen_classes, n_per_class)

    x_all = np.vstack([x_train, x_syn])
    y_all = np.concatenate([y_train, y_syn])
    class_ids = _all_split_classes(bundle)
    extra = {"generator": {"ridge": ridge, "n_per_class": n_per_class}}

    if method == "gen-softmax":
        clf = SoftmaxClassifier(seed=seed, **clf_hp)
        clf.fit(x_all, y_all, class_ids)
        return clf, extra

    decoder = AttributeDecoder(hidden=hidden, seed=seed, **clf_hp)
    decoder.fit(x_train, y_train, bundle.attributes)
    clf = SoftmaxClassifier(seed=seed, **clf_hp)
    clf.fit(decoder.augment(x_all), y_all, class_ids)
    return DecoderAugmentedClassifier(classifier=clf, decoder=decoder), extra


def cmd_train(args):
    hp = _parse_hp(args.hp, args.method)
    bundle = load_manifest(args.dataset)
    extra = {}
    with _train_threads():
        if args.method == "eszsl":
            if {"gamma", "lam"} <= hp.keys():
                model = ESZSL(**hp).fit_bundle(bundle)
            else:
                params, val_mca = grid_search_eszsl(bundle, seed=args.seed)
                params.update(hp)
                model = ESZSL(**params).fit_bundle(bundle)
                extra["validation_mca"] = val_mca
        elif args.method == "sae":
            if "lam" in hp:
                model = SAE(**hp).fit_bundle(bundle)
            else:
                params, val_mca = grid_search_sae(bundle, seed=args.seed, **hp)
                model = SAE(**params).fit_bundle(bundle)
                extra["validation_mca"] = val_mca
            extra["residual"] = model.residual_
        elif args.method == "dap":
            model = DAP(seed=args.seed, **hp).fit_bundle(bundle)
        elif args.method == "dem":
            model = DEM(seed=args.seed, **hp).fit_bundle(bundle)
            extra["loss_history"] = model.loss_history_
        else:
            model, extra = _fit_generative(args.method, bundle, hp, args.seed)

    save_model(model, args.out, train_manifest_hash=manifest_hash(args.dataset),
               extra=extra)
    print(f"wrote {args.method} model to {args.out}")
    return 0


def _percent(value):
    return round(100.0 * value, 2)


def cmd_eval(args):
    model, header = load_model(args.model)
    bundle = load_manifest(args.dataset)
    record_scores = None

    if args.setting == "zsl":
        x_test, y_test = view_split(bundle, "test_unseen")
        candidates = bundle.split.unseen_classes
        pred = predict_class_ids(model, x_test, bundle.attributes, candidates)
        record_scores = mca(pred, y_test, candidates)
        summary = f"zsl mca={_percent(record_scores):.2f}"
    else:
        if bundle.split.test_seen_idx.size == 0:
            raise DataError("gzsl evaluation requires a nonempty test_seen split")
        candidates = _all_split_classes(bundle)
        x_seen, y_seen = view_split(bundle, "test_seen")
        x_unseen, y_unseen = view_split(bundle, "test_unseen")
        pred_seen = predict_class_ids(model, x_seen, bundle.attributes, candidates)
        pred_unseen = predict_class_ids(model, x_unseen, bundle.attributes, candidates)
        record_scores = gzsl_eval(pred_seen, y_seen, pred_unseen, y_unseen,
                                  bundle.split.seen_classes, bundle.split.unseen_classes)
        summary = (f"gzsl u={_percent(record_scores.acc_unseen):.2f} "
                   f"s={_percent(record_scores.acc_seen):.2f} "
                   f"h={_percent(record_scores.harmonic_mean):.2f}")

    record = result_record(
        method=header["method"], backbone=bundle.backbone_tag, dataset=bundle.name,
        setting=args.setting, scores=record_scores,
        hyperparameters=header.get("hyperparameters", {}), seed=header.get("seed"))
    if args.out:
        write_result(record, args.out)
    print(summary)
    return 0


def cmd_bench(args):
    model, header = load_model(args.model)
    bundle = load_manifest(args.dataset)
    stats = bench_classification(model, bundle, warmup=args.warmup,
                                 repeats=args.repeats, device_label=args.device_label)
    report = BenchReport(
        device_label=args.device_label,
        created_at=datetime.datetime.now(datetime.timezone.utc).isoformat(),
    )
    report.add(header["method"], bundle.backbone_tag, bundle.feature_dim, stats)
    write_report(report, args.out, csv_path=args.csv)
    print(f"{header['method']} d={bundle.feature_dim}: "
          f"{stats.avg_ms:.3f} ± {stats.std_ms:.3f} ms (min {stats.min_ms:.3f})")
    return 0


def _sweep_cell(method, manifest_path, setting, seed):
    sub = argparse.Namespace(method=method, dataset=manifest_path, seed=seed, hp=[])
    bundle = load_manifest(manifest_path)
    row = {"method": method, "dataset": bundle.name, "backbone": bundle.backbone_tag,
           "mca": "", "u": "", "s": "", "h": ""}
    with _train_threads():
        if method == "eszsl":
            params, _ = grid_search_eszsl(bundle, seed=seed)
            model = ESZSL(**params).fit_bundle(bundle)
        elif method == "sae":
            params, _ = grid_search_sae(bundle, seed=seed)
            model = SAE(**params).fit_bundle(bundle)
        elif method == "dap":
            model = DAP(seed=seed).fit_bundle(bundle)
        elif method == "dem":
            model = DEM(seed=seed).fit_bundle(bundle)
        else:
            model, _ = _fit_generative(method, bundle, {}, seed)

    if setting in ("zsl", "both"):
        x_test, y_test = view_split(bundle, "test_unseen")
        pred = predict_class_ids(model, x_test, bundle.attributes,
                                 bundle.split.unseen_classes)
        row["mca"] = _percent(mca(pred, y_test, bundle.split.unseen_classes))
    if setting in ("gzsl", "both") and bundle.split.test_seen_idx.size:
        candidates = _all_split_classes(bundle)
        x_seen, y_seen = view_split(bundle, "test_seen")
        x_unseen, y_unseen = view_split(bundle, "test_unseen")
        scores = gzsl_eval(
            predict_class_ids(model, x_seen, bundle.attributes, candidates), y_seen,
            predict_class_ids(model, x_unseen, bundle.attributes, candidates), y_unseen,
            bundle.split.seen_classes, bundle.split.unseen_classes)
        row["u"] = _percent(scores.acc_unseen)
        row["s"] = _percent(scores.acc_seen)
        row["h"] = _percent(scores.harmonic_mean)
    return row


def cmd_sweep(args):
    progress_path = args.progress or args.out + ".progress.json"
    progress = {}
    if os.path.exists(progress_path):
        with open(progress_path, "r", encoding="utf-8") as fh:
            progress = json.load(fh)

    # only successful cells enter the progress file, so interrupted or
    # failed cells are retried on the next run
    failures = []
    for manifest_path in args.datasets:
        for method in args.methods:
            key = f"{method}::{manifest_path}"
            if key in progress:
                continue
            try:
                progress[key] = _sweep_cell(method, manifest_path, args.setting, args.seed)
            except ZspeedlError as exc:
                failures.append((key, str(exc)))
                continue
            with open(progress_path, "w", encoding="utf-8") as fh:
                json.dump(progress, fh, sort_keys=True, indent=2)

    fields = ["method", "dataset", "backbone", "mca", "u", "s", "h"]
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for manifest_path in args.datasets:
            for method in args.methods:
                row = progress.get(f"{method}::{manifest_path}")
                if row:
                    writer.writerow(row)
    for key, message in failures:
        print(f"sweep cell failed: {key}: {message}", file=sys.stderr)
    print(f"wrote sweep results to {args.out}")
    return 0


def cmd_fps(args):
    extract = load_report(args.extract)
    classify = load_report(args.classify)
    accuracy = {}
    if args.accuracy:
        with open(args.accuracy, "r", encoding="utf-8") as fh:
            for rec in json.load(fh):
                accuracy[(rec.get("method"), rec.get("backbone"))] = rec.get("mca")

    extract_by_tag = {}
    for entry in extract["entries"]:
        extract_by_tag.setdefault(entry["backbone_tag"], entry)

    rows, skipped = [], []
    classify_tags = set()
    for entry in classify["entries"]:
        tag = entry["backbone_tag"]
        classify_tags.add(tag)
        ext = extract_by_tag.get(tag)
        if ext is None:
            skipped.append(tag)
            continue
        fps = compose_fps(ext["avg_ms"], entry["avg_ms"])
        row = {
            "method": entry["method"],
            "backbone_tag": tag,
            "feature_dim": entry["feature_dim"],
            "extract_ms": round(ext["avg_ms"], 4),
            "classify_ms": round(entry["avg_ms"], 4),
            "fps": round(fps, 2),
        }
        key = (entry["method"], tag)
        row["mca"] = accuracy.get(key, "")
        rows.append(row)
    skipped.extend(sorted(set(extract_by_tag) - classify_tags))

    fields = ["method", "backbone_tag", "feature_dim", "extract_ms", "classify_ms",
              "fps", "mca"]
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    for tag in skipped:
        print(f"skipped backbone tag present in one report only: {tag}", file=sys.stderr)
    print(f"wrote {len(rows)} fps rows to {args.out}"
          + (f" ({len(skipped)} skipped)" if skipped else ""))
    return 0


def build_parser():
    parser = _Parser(prog="zspeedl", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="fit a method and serialize the model")
    train.add_argument("--dataset", required=True, help="dataset manifest path")
    train.add_argument("--method", required=True, choices=METHODS)
    train.add_argument("--seed", type=int, default=42)
    train.add_argument("--out", required=True, help="model file to write")
    train.add_argument("--hp", action="append", metavar="KEY=VALUE",
                       help="explicit hyperparameter (repeatable); omitted "
                            "closed-form hyperparameters are grid-searched")
    train.set_defaults(func=cmd_train)

    evaluate = sub.add_parser("eval", help="score a trained model")
    evaluate.add_argument("--model", required=True)
    evaluate.add_argument("--dataset", required=True)
    evaluate.add_argument("--setting", choices=("zsl", "gzsl"), default="zsl")
    evaluate.add_argument("--out", help="result JSON path")
    evaluate.set_defaults(func=cmd_eval)

    bench = sub.add_parser("bench", help="time single-sample classification")
    bench.add_argument("--model", required=True)
    bench.add_argument("--dataset", required=True)
    bench.add_argument("--warmup", type=int, default=10)
    bench.add_argument("--repeats", type=int, default=100)
    bench.add_argument("--device-label", default="desktop")
    bench.add_argument("--out", required=True, help="report JSON path")
    bench.add_argument("--csv", help="optional CSV view of the report")
    bench.set_defaults(func=cmd_bench)

    sweep = sub.add_parser("sweep", help="train/eval a method x dataset grid")
    sweep.add_argument("--methods", nargs="+", required=True, choices=METHODS)
    sweep.add_argument("--datasets", nargs="+", required=True,
                       help="dataset manifest paths (one per backbone)")
    sweep.add_argument("--setting", choices=("zsl", "gzsl", "both"), default="both")
    sweep.add_argument("--seed", type=int, default=42)
    sweep.add_argument("--out", required=True, help="CSV path")
    sweep.add_argument("--progress", help="progress file for resuming")
    sweep.set_defaults(func=cmd_sweep)

    fps = sub.add_parser("fps", help="compose extraction + classification FPS")
    fps.add_argument("--extract", required=True, help="extraction timing report JSON")
    fps.add_argument("--classify", required=True, help="classification report JSON")
    fps.add_argument("--accuracy", help="optional eval-result JSON array to join")
    fps.add_argument("--out", required=True, help="CSV path")
    fps.set_defaults(func=cmd_fps)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
