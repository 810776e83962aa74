"""Per-sample inference timing harness.

The timed unit is one ``predict_single`` call: classify a single feature
row against a prepared candidate matrix. Model loading, candidate-matrix
construction and any I/O happen before the timed region. Measurements use
the monotonic nanosecond clock, run on the calling thread, and report
avg/std/min milliseconds over the timed repetitions.
"""

import csv
import json
import os
import time
from dataclasses import dataclass, field

import numpy as np
from threadpoolctl import threadpool_limits

from . import __version__
from .data import view_split
from .errors import DataError

THREADS_ENV = "ZSPEEDL_THREADS"


def thread_count(default=1):
    """Thread budget for timed regions, from the ZSPEEDL_THREADS env var."""
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw)) if raw else default
    except ValueError:
        raise DataError(f"{THREADS_ENV} must be an integer, got {raw!r}")


@dataclass(frozen=True)
class TimingStats:
    avg_ms: float
    std_ms: float
    min_ms: float
    repeats: int
    warmup: int
    device_label: str = ""

    def __post_init__(self):
        if self.repeats < 1:
            raise DataError("repeats must be >= 1")
        if self.std_ms < 0 or self.min_ms > self.avg_ms + 1e-12:
            raise DataError("inconsistent timing statistics")

    def format_cell(self):
        return f"{self.avg_ms:.2f} ± {self.std_ms:.2f}"


def time_closure(op, warmup=10, repeats=100, device_label=""):
    """Run ``op`` warmup times untimed, then time ``repeats`` executions."""
    if repeats < 1:
        raise DataError("repeats must be >= 1")
    if warmup < 0:
        raise DataError("warmup must be >= 0")
    for _ in range(warmup):
        op()
    samples_ms = np.empty(repeats)
    clock = time.perf_counter_ns
    with threadpool_limits(limits=thread_count()):
        for i in range(repeats):
            start = clock()
            op()
            samples_ms[i] = (clock() - start) / 1e6
    return TimingStats(
        avg_ms=float(samples_ms.mean()),
        std_ms=float(samples_ms.std()),
        min_ms=float(samples_ms.min()),
        repeats=repeats,
        warmup=warmup,
        device_label=device_label,
    )


def prepare_single_sample(model, bundle, part="test_unseen"):
    """Fixed test row and candidate matrix for a model, built outside timing.

    Candidates are the bundle's unseen-class attribute rows (binarized for
    attribute-signature models); generative classifiers carry their candidate
    set internally and receive None.
    """
    features, _ = view_split(bundle, part)
    x = np.ascontiguousarray(features[0])
    if getattr(model, "method", None) in ("gen-softmax", "gen-decoder"):
        return x, None
    candidates = bundle.attributes[bundle.split.unseen_classes]
    if hasattr(model, "binarize"):
        candidates = model.binarize(candidates)
    return x, np.ascontiguousarray(candidates)


def bench_classification(model, bundle, warmup=10, repeats=100, device_label=""):
    """Time predict_single on one fixed test row; batch size is exactly 1."""
    x, candidates = prepare_single_sample(model, bundle)
    model.predict_single(x, candidates)  # fail fast outside the timed region
    return time_closure(
        lambda: model.predict_single(x, candidates),
        warmup=warmup, repeats=repeats, device_label=device_label)


def compose_fps(t_extract_ms, t_classify_ms):
    """Frames per second from per-frame extraction + classification times."""
    if t_extract_ms < 0 or t_classify_ms < 0:
        raise DataError("timings must be nonnegative")
    total = t_extract_ms + t_classify_ms
    if total <= 0:
        raise DataError("total per-frame time must be positive")
    return 1000.0 / total


@dataclass
class BenchReport:
    device_label: str
    entries: list = field(default_factory=list)
    created_at: str = ""
    toolkit_version: str = __version__

    def add(self, method, backbone_tag, feature_dim, stats):
        self.entries.append({
            "method": method,
            "backbone_tag": backbone_tag,
            "feature_dim": int(feature_dim),
            "avg_ms": stats.avg_ms,
            "std_ms": stats.std_ms,
            "min_ms": stats.min_ms,
            "repeats": stats.repeats,
            "warmup": stats.warmup,
        })


def write_report(report, path, csv_path=None):
    """Serialize a report as deterministic JSON, optionally with a CSV view.

    The CSV mirrors the classification-timing table layout: one method per
    row, one "avg ± std" column per feature dimension.
    """
    if not report.entries:
        raise DataError("refusing to write a report with no entries")
    payload = {
        "toolkit_version": report.toolkit_version,
        "created_at": report.created_at,
        "device_label": report.device_label,
        "entries": report.entries,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")

    if csv_path:
        dims = sorted({e["feature_dim"] for e in report.entries})
        methods = list(dict.fromkeys(e["method"] for e in report.entries))
        cells = {(e["method"], e["feature_dim"]): f"{e['avg_ms']:.2f} ± {e['std_ms']:.2f}"
                 for e in report.entries}
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["method"] + [str(d) for d in dims])
            for m in methods:
                writer.writerow([m] + [cells.get((m, d), "") for d in dims])


def load_report(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read benchmark report {path}: {exc}") from exc
    if "entries" not in payload:
        raise DataError(f"benchmark report {path} has no entries field")
    return payload
