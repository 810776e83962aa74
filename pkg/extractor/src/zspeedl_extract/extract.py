"""Image feature extraction with per-image forward-pass timing.

Features come from the backbone's top-layer average pooling. Timing
measures the forward pass only (decode and resize excluded), batch size 1,
after warmup, and is reported in the same entry schema as the toolkit's
benchmark reports.
"""

import json
import os
import time

import numpy as np
from PIL import Image

from . import __version__
from .arrayio import write_array
from .backbones import build

IMAGE_EXTENSIONS = (".jpg", ".jpeg", ".png", ".bmp")


def list_images(directory):
    return sorted(
        os.path.join(directory, name) for name in os.listdir(directory)
        if name.lower().endswith(IMAGE_EXTENSIONS))


def load_image(path, size):
    with Image.open(path) as img:
        return np.asarray(img.convert("RGB").resize((size, size)), dtype=np.float32)


def extract(backbone, image_paths, out_dir, batch=16, weights="imagenet",
            warmup=10, repeats=100, device_label="desktop"):
    """Extract pooled features for every readable image; returns a summary.

    Writes <tag>_features.zspl, <tag>_timing.json and <tag>_images.json
    (the order of rows) under ``out_dir``. Unreadable images are skipped
    and listed in the summary.
    """
    model, preprocess, spec = build(backbone, weights=weights)

    arrays, kept, skipped = [], [], []
    for path in image_paths:
        try:
            arrays.append(load_image(path, spec.input_size))
            kept.append(path)
        except (OSError, ValueError):
            skipped.append(path)
    if not arrays:
        raise ValueError("no readable images")

    batch = max(1, batch)
    feature_rows = []
    for start in range(0, len(arrays), batch):
        chunk = preprocess(np.stack(arrays[start:start + batch]).copy())
        feature_rows.append(np.asarray(model(chunk, training=False)))
    features = np.vstack(feature_rows)
    if features.shape[1] != spec.feature_dim:
        raise RuntimeError(
            f"{backbone}: extracted {features.shape[1]}-dim features, expected "
            f"{spec.feature_dim}")

    # single-image forward timing, decode/resize outside the clock
    sample = preprocess(arrays[0][None, ...].copy())
    for _ in range(warmup):
        model(sample, training=False)
    samples_ms = np.empty(repeats)
    for i in range(repeats):
        start = time.perf_counter_ns()
        model(sample, training=False)
        samples_ms[i] = (time.perf_counter_ns() - start) / 1e6

    os.makedirs(out_dir, exist_ok=True)
    write_array(features, os.path.join(out_dir, f"{backbone}_features.zspl"))
    timing = {
        "toolkit_version": __version__,
        "created_at": "",
        "device_label": device_label,
        "preprocessing": {"input_size": spec.input_size,
                          "normalization": f"keras:{spec.module_name}",
                          "weights": weights},
        "entries": [{
            "method": "extract",
            "backbone_tag": backbone,
            "feature_dim": spec.feature_dim,
            "avg_ms": float(samples_ms.mean()),
            "std_ms": float(samples_ms.std()),
            "min_ms": float(samples_ms.min()),
            "repeats": repeats,
            "warmup": warmup,
        }],
    }
    with open(os.path.join(out_dir, f"{backbone}_timing.json"), "w",
              encoding="utf-8") as fh:
        json.dump(timing, fh, sort_keys=True, indent=2)
    with open(os.path.join(out_dir, f"{backbone}_images.json"), "w",
              encoding="utf-8") as fh:
        json.dump({"images": kept, "skipped": skipped}, fh, indent=2)
    return {"features_shape": list(features.shape), "skipped": skipped,
            "timing": timing["entries"][0]}
