"""Dataset bundles, split handling and manifest I/O.

A dataset on disk is a JSON manifest pointing at three binary array files
(features N x d, labels N x 1, class attributes C x a) plus a split JSON
holding instance-index lists and the seen/unseen class partition. Loading
validates every structural invariant; violations raise DataError.
"""

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .arrayio import read_array, write_array
from .errors import DataError

SPLIT_PARTS = ("train", "test_unseen", "test_seen", "val")

_INDEX_FIELDS = ("train_idx", "test_unseen_idx", "test_seen_idx", "val_idx")
_CLASS_FIELDS = ("seen_classes", "unseen_classes")


@dataclass(frozen=True)
class SplitSpec:
    """Instance-index lists and the seen/unseen class partition."""

    train_idx: np.ndarray
    test_unseen_idx: np.ndarray
    test_seen_idx: np.ndarray
    val_idx: np.ndarray
    seen_classes: np.ndarray
    unseen_classes: np.ndarray

    def validate(self, labels, n_classes):
        n = len(labels)
        seen = set(self.seen_classes.tolist())
        unseen = set(self.unseen_classes.tolist())
        if seen & unseen:
            raise DataError(f"seen and unseen classes overlap: {sorted(seen & unseen)}")
        for cls in seen | unseen:
            if not 0 <= cls < n_classes:
                raise DataError(f"class id {cls} outside [0, {n_classes})")
        for name in _INDEX_FIELDS:
            idx = getattr(self, name)
            if idx.size and (idx.min() < 0 or idx.max() >= n):
                raise DataError(f"{name} contains indices outside [0, {n})")
            if len(np.unique(idx)) != len(idx):
                raise DataError(f"{name} contains duplicate indices")
        for name, allowed in (("train_idx", seen), ("test_seen_idx", seen),
                              ("val_idx", seen), ("test_unseen_idx", unseen)):
            part_labels = set(labels[getattr(self, name)].tolist())
            if not part_labels <= allowed:
                bad = sorted(part_labels - allowed)
                raise DataError(f"{name} holds instances of out-of-partition classes {bad}")

    def part_indices(self, part):
        if part not in SPLIT_PARTS:
            raise DataError(f"unknown split part {part!r}, expected one of {SPLIT_PARTS}")
        return getattr(self, part + "_idx")


def _as_index_array(values, name):
    arr = np.asarray(values, dtype=np.int64).reshape(-1)
    if arr.size and arr.min() < 0:
        raise DataError(f"{name} contains negative indices")
    return arr


def split_from_dict(d):
    """Build a SplitSpec from the six-list JSON representation."""
    missing = [k for k in _INDEX_FIELDS + _CLASS_FIELDS if k not in d]
    if missing:
        raise DataError(f"split JSON missing fields: {missing}")
    return SplitSpec(**{k: _as_index_array(d[k], k) for k in _INDEX_FIELDS + _CLASS_FIELDS})


def split_to_dict(split):
    return {k: getattr(split, k).tolist() for k in _INDEX_FIELDS + _CLASS_FIELDS}


@dataclass
class DatasetBundle:
    """Features, labels, class-attribute matrix and split for one dataset."""

    features: np.ndarray          # (N, d) float64
    labels: np.ndarray            # (N,) int64
    attributes: np.ndarray        # (C_total, a) float64
    split: SplitSpec
    class_names: list = field(default_factory=list)
    backbone_tag: str = ""
    name: str = ""

    @property
    def n_instances(self):
        return self.features.shape[0]

    @property
    def feature_dim(self):
        return self.features.shape[1]

    @property
    def n_classes(self):
        return self.attributes.shape[0]

    @property
    def attribute_dim(self):
        return self.attributes.shape[1]

    def validate(self):
        n, _ = self.features.shape
        if self.labels.shape != (n,):
            raise DataError(
                f"labels length {self.labels.shape} does not match {n} feature rows")
        if not np.isfinite(self.features).all():
            raise DataError("features contain non-finite values")
        if not np.isfinite(self.attributes).all():
            raise DataError("attributes contain non-finite values")
        c = self.attributes.shape[0]
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= c):
            raise DataError(f"labels outside [0, {c})")
        if self.class_names and len(self.class_names) != c:
            raise DataError(
                f"{len(self.class_names)} class names for {c} attribute rows")
        self.split.validate(self.labels, c)
        return self


def view_split(bundle, part):
    """Row subset (features, labels) of one split part, order preserved."""
    idx = bundle.split.part_indices(part)
    if idx.size == 0:
        raise DataError(f"split part {part!r} is empty")
    return bundle.features[idx], bundle.labels[idx]


def load_manifest(path):
    """Load and fully validate a dataset bundle from its JSON manifest."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"manifest {path} is not valid JSON: {exc}") from exc

    missing = [k for k in ("name", "features", "labels", "attributes", "split") if k not in manifest]
    if missing:
        raise DataError(f"manifest {path} missing fields: {missing}")

    base = os.path.dirname(os.path.abspath(path))

    def resolve(p):
        return p if os.path.isabs(p) else os.path.join(base, p)

    for key in ("features", "labels", "attributes", "split"):
        if not os.path.exists(resolve(manifest[key])):
            raise DataError(f"manifest {path}: referenced file {manifest[key]!r} does not exist")

    features = read_array(resolve(manifest["features"]))
    labels_arr = read_array(resolve(manifest["labels"]))
    if labels_arr.ndim != 2 or labels_arr.shape[1] != 1:
        raise DataError(f"labels array must be N x 1, got {labels_arr.shape}")
    labels = labels_arr[:, 0]
    attributes = read_array(resolve(manifest["attributes"]))

    for key, dim in (("feature_dim", features.shape[1]), ("attribute_dim", attributes.shape[1])):
        if key in manifest and manifest[key] != dim:
            raise DataError(
                f"manifest {path}: declared {key}={manifest[key]} but array has {dim}")

    with open(resolve(manifest["split"]), "r", encoding="utf-8") as fh:
        split = split_from_dict(json.load(fh))

    bundle = DatasetBundle(
        features=features,
        labels=labels,
        attributes=attributes,
        split=split,
        class_names=list(manifest.get("class_names", [])),
        backbone_tag=manifest.get("backbone_tag", ""),
        name=manifest["name"],
    )
    return bundle.validate()


def write_bundle(bundle, out_dir, name=None):
    """Write a bundle's arrays, split and manifest under ``out_dir``.

    Returns the manifest path. Files are named after the dataset so several
    bundles can share a directory.
    """
    name = name or bundle.name or "dataset"
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "features": f"{name}_features.zspl",
        "labels": f"{name}_labels.zspl",
        "attributes": f"{name}_attributes.zspl",
        "split": f"{name}_split.json",
    }
    write_array(bundle.features, os.path.join(out_dir, paths["features"]))
    write_array(bundle.labels.reshape(-1, 1).astype(np.int64), os.path.join(out_dir, paths["labels"]))
    write_array(bundle.attributes, os.path.join(out_dir, paths["attributes"]))
    with open(os.path.join(out_dir, paths["split"]), "w", encoding="utf-8") as fh:
        json.dump(split_to_dict(bundle.split), fh, sort_keys=True)
    manifest = {
        "name": name,
        **paths,
        "class_names": list(bundle.class_names),
        "backbone_tag": bundle.backbone_tag,
        "feature_dim": int(bundle.feature_dim),
        "attribute_dim": int(bundle.attribute_dim),
    }
    manifest_path = os.path.join(out_dir, f"{name}_manifest.json")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
    return manifest_path
