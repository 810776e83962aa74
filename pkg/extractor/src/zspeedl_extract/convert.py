"""Converter for the official precomputed-feature archives.

The archives ship two MATLAB files per dataset: one with the CNN features
and instance labels, one with the class attribute matrix and the standard
split indices (1-based). Output is the toolkit's native bundle: binary
arrays, split JSON and manifest JSON with 0-based dense class ids; the
original-id order is recorded through class_names and source checksums.
"""

import hashlib
import json
import os

import numpy as np
import scipy.io

from .arrayio import write_array

FEATURE_FILE = "res101.mat"
SPLIT_FILE = "att_splits.mat"

# dataset -> (classes, instances, attributes) of the official archives
DATASET_STATS = {
    "awa2": (50, 37322, 85),
    "cub": (200, 11788, 312),
    "sun": (717, 14340, 102),
    "apy": (32, 15339, 64),
}

_REQUIRED_FEATURE_KEYS = ("features", "labels")
_REQUIRED_SPLIT_KEYS = ("att", "trainval_loc", "test_seen_loc", "test_unseen_loc")


def _sha256(path):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _loc(split_mat, key):
    if key not in split_mat:
        return np.zeros(0, dtype=np.int64)
    return np.asarray(split_mat[key], dtype=np.int64).reshape(-1) - 1


def _class_names(split_mat, n_classes):
    raw = split_mat.get("allclasses_names")
    if raw is None:
        return [f"class_{i:03d}" for i in range(n_classes)]
    names = []
    for cell in np.asarray(raw).reshape(-1):
        value = cell
        while isinstance(value, np.ndarray):
            value = value[0] if value.size else ""
        names.append(str(value))
    return names


def convert_official(dataset, archive_dir, out_dir, backbone_tag="resnet101"):
    """Convert one official archive; returns (manifest_path, stats dict)."""
    dataset = dataset.lower()
    paths = {name: os.path.join(archive_dir, name)
             for name in (FEATURE_FILE, SPLIT_FILE)}
    missing = [name for name, p in paths.items() if not os.path.exists(p)]
    if missing:
        raise FileNotFoundError(
            f"archive dir {archive_dir} is missing: {', '.join(missing)}")

    feature_mat = scipy.io.loadmat(paths[FEATURE_FILE])
    split_mat = scipy.io.loadmat(paths[SPLIT_FILE])
    for key in _REQUIRED_FEATURE_KEYS:
        if key not in feature_mat:
            raise KeyError(f"{FEATURE_FILE} has no array named {key!r}")
    for key in _REQUIRED_SPLIT_KEYS:
        if key not in split_mat:
            raise KeyError(f"{SPLIT_FILE} has no array named {key!r}")

    features = np.asarray(feature_mat["features"], dtype=np.float64).T   # (N, d)
    labels_raw = np.asarray(feature_mat["labels"], dtype=np.int64).reshape(-1)
    attributes = np.asarray(split_mat["att"], dtype=np.float64).T        # (C, a)

    # dense 0-based ids in ascending original-id order; attribute rows and
    # names follow the original (1-based) id indexing of the archives
    original_ids = np.unique(labels_raw)
    if original_ids.size != attributes.shape[0]:
        raise ValueError(
            f"{original_ids.size} label ids but {attributes.shape[0]} attribute rows")
    if original_ids.min() < 1 or original_ids.max() > attributes.shape[0]:
        raise ValueError(
            f"label ids span [{original_ids.min()}, {original_ids.max()}], outside "
            f"the 1..{attributes.shape[0]} attribute-row range")
    labels = np.searchsorted(original_ids, labels_raw)
    attributes = attributes[original_ids - 1]
    all_names = _class_names(split_mat, attributes.shape[0])
    class_names = [all_names[i - 1] for i in original_ids]

    train_idx = _loc(split_mat, "trainval_loc")
    val_idx = _loc(split_mat, "val_loc")
    test_seen_idx = _loc(split_mat, "test_seen_loc")
    test_unseen_idx = _loc(split_mat, "test_unseen_loc")
    # tuning indices must nest inside the final train indices
    val_idx = val_idx[np.isin(val_idx, train_idx)]

    seen = np.unique(labels[train_idx])
    unseen = np.unique(labels[test_unseen_idx])

    if dataset in DATASET_STATS:
        expected_c, expected_n, expected_a = DATASET_STATS[dataset]
        got = (attributes.shape[0], features.shape[0], attributes.shape[1])
        if got != (expected_c, expected_n, expected_a):
            raise ValueError(
                f"{dataset}: archive has classes/instances/attributes {got}, "
                f"expected {(expected_c, expected_n, expected_a)}")

    os.makedirs(out_dir, exist_ok=True)
    name = f"{dataset}_{backbone_tag}"
    files = {
        "features": f"{name}_features.zspl",
        "labels": f"{name}_labels.zspl",
        "attributes": f"{name}_attributes.zspl",
        "split": f"{name}_split.json",
    }
    write_array(features, os.path.join(out_dir, files["features"]))
    write_array(labels.reshape(-1, 1), os.path.join(out_dir, files["labels"]))
    write_array(attributes, os.path.join(out_dir, files["attributes"]))
    split = {
        "train_idx": train_idx.tolist(),
        "val_idx": val_idx.tolist(),
        "test_seen_idx": test_seen_idx.tolist(),
        "test_unseen_idx": test_unseen_idx.tolist(),
        "seen_classes": seen.tolist(),
        "unseen_classes": unseen.tolist(),
    }
    with open(os.path.join(out_dir, files["split"]), "w", encoding="utf-8") as fh:
        json.dump(split, fh, sort_keys=True)

    manifest = {
        "name": dataset,
        **files,
        "class_names": class_names,
        "backbone_tag": backbone_tag,
        "feature_dim": int(features.shape[1]),
        "attribute_dim": int(attributes.shape[1]),
        "source_checksums": {n: _sha256(p) for n, p in paths.items()},
    }
    manifest_path = os.path.join(out_dir, f"{name}_manifest.json")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)

    stats = {"classes": int(attributes.shape[0]), "instances": int(features.shape[0]),
             "attributes": int(attributes.shape[1]),
             "train": int(train_idx.size), "val": int(val_idx.size),
             "test_seen": int(test_seen_idx.size),
             "test_unseen": int(test_unseen_idx.size)}
    return manifest_path, stats
