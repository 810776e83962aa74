import json

import numpy as np
import pytest

from zspeedl.data import load_manifest, view_split, write_bundle
from zspeedl.datasets import make_synthetic_bundle
from zspeedl.errors import DataError


@pytest.fixture
def manifest_path(tmp_path, tiny_bundle):
    return write_bundle(tiny_bundle, tmp_path, name="fixture")


def test_fixture_dimensions(tiny_bundle):
    assert tiny_bundle.n_instances == 60
    assert tiny_bundle.feature_dim == 8
    assert tiny_bundle.n_classes == 6
    assert tiny_bundle.attribute_dim == 4
    assert tiny_bundle.split.unseen_classes.size == 2


def test_manifest_roundtrip(manifest_path, tiny_bundle):
    loaded = load_manifest(manifest_path)
    assert loaded.n_instances == 60
    assert loaded.split.unseen_classes.size == 2
    np.testing.assert_array_equal(loaded.labels, tiny_bundle.labels)
    np.testing.assert_array_equal(
        loaded.features, tiny_bundle.features.astype(np.float32).astype(np.float64))


def test_load_is_deterministic(manifest_path):
    a = load_manifest(manifest_path)
    b = load_manifest(manifest_path)
    np.testing.assert_array_equal(a.features, b.features)
    np.testing.assert_array_equal(a.labels, b.labels)
    np.testing.assert_array_equal(a.attributes, b.attributes)
    for field in ("train_idx", "test_unseen_idx", "test_seen_idx", "val_idx",
                  "seen_classes", "unseen_classes"):
        np.testing.assert_array_equal(getattr(a.split, field), getattr(b.split, field))


def test_view_split_partitions(tiny_bundle):
    seen = set(tiny_bundle.split.seen_classes.tolist())
    unseen = set(tiny_bundle.split.unseen_classes.tolist())

    _, y_train = view_split(tiny_bundle, "train")
    assert set(y_train.tolist()) <= seen

    _, y_unseen = view_split(tiny_bundle, "test_unseen")
    assert set(y_unseen.tolist()) <= unseen

    sizes = sum(getattr(tiny_bundle.split, f).size
                for f in ("train_idx", "test_seen_idx", "test_unseen_idx", "val_idx"))
    assert sizes <= tiny_bundle.n_instances


def test_view_split_row_order(tiny_bundle):
    x, y = view_split(tiny_bundle, "train")
    idx = tiny_bundle.split.train_idx
    np.testing.assert_array_equal(x, tiny_bundle.features[idx])
    np.testing.assert_array_equal(y, tiny_bundle.labels[idx])


def test_empty_part_errors(tiny_bundle):
    assert tiny_bundle.split.val_idx.size == 0
    with pytest.raises(DataError):
        view_split(tiny_bundle, "val")
    with pytest.raises(DataError):
        view_split(tiny_bundle, "not_a_part")


def test_overlapping_partition_rejected(tmp_path, tiny_bundle):
    manifest_path = write_bundle(tiny_bundle, tmp_path, name="broken")
    split_path = tmp_path / "broken_split.json"
    split = json.loads(split_path.read_text())
    split["unseen_classes"].append(int(split["seen_classes"][0]))
    split_path.write_text(json.dumps(split))
    with pytest.raises(DataError, match="overlap"):
        load_manifest(manifest_path)


def test_train_instances_of_unseen_class_rejected(tmp_path, tiny_bundle):
    manifest_path = write_bundle(tiny_bundle, tmp_path, name="broken")
    split_path = tmp_path / "broken_split.json"
    split = json.loads(split_path.read_text())
    split["train_idx"].append(int(split["test_unseen_idx"][0]))
    split_path.write_text(json.dumps(split))
    with pytest.raises(DataError, match="out-of-partition"):
        load_manifest(manifest_path)


def test_duplicate_indices_rejected(tmp_path, tiny_bundle):
    manifest_path = write_bundle(tiny_bundle, tmp_path, name="broken")
    split_path = tmp_path / "broken_split.json"
    split = json.loads(split_path.read_text())
    split["train_idx"].append(split["train_idx"][0])
    split_path.write_text(json.dumps(split))
    with pytest.raises(DataError, match="duplicate"):
        load_manifest(manifest_path)


def test_missing_referenced_file(tmp_path, tiny_bundle):
    manifest_path = write_bundle(tiny_bundle, tmp_path, name="fixture")
    (tmp_path / "fixture_attributes.zspl").unlink()
    with pytest.raises(DataError, match="does not exist"):
        load_manifest(manifest_path)


def test_declared_dim_mismatch(tmp_path, tiny_bundle):
    manifest_path = write_bundle(tiny_bundle, tmp_path, name="fixture")
    manifest = json.loads((tmp_path / "fixture_manifest.json").read_text())
    manifest["feature_dim"] = 999
    (tmp_path / "fixture_manifest.json").write_text(json.dumps(manifest))
    with pytest.raises(DataError, match="feature_dim"):
        load_manifest(manifest_path)


def test_labels_of_written_bundle_survive(tmp_path):
    bundle = make_synthetic_bundle(seed=5)
    manifest_path = write_bundle(bundle, tmp_path, name="other")
    loaded = load_manifest(manifest_path)
    np.testing.assert_array_equal(loaded.labels, bundle.labels)
    assert loaded.class_names == bundle.class_names
    assert loaded.backbone_tag == "synthetic"
