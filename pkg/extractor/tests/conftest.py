import numpy as np
import pytest
import scipy.io


@pytest.fixture
def synthetic_archive(tmp_path):
    """Tiny archive in the official two-file layout (1-based indices)."""
    rng = np.random.default_rng(0)
    n, d, c, a = 40, 8, 6, 4
    labels = rng.integers(1, c + 1, size=n)
    # ensure every class occurs
    labels[:c] = np.arange(1, c + 1)
    features = rng.standard_normal((d, n))
    att = rng.uniform(0.1, 1.0, size=(a, c))

    unseen = {5, 6}
    seen_idx = np.flatnonzero(~np.isin(labels, list(unseen))) + 1
    unseen_idx = np.flatnonzero(np.isin(labels, list(unseen))) + 1
    half = len(seen_idx) * 3 // 4
    trainval = seen_idx[:half]
    test_seen = seen_idx[half:]
    val = trainval[:len(trainval) // 5]

    names = np.zeros((c, 1), dtype=object)
    for i in range(c):
        names[i, 0] = np.array([f"name_{i + 1}"])

    scipy.io.savemat(tmp_path / "res101.mat",
                     {"features": features, "labels": labels.reshape(-1, 1)})
    scipy.io.savemat(tmp_path / "att_splits.mat",
                     {"att": att,
                      "trainval_loc": trainval.reshape(-1, 1),
                      "train_loc": np.setdiff1d(trainval, val).reshape(-1, 1),
                      "val_loc": val.reshape(-1, 1),
                      "test_seen_loc": test_seen.reshape(-1, 1),
                      "test_unseen_loc": unseen_idx.reshape(-1, 1),
                      "allclasses_names": names})
    return {"dir": tmp_path, "n": n, "d": d, "c": c, "a": a,
            "trainval": trainval, "val": val}
