"""Restricted and generalized ZSL scoring.

Accuracy is multi-way classification accuracy (MCA): the unweighted mean of
per-class accuracies over the classes that actually occur in the test
labels. The generalized setting reports seen accuracy, unseen accuracy and
their harmonic mean. All values are fractions in [0, 1]; the CLI formats
percentages.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import DataError


def mca(predictions, labels, classes):
    """Mean per-class accuracy over the classes present in ``labels``."""
    predictions = np.asarray(predictions, dtype=np.int64).reshape(-1)
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    classes = np.asarray(classes, dtype=np.int64).reshape(-1)
    if labels.size == 0:
        raise DataError("cannot score an empty label list")
    if predictions.shape != labels.shape:
        raise DataError(
            f"{predictions.size} predictions for {labels.size} labels")
    if not np.isin(labels, classes).all():
        raise DataError("labels contain classes outside the candidate class list")

    per_class = []
    for cls in classes:
        mask = labels == cls
        if mask.any():
            per_class.append((predictions[mask] == cls).mean())
    return float(np.mean(per_class))


def harmonic_mean(acc_seen, acc_unseen):
    total = acc_seen + acc_unseen
    if total <= 0:
        return 0.0
    return 2.0 * acc_seen * acc_unseen / total


@dataclass(frozen=True)
class GzslScores:
    acc_seen: float
    acc_unseen: float
    harmonic_mean: float

    def as_dict(self):
        return {"u": self.acc_unseen, "s": self.acc_seen, "h": self.harmonic_mean}


def gzsl_eval(pred_seen, labels_seen, pred_unseen, labels_unseen,
              seen_classes, unseen_classes):
    """Score generalized ZSL predictions made over the joint candidate set."""
    if len(labels_seen) == 0 or len(labels_unseen) == 0:
        raise DataError("generalized evaluation needs both seen and unseen test instances")
    acc_seen = mca(pred_seen, labels_seen, seen_classes)
    acc_unseen = mca(pred_unseen, labels_unseen, unseen_classes)
    return GzslScores(
        acc_seen=acc_seen,
        acc_unseen=acc_unseen,
        harmonic_mean=harmonic_mean(acc_seen, acc_unseen),
    )


def result_record(method, backbone, dataset, setting, scores, hyperparameters, seed):
    """Plain-dict result row; ``scores`` is a float (zsl) or GzslScores (gzsl)."""
    record = {
        "method": method,
        "backbone": backbone,
        "dataset": dataset,
        "setting": setting,
        "hyperparameters": hyperparameters,
        "seed": seed,
    }
    if isinstance(scores, GzslScores):
        record["gzsl"] = scores.as_dict()
    else:
        record["mca"] = float(scores)
    return record


def write_result(record, path):
    """Write a result record as deterministic JSON (sorted keys)."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(record, fh, sort_keys=True, indent=2)
        fh.write("\n")
