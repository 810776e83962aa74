"""Candidate-set prediction glue shared by evaluation, selection and the CLI.

Projection methods predict positions into a candidate attribute matrix;
generative classifiers carry class ids internally. This module maps both
onto class-id predictions for an arbitrary candidate class list.
"""

import numpy as np

from .errors import DataError
from .models import DAP, DecoderAugmentedClassifier, SoftmaxClassifier


def predict_class_ids(model, x, attributes, candidate_ids):
    """Predict class ids for rows of x, restricted to ``candidate_ids``."""
    candidate_ids = np.asarray(candidate_ids, dtype=np.int64)
    if candidate_ids.size == 0:
        raise DataError("empty candidate class list")

    if isinstance(model, (SoftmaxClassifier, DecoderAugmentedClassifier)):
        if isinstance(model, DecoderAugmentedClassifier):
            scores = model.classifier.decision_function(model.decoder.augment(x))
            classes = model.classifier.classes_
        else:
            scores = model.decision_function(x)
            classes = model.classes_
        positions = np.searchsorted(classes, candidate_ids)
        valid = (positions < classes.size) & (classes[np.minimum(positions, classes.size - 1)]
                                              == candidate_ids)
        if not valid.all():
            missing = candidate_ids[~valid].tolist()
            raise DataError(f"classifier was not trained for candidate classes {missing}")
        return candidate_ids[scores[:, positions].argmax(axis=1)]

    candidates = attributes[candidate_ids]
    if isinstance(model, DAP):
        candidates = model.binarize(candidates)
    return candidate_ids[model.predict(x, candidates)]
