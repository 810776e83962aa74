"""Shared estimator plumbing.

All methods follow the scikit-learn estimator protocol: hyperparameters in
``__init__``, learned state in trailing-underscore attributes, ``fit``
returning self. Candidate-set prediction returns positions into the
candidate attribute matrix (lowest index wins ties); mapping positions back
to class ids is the caller's job.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from ..data import view_split


class ZslEstimator(BaseEstimator):
    """Base class for candidate-set ZSL predictors."""

    #: name used by the CLI and model serialization
    method = None

    def fit_bundle(self, bundle):
        """Fit on a bundle's train split with its class-attribute matrix."""
        x, y = view_split(bundle, "train")
        return self.fit(x, y, bundle.attributes)

    def predict(self, x, candidates):
        raise NotImplementedError

    def predict_single(self, x, candidates):
        """Classify one feature row; must agree with predict on that row."""
        raise NotImplementedError

    def _require_fitted(self, *attrs):
        for attr in attrs:
            if getattr(self, attr, None) is None:
                raise NotFittedError(
                    f"{type(self).__name__} is not fitted; call fit first")


def seen_class_order(y):
    """Sorted unique class ids present in the training labels."""
    return np.unique(np.asarray(y, dtype=np.int64))
