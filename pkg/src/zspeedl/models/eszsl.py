"""Bilinear compatibility scoring with a closed-form ridge solution.

Training solves the regularized least-squares objective

    min_V ||X'VS - Y||_F^2 + gamma ||VS||_F^2 + lam ||X'V||_F^2
          + gamma * lam * ||V||_F^2

whose unique stationary point is V = (XX' + gamma I)^-1 X Y S' (SS' + lam I)^-1,
with X the d x N train features, Y the N x z (+1/-1) class indicator and S
the a x z seen-class attribute matrix. Inference scores a feature row x
against candidate attribute vectors via x' V s_c.
"""

import numpy as np

from ..errors import DataError
from ..numerics import ridge_solve
from ..validation import as_matrix, as_labels, as_row, check_dim
from .base import ZslEstimator, seen_class_order


def sign_indicator(y, classes):
    """N x z matrix with +1 at each instance's class column, -1 elsewhere."""
    pos = np.searchsorted(classes, y)
    out = -np.ones((y.size, classes.size))
    out[np.arange(y.size), pos] = 1.0
    return out


class ESZSL(ZslEstimator):

    method = "eszsl"

    def __init__(self, gamma=1.0, lam=1.0):
        self.gamma = gamma
        self.lam = lam

    def fit(self, x, y, class_attributes):
        x = as_matrix(x, "X")
        y = as_labels(y)
        attrs = as_matrix(class_attributes, "class_attributes")
        classes = seen_class_order(y)
        s = attrs[classes]                        # (z, a)
        indicator = sign_indicator(y, classes)    # (N, z)

        gram = x.T @ x                            # (d, d) = XX'
        target = x.T @ (indicator @ s)            # (d, a) = X Y S'
        left = ridge_solve(gram, self.gamma, target)
        self.V_ = ridge_solve(s.T @ s, self.lam, left.T).T
        self.classes_ = classes
        return self

    def decision_function(self, x, candidates):
        self._require_fitted("V_")
        x = as_matrix(x, "X")
        candidates = as_matrix(candidates, "candidates")
        check_dim(x.shape[1], self.V_.shape[0], "feature dimension")
        check_dim(candidates.shape[1], self.V_.shape[1], "attribute dimension")
        return (x @ self.V_) @ candidates.T

    def predict(self, x, candidates):
        """Candidate positions with the highest bilinear score per row."""
        return self.decision_function(x, candidates).argmax(axis=1)

    def predict_single(self, x, candidates):
        self._require_fitted("V_")
        x = as_row(x, self.V_.shape[0])
        if candidates.shape[0] == 0:
            raise DataError("empty candidate set")
        return int(((x @ self.V_) @ candidates.T).argmax())
