"""Linear semantic autoencoder.

Training reduces to the Sylvester system A W + W B = C with A = S S'
(a x a instance-semantics Gram), B = lam * X X' (d x d feature Gram) and
C = (1 + lam) S X'. The learned W maps features to the semantic space; its
transpose maps attribute vectors back to feature space. Either direction
classifies by nearest candidate.
"""

import numpy as np

from ..errors import DataError
from ..numerics import pairwise_distance, solve_sylvester
from ..validation import as_matrix, as_labels, as_row, check_dim
from .base import ZslEstimator

DIRECTIONS = ("feature_to_semantic", "semantic_to_feature")
METRICS = ("euclidean", "cosine")


class SAE(ZslEstimator):

    method = "sae"

    def __init__(self, lam=0.2, direction="feature_to_semantic", metric="cosine"):
        self.lam = lam
        self.direction = direction
        self.metric = metric

    def fit(self, x, y, class_attributes):
        x = as_matrix(x, "X")
        y = as_labels(y)
        attrs = as_matrix(class_attributes, "class_attributes")
        s_inst = attrs[y]                              # (N, a)

        a = s_inst.T @ s_inst                          # S S'
        b = self.lam * (x.T @ x)                       # lam X X'
        c = (1.0 + self.lam) * (s_inst.T @ x)          # (1+lam) S X'
        w = solve_sylvester(a, b, c)                   # (a, d)

        c_norm = np.linalg.norm(c)
        self.residual_ = float(np.linalg.norm(a @ w + w @ b - c) / c_norm) if c_norm else 0.0
        self.W_ = w
        return self

    def _resolve(self, direction, metric):
        direction = direction or self.direction
        metric = metric or self.metric
        if direction not in DIRECTIONS:
            raise DataError(f"unknown direction {direction!r}")
        if metric not in METRICS:
            raise DataError(f"unknown metric {metric!r}")
        return direction, metric

    def transform(self, x):
        """Project features into the semantic space."""
        self._require_fitted("W_")
        return as_matrix(x, "X") @ self.W_.T

    def predict(self, x, candidates, direction=None, metric=None):
        """Nearest-candidate positions in the chosen projection direction."""
        self._require_fitted("W_")
        direction, metric = self._resolve(direction, metric)
        x = as_matrix(x, "X")
        candidates = as_matrix(candidates, "candidates")
        check_dim(x.shape[1], self.W_.shape[1], "feature dimension")
        check_dim(candidates.shape[1], self.W_.shape[0], "attribute dimension")
        if direction == "feature_to_semantic":
            dist = pairwise_distance(x @ self.W_.T, candidates, metric)
        else:
            dist = pairwise_distance(x, candidates @ self.W_, metric)
        return dist.argmin(axis=1)

    def predict_single(self, x, candidates, direction=None, metric=None):
        self._require_fitted("W_")
        direction, metric = self._resolve(direction, metric)
        x = as_row(x, self.W_.shape[1])
        if direction == "feature_to_semantic":
            dist = pairwise_distance((x @ self.W_.T)[None, :], candidates, metric)
        else:
            dist = pairwise_distance(x[None, :], candidates @ self.W_, metric)
        return int(dist[0].argmin())
