"""Direct attribute prediction.

Continuous class-level attributes are binarized at the per-attribute mean
over seen classes; each binary attribute gets an independent logistic
regression from features (trained jointly as one weight matrix since the
losses separate). Classification scores a candidate's binary attribute
signature by the product of posterior/prior ratios, computed in log space.
Attributes whose binary value is constant across the seen classes carry no
signal and are excluded from scoring.
"""

import numpy as np

from ..errors import DataError, NumericalError
from ..optim import Adam
from ..validation import as_matrix, as_labels, as_row, check_dim
from .base import ZslEstimator, seen_class_order

PROB_CLAMP = 1e-5


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class DAP(ZslEstimator):

    method = "dap"

    def __init__(self, l2=1e-4, epochs=200, lr=0.1, seed=42):
        self.l2 = l2
        self.epochs = epochs
        self.lr = lr
        self.seed = seed

    def fit(self, x, y, class_attributes):
        x = as_matrix(x, "X")
        y = as_labels(y)
        attrs = as_matrix(class_attributes, "class_attributes")
        classes = seen_class_order(y)
        seen_attrs = attrs[classes]                       # (z, a)

        thresholds = seen_attrs.mean(axis=0)
        class_bits = (seen_attrs > thresholds).astype(np.float64)
        constant = (class_bits.min(axis=0) == class_bits.max(axis=0))
        priors = np.clip(class_bits.mean(axis=0), PROB_CLAMP, 1.0 - PROB_CLAMP)

        targets = class_bits[np.searchsorted(classes, y)]  # (N, a)
        xb = np.hstack([x, np.ones((x.shape[0], 1))])      # bias column
        n, a = x.shape[0], attrs.shape[1]

        rng = np.random.default_rng(self.seed)
        weights = 0.01 * rng.standard_normal((x.shape[1] + 1, a))
        opt = Adam([weights], lr=self.lr)
        for _ in range(self.epochs):
            p = _sigmoid(xb @ weights)
            # summed BCE gradient per attribute; bias row not penalized
            grad = xb.T @ (p - targets) / n
            grad[:-1] += 2.0 * self.l2 * weights[:-1]
            if not np.isfinite(grad).all():
                raise NumericalError("non-finite loss in attribute classifier; lower lr")
            opt.step([grad])

        self.classes_ = classes
        self.thresholds_ = thresholds
        self.priors_ = priors
        self.excluded_ = np.flatnonzero(constant)
        self.coef_ = weights[:-1].T                        # (a, d)
        self.intercept_ = weights[-1]
        return self

    def binarize(self, candidates):
        """Threshold continuous candidate attributes with the fitted thresholds."""
        self._require_fitted("thresholds_")
        candidates = as_matrix(candidates, "candidates", allow_empty=True)
        check_dim(candidates.shape[1], self.thresholds_.size, "attribute dimension")
        return (candidates > self.thresholds_).astype(np.float64)

    def attribute_posteriors(self, x):
        """p(attribute = 1 | x), clamped away from 0 and 1."""
        self._require_fitted("coef_")
        x = as_matrix(x, "X")
        p = _sigmoid(x @ self.coef_.T + self.intercept_)
        return np.clip(p, PROB_CLAMP, 1.0 - PROB_CLAMP)

    def log_scores(self, x, candidates_binary):
        """Log posterior/prior ratio score of each candidate signature."""
        b = as_matrix(candidates_binary, "candidates_binary")
        if not np.isin(b, (0.0, 1.0)).all():
            raise DataError("candidate attributes must be binarized with the model thresholds")
        check_dim(b.shape[1], self.priors_.size, "attribute dimension")
        keep = np.setdiff1d(np.arange(b.shape[1]), self.excluded_)
        p = self.attribute_posteriors(x)[:, keep]
        bk = b[:, keep]
        log_ratio_1 = np.log(p) - np.log(self.priors_[keep])
        log_ratio_0 = np.log1p(-p) - np.log1p(-self.priors_[keep])
        return log_ratio_1 @ bk.T + log_ratio_0 @ (1.0 - bk).T

    def predict(self, x, candidates_binary):
        return self.log_scores(x, candidates_binary).argmax(axis=1)

    def predict_single(self, x, candidates_binary):
        self._require_fitted("coef_")
        x = as_row(x, self.coef_.shape[1])
        return int(self.log_scores(x[None, :], candidates_binary)[0].argmax())
