"""Deep embedding of semantic vectors into the visual feature space.

A two-layer relu network f maps a class attribute vector to a visual
feature prototype; training minimizes the mean squared distance between
f(s_y) and the instance features with L2 weight decay, using mini-batch
Adam with hand-derived gradients. Classification picks the candidate whose
embedded prototype is nearest (euclidean) to the query feature. The relu
output matches the nonnegative range of pooled CNN features.
"""

import numpy as np
from scipy.spatial.distance import cdist

from ..errors import NumericalError
from ..optim import Adam, minibatches
from ..validation import as_matrix, as_labels, as_row, check_dim
from . import _mlp
from .base import ZslEstimator


class DEM(ZslEstimator):

    method = "dem"

    def __init__(self, hidden=1600, lr=1e-4, l2=1e-3, epochs=100, batch=64, seed=42):
        self.hidden = hidden
        self.lr = lr
        self.l2 = l2
        self.epochs = epochs
        self.batch = batch
        self.seed = seed

    def fit(self, x, y, class_attributes):
        x = as_matrix(x, "X")
        y = as_labels(y)
        attrs = as_matrix(class_attributes, "class_attributes")
        s_inst = attrs[y]

        rng = np.random.default_rng(self.seed)
        params = _mlp.init_params(attrs.shape[1], self.hidden, x.shape[1], rng)
        opt = Adam([params[k] for k in _mlp.PARAM_ORDER], lr=self.lr)

        history = []
        first_loss = None
        for _ in range(self.epochs):
            epoch_losses = []
            for idx in minibatches(x.shape[0], self.batch, rng):
                loss, grads = _mlp.loss_and_grads(params, s_inst[idx], x[idx], self.l2)
                if first_loss is None:
                    first_loss = loss
                if not np.isfinite(loss) or loss > 1e12 * (1.0 + first_loss):
                    raise NumericalError(
                        f"non-finite loss or divergence during embedding training "
                        f"(lr={self.lr} too high?)")
                opt.step([grads[k] for k in _mlp.PARAM_ORDER])
                epoch_losses.append(loss)
            history.append(float(np.mean(epoch_losses)))

        self.params_ = params
        self.loss_history_ = history
        return self

    @property
    def W1_(self):
        return self.params_["W1"]

    @property
    def W2_(self):
        return self.params_["W2"]

    def transform(self, semantics):
        """Embed attribute vectors into the visual feature space."""
        self._require_fitted("params_")
        return _mlp.forward(self.params_, as_matrix(semantics, "semantics", allow_empty=True))

    def predict(self, x, candidates):
        self._require_fitted("params_")
        x = as_matrix(x, "X")
        candidates = as_matrix(candidates, "candidates")
        check_dim(x.shape[1], self.params_["W2"].shape[1], "feature dimension")
        embedded = _mlp.forward(self.params_, candidates)
        return cdist(x, embedded, metric="euclidean").argmin(axis=1)

    def predict_single(self, x, candidates):
        # candidate embedding is part of the method's inference cost
        self._require_fitted("params_")
        x = as_row(x, self.params_["W2"].shape[1])
        embedded = _mlp.forward(self.params_, candidates)
        diff = embedded - x
        return int(np.einsum("ij,ij->i", diff, diff).argmin())
