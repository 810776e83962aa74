"""Inference-side pieces of the generative ZSL family.

The conditional feature generator is a documented stand-in: a ridge map
from class attributes to seen-class mean features plus a shared diagonal
Gaussian residual, sampled per unseen class. The downstream classifiers
are the real inference paths: a linear softmax over features, and the
decoder-augmented variant that feeds the classifier the feature vector
concatenated with the decoder's hidden layer and reconstructed attributes.
"""

import numpy as np
from sklearn.base import BaseEstimator

from ..data import view_split
from ..errors import DataError, NumericalError
from ..numerics import ridge_solve, softmax
from ..optim import Adam, minibatches
from ..validation import as_matrix, as_labels, as_row, check_dim
from . import _mlp
from .base import ZslEstimator, seen_class_order


class GaussianFeatureGenerator(BaseEstimator):
    """Attribute-conditioned Gaussian feature sampler fitted on seen classes."""

    def __init__(self, ridge=1.0, seed=42):
        self.ridge = ridge
        self.seed = seed

    def fit(self, x, y, class_attributes):
        x = as_matrix(x, "X")
        y = as_labels(y)
        attrs = as_matrix(class_attributes, "class_attributes")
        classes = seen_class_order(y)

        means = np.stack([x[y == c].mean(axis=0) for c in classes])
        s = attrs[classes]
        # ridge regression from attribute vectors to class-mean features
        self.coef_ = ridge_solve(s.T @ s, self.ridge, s.T @ means)   # (a, d)
        residuals = x - attrs[y] @ self.coef_
        self.sigma_ = residuals.std(axis=0)
        self.classes_ = classes
        return self

    def conditional_mean(self, attribute_rows):
        return as_matrix(attribute_rows, "attributes", allow_empty=True) @ self.coef_

    def generate(self, class_attributes, class_ids, n_per_class, seed=None):
        """Sample n_per_class feature rows for each requested class id."""
        if n_per_class < 0:
            raise DataError("n_per_class must be nonnegative")
        attrs = as_matrix(class_attributes, "class_attributes")
        class_ids = np.asarray(class_ids, dtype=np.int64)
        rng = np.random.default_rng(self.seed if seed is None else seed)
        d = self.coef_.shape[1]
        if n_per_class == 0 or class_ids.size == 0:
            return np.zeros((0, d)), np.zeros(0, dtype=np.int64)
        mu = attrs[class_ids] @ self.coef_
        feats = np.repeat(mu, n_per_class, axis=0)
        feats = feats + self.sigma_ * rng.standard_normal(feats.shape)
        labels = np.repeat(class_ids, n_per_class)
        return feats, labels


def generate_unseen(bundle, ridge=1.0, n_per_class=300, seed=42):
    """Fit the generator on a bundle's train split and sample its unseen classes."""
    x, y = view_split(bundle, "train")
    if bundle.split.unseen_classes.size == 0:
        raise DataError("bundle has no unseen classes")
    gen = GaussianFeatureGenerator(ridge=ridge, seed=seed).fit(x, y, bundle.attributes)
    return gen.generate(bundle.attributes, bundle.split.unseen_classes, n_per_class)


class SoftmaxClassifier(ZslEstimator):
    """Multinomial logistic regression trained by mini-batch Adam.

    Weights start at zero, so epochs=0 yields uniform class probabilities.
    Predictions are class ids from the fitted class list; the candidate set
    is baked into the classifier at fit time.
    """

    method = "gen-softmax"

    def __init__(self, lr=1e-3, l2=1e-4, epochs=50, batch=100, seed=42):
        self.lr = lr
        self.l2 = l2
        self.epochs = epochs
        self.batch = batch
        self.seed = seed

    def fit_bundle(self, bundle):
        raise NotImplementedError(
            "the softmax classifier trains on generated+real features; use the "
            "CLI train pipeline or fit(X, y, class_ids) directly")

    def fit(self, x, y, class_ids=None):
        x = as_matrix(x, "X")
        y = as_labels(y)
        classes = seen_class_order(y) if class_ids is None else \
            np.unique(np.asarray(class_ids, dtype=np.int64))
        if not np.isin(y, classes).all():
            raise DataError("labels outside the declared class list")
        targets = np.searchsorted(classes, y)

        n, p = x.shape
        c = classes.size
        w = np.zeros((c, p))
        b = np.zeros(c)
        rng = np.random.default_rng(self.seed)
        opt = Adam([w, b], lr=self.lr)
        onehot = np.zeros((n, c))
        onehot[np.arange(n), targets] = 1.0

        for _ in range(self.epochs):
            for idx in minibatches(n, self.batch, rng):
                probs = softmax(x[idx] @ w.T + b)
                if not np.isfinite(probs).all():
                    raise NumericalError("non-finite loss in softmax training; lower lr")
                d_logits = (probs - onehot[idx]) / idx.size
                opt.step([d_logits.T @ x[idx] + 2.0 * self.l2 * w, d_logits.sum(axis=0)])

        self.W_ = w
        self.b_ = b
        self.classes_ = classes
        return self

    def decision_function(self, x):
        self._require_fitted("W_")
        x = as_matrix(x, "X")
        check_dim(x.shape[1], self.W_.shape[1], "input dimension")
        return x @ self.W_.T + self.b_

    def predict_proba(self, x):
        return softmax(self.decision_function(x))

    def predict(self, x, candidates=None):
        """Class ids; the candidate argument is unused (classes are baked in)."""
        return self.classes_[self.decision_function(x).argmax(axis=1)]

    def predict_single(self, x, candidates=None):
        self._require_fitted("W_")
        x = as_row(x, self.W_.shape[1])
        return int(self.classes_[(x @ self.W_.T + self.b_).argmax()])


class AttributeDecoder(BaseEstimator):
    """Two-layer relu decoder reconstructing attribute vectors from features."""

    def __init__(self, hidden=256, lr=1e-3, l2=1e-4, epochs=50, batch=100, seed=42):
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
        targets = attrs[y]

        rng = np.random.default_rng(self.seed)
        params = _mlp.init_params(x.shape[1], self.hidden, attrs.shape[1], rng)
        opt = Adam([params[k] for k in _mlp.PARAM_ORDER], lr=self.lr)
        first_loss = None
        for _ in range(self.epochs):
            for idx in minibatches(x.shape[0], self.batch, rng):
                loss, grads = _mlp.loss_and_grads(params, x[idx], targets[idx], self.l2)
                if first_loss is None:
                    first_loss = loss
                if not np.isfinite(loss) or loss > 1e12 * (1.0 + first_loss):
                    raise NumericalError("non-finite loss or divergence in decoder "
                                         "training; lower lr")
                opt.step([grads[k] for k in _mlp.PARAM_ORDER])
        self.params_ = params
        return self

    def augment(self, x):
        """Concatenate [x, hidden(x), reconstructed_attributes(x)] per row."""
        if getattr(self, "params_", None) is None:
            raise DataError("decoder is not fitted")
        x = as_matrix(x, "X")
        check_dim(x.shape[1], self.params_["W1"].shape[0], "feature dimension")
        hidden, out = _mlp.forward_with_hidden(self.params_, x)
        return np.hstack([x, hidden, out])


class DecoderAugmentedClassifier(ZslEstimator):
    """Softmax classifier over decoder-augmented features."""

    method = "gen-decoder"

    def __init__(self, classifier=None, decoder=None):
        self.classifier = classifier
        self.decoder = decoder

    def fit(self, x, y, class_ids=None):
        raise NotImplementedError(
            "compose a fitted SoftmaxClassifier and AttributeDecoder instead")

    @property
    def classes_(self):
        return self.classifier.classes_

    def predict(self, x, candidates=None):
        augmented = self.decoder.augment(x)
        expected = self.classifier.W_.shape[1]
        check_dim(augmented.shape[1], expected, "augmented input dimension")
        return self.classifier.predict(augmented)

    def predict_single(self, x, candidates=None):
        params = self.decoder.params_
        x = as_row(x, params["W1"].shape[0])
        hidden = np.maximum(x @ params["W1"] + params["b1"], 0.0)
        out = np.maximum(hidden @ params["W2"] + params["b2"], 0.0)
        z = np.concatenate([x, hidden, out])
        clf = self.classifier
        return int(clf.classes_[(z @ clf.W_.T + clf.b_).argmax()])
