"""Two-layer relu network with hand-derived gradients.

Shared by the semantic-to-visual embedding model and the attribute decoder:
f(s) = relu(relu(s W1 + b1) W2 + b2), trained with mean squared error plus
an L2 penalty on the weight matrices (biases unpenalized).
"""

import numpy as np


def init_params(in_dim, hidden, out_dim, rng):
    return {
        "W1": rng.standard_normal((in_dim, hidden)) * np.sqrt(2.0 / in_dim),
        "b1": np.zeros(hidden),
        "W2": rng.standard_normal((hidden, out_dim)) * np.sqrt(2.0 / hidden),
        "b2": np.zeros(out_dim),
    }


def forward(params, s):
    hidden = np.maximum(s @ params["W1"] + params["b1"], 0.0)
    return np.maximum(hidden @ params["W2"] + params["b2"], 0.0)


def forward_with_hidden(params, s):
    hidden = np.maximum(s @ params["W1"] + params["b1"], 0.0)
    return hidden, np.maximum(hidden @ params["W2"] + params["b2"], 0.0)


def loss_and_grads(params, s, x, l2):
    """Mean squared reconstruction loss and its analytic gradients.

    loss = mean_i ||f(s_i) - x_i||^2 + l2 * (||W1||^2 + ||W2||^2)
    """
    n = s.shape[0]
    h1 = s @ params["W1"] + params["b1"]
    a1 = np.maximum(h1, 0.0)
    h2 = a1 @ params["W2"] + params["b2"]
    out = np.maximum(h2, 0.0)

    r = out - x
    loss = (r * r).sum() / n
    loss += l2 * ((params["W1"] ** 2).sum() + (params["W2"] ** 2).sum())

    d_h2 = (2.0 / n) * r * (h2 > 0)
    d_a1 = d_h2 @ params["W2"].T
    d_h1 = d_a1 * (h1 > 0)
    grads = {
        "W1": s.T @ d_h1 + 2.0 * l2 * params["W1"],
        "b1": d_h1.sum(axis=0),
        "W2": a1.T @ d_h2 + 2.0 * l2 * params["W2"],
        "b2": d_h2.sum(axis=0),
    }
    return loss, grads


PARAM_ORDER = ("W1", "b1", "W2", "b2")
