"""Independent reference implementations used as test oracles.

These are deliberately simple and stay decoupled from the library code
paths they verify.
"""

import math

import numpy as np


def eszsl_objective(v, x, s, indicator, gamma, lam):
    """Regularized compatibility objective (sum form, row-major operands).

    x: (N, d) features, s: (z, a) class attributes, indicator: (N, z) +-1.
    """
    xv = x @ v
    scores = xv @ s.T
    return (np.linalg.norm(scores - indicator) ** 2
            + gamma * np.linalg.norm(v @ s.T) ** 2
            + lam * np.linalg.norm(xv) ** 2
            + gamma * lam * np.linalg.norm(v) ** 2)


def eszsl_gradient(v, x, s, indicator, gamma, lam):
    """Analytic gradient of eszsl_objective (for the descent oracle only)."""
    gram_x = x.T @ x
    gram_s = s.T @ s
    target = x.T @ indicator @ s
    return 2.0 * ((gram_x @ v @ gram_s) + gamma * (v @ gram_s)
                  + lam * (gram_x @ v) + gamma * lam * v - target)


def gradient_descent_eszsl(x, s, indicator, gamma, lam, steps=10_000):
    """Plain gradient descent on the compatibility objective from V = 0.

    The step size is 1/L with L the product of the largest eigenvalues of
    the two regularized Gram factors, which guarantees monotone descent on
    this convex quadratic.
    """
    lip = (2.0 * (np.linalg.eigvalsh(x.T @ x).max() + gamma)
           * (np.linalg.eigvalsh(s.T @ s).max() + lam))
    step = 1.0 / lip
    v = np.zeros((x.shape[1], s.shape[1]))
    for _ in range(steps):
        v = v - step * eszsl_gradient(v, x, s, indicator, gamma, lam)
    return v


def finite_diff_grad(fn, v, h=1e-5):
    """Central finite-difference gradient of a scalar function of a matrix."""
    grad = np.zeros_like(v)
    it = np.nditer(v, flags=["multi_index"])
    while not it.finished:
        ij = it.multi_index
        orig = v[ij]
        v[ij] = orig + h
        up = fn(v)
        v[ij] = orig - h
        down = fn(v)
        v[ij] = orig
        grad[ij] = (up - down) / (2.0 * h)
        it.iternext()
    return grad


def finite_diff_param_grads(loss_fn, params, h=1e-6):
    """Central finite differences for a dict of parameter arrays."""
    grads = {}
    for name, arr in params.items():
        g = np.zeros_like(arr)
        flat = arr.reshape(-1)
        gflat = g.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            up = loss_fn()
            flat[i] = orig - h
            down = loss_fn()
            flat[i] = orig
            gflat[i] = (up - down) / (2.0 * h)
        grads[name] = g
    return grads


def dap_product_oracle(posteriors, priors, candidate_bits, included):
    """Brute-force log score: sum of per-attribute posterior/prior log ratios."""
    n = posteriors.shape[0]
    c = candidate_bits.shape[0]
    scores = np.zeros((n, c))
    for i in range(n):
        for j in range(c):
            total = 0.0
            for m in included:
                if candidate_bits[j, m] == 1:
                    total += math.log(posteriors[i, m]) - math.log(priors[m])
                else:
                    total += math.log(1.0 - posteriors[i, m]) - math.log(1.0 - priors[m])
            scores[i, j] = total
    return scores


def nearest_candidate_oracle(rows, candidates, metric):
    """Scalar-loop nearest-neighbour argmin with lowest-index ties."""
    out = []
    for r in rows:
        best, best_d = 0, None
        for j, c in enumerate(candidates):
            if metric == "euclidean":
                d = math.sqrt(math.fsum((r[k] - c[k]) ** 2 for k in range(len(r))))
            else:
                dot = math.fsum(r[k] * c[k] for k in range(len(r)))
                nr = math.sqrt(math.fsum(v * v for v in r))
                nc = math.sqrt(math.fsum(v * v for v in c))
                d = 1.0 - (dot / (nr * nc) if nr > 0 and nc > 0 else 0.0)
            if best_d is None or d < best_d - 1e-15:
                best, best_d = j, d
        out.append(best)
    return np.asarray(out)
