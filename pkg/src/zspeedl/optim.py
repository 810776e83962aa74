"""Minimal adaptive-moment (Adam) optimizer over lists of numpy arrays."""

import numpy as np


class Adam:
    """Standard Adam with bias correction; updates parameters in place."""

    def __init__(self, params, lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.params = params
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, grads):
        self.t += 1
        correct1 = 1.0 - self.beta1 ** self.t
        correct2 = 1.0 - self.beta2 ** self.t
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= self.lr * (m / correct1) / (np.sqrt(v / correct2) + self.eps)


def minibatches(n, batch, rng):
    """Yield shuffled index batches covering range(n) once."""
    order = rng.permutation(n)
    batch = max(1, min(batch, n))
    for start in range(0, n, batch):
        yield order[start:start + batch]
