"""Dense linear-algebra kernels shared by the ZSL methods.

All inputs are treated as float64 regardless of storage precision; every
reduction runs in 64-bit. Symmetric solves go through Cholesky, the
Sylvester solver through a pair of symmetric eigendecompositions.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.spatial.distance import cdist

from .errors import DataError, NumericalError

logger = logging.getLogger(__name__)

_SYM_TOL = 1e-8


def _check_symmetric(a, name):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DataError(f"{name} must be square, got shape {a.shape}")
    scale = 1.0 + (np.abs(a).max() if a.size else 0.0)
    if a.size and np.abs(a - a.T).max() > _SYM_TOL * scale:
        raise DataError(f"{name} is not symmetric within {_SYM_TOL}")
    return a


def ridge_solve(a, gamma, b):
    """Solve (A + gamma*I) X = B for symmetric PSD A via Cholesky.

    Raises NumericalError when A + gamma*I is not positive definite,
    suggesting a larger gamma.
    """
    a = _check_symmetric(a, "A")
    b = np.asarray(b, dtype=np.float64)
    if gamma < 0:
        raise DataError(f"gamma must be nonnegative, got {gamma}")
    if b.shape[0] != a.shape[0]:
        raise DataError(f"B has {b.shape[0]} rows, A is {a.shape[0]} x {a.shape[0]}")
    system = a + gamma * np.eye(a.shape[0])
    try:
        factor = scipy.linalg.cho_factor(system, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(
            f"A + gamma*I is not positive definite (gamma={gamma}); "
            "increase gamma to regularize the system") from exc
    return scipy.linalg.cho_solve(factor, b, check_finite=False)


@dataclass(frozen=True)
class EigDecomp:
    """Eigendecomposition of a symmetric matrix: ascending values, orthonormal columns."""

    values: np.ndarray
    vectors: np.ndarray


def sym_eig(m):
    """Symmetric eigendecomposition with eigenvalues in ascending order."""
    m = _check_symmetric(m, "M")
    try:
        values, vectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed to converge: {exc}") from exc
    return EigDecomp(values=values, vectors=vectors)


def solve_sylvester(a, b, c):
    """Solve A W + W B = C for symmetric PSD A (k x k) and B (d x d).

    Diagonalizes both sides: with A = Ua diag(alpha) Ua', B = Ub diag(beta) Ub'
    the solution is W = Ua (Ctilde / (alpha_i + beta_j)) Ub' with
    Ctilde = Ua' C Ub. Near-zero denominators are stabilized by a relative
    epsilon; if that cannot reach a consistent solution a NumericalError is
    raised advising a larger regularization weight.
    """
    c = np.asarray(c, dtype=np.float64)
    ea, eb = sym_eig(a), sym_eig(b)
    if c.shape != (ea.values.size, eb.values.size):
        raise DataError(
            f"C must be {ea.values.size} x {eb.values.size}, got {c.shape}")

    denom = ea.values[:, None] + eb.values[None, :]
    scale = max(ea.values.max(initial=0.0), 0.0) + max(eb.values.max(initial=0.0), 0.0)
    eps = 1e-8 * scale
    near_zero = denom < 1e-6 * max(scale, 1e-300)
    if near_zero.any():
        if eps <= 1e-10:
            raise NumericalError(
                "Sylvester system is singular (eigenvalue sums near zero); "
                "increase the regularization weight lambda")
        # stabilize only the degenerate denominators; well-posed entries stay exact
        denom = np.where(near_zero, denom + eps, denom)

    ua, ub = ea.vectors, eb.vectors

    def solve_in_basis(rhs):
        return ua @ ((ua.T @ rhs @ ub) / denom) @ ub.T

    w = solve_in_basis(c)
    c_norm = np.linalg.norm(c)
    if c_norm > 0:
        # a couple of refinement passes absorb eigendecomposition roundoff
        # on badly scaled systems; they reuse the factorization
        for _ in range(2):
            residual_matrix = c - (a @ w + w @ b)
            if np.linalg.norm(residual_matrix) / c_norm <= 0.5e-8:
                break
            w = w + solve_in_basis(residual_matrix)
        residual = np.linalg.norm(a @ w + w @ b - c) / c_norm
        if residual > 1e-8:
            raise NumericalError(
                f"Sylvester solve residual {residual:.3e} exceeds 1e-8; the system "
                "is near-singular, increase the regularization weight lambda")
    return w


def softmax(logits):
    """Numerically stable softmax; empty input yields empty output."""
    z = np.asarray(logits, dtype=np.float64)
    if z.size == 0:
        return np.zeros_like(z)
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def pairwise_distance(x, y, metric="euclidean"):
    """Pairwise distances between rows of x (n x d) and y (m x d).

    Cosine distance is 1 - cosine similarity; a zero-norm row is treated as
    orthogonal to everything (distance 1) and logged as a warning.
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    y = np.atleast_2d(np.asarray(y, dtype=np.float64))
    if x.shape[1] != y.shape[1]:
        raise DataError(f"dimension mismatch: {x.shape[1]} vs {y.shape[1]}")
    if metric == "euclidean":
        return cdist(x, y, metric="euclidean")
    if metric == "cosine":
        xn = np.linalg.norm(x, axis=1)
        yn = np.linalg.norm(y, axis=1)
        zero_rows = int((xn == 0).sum() + (yn == 0).sum())
        if zero_rows:
            logger.warning("cosine distance: %d zero-norm rows treated as orthogonal", zero_rows)
        sim = (x / np.where(xn, xn, 1.0)[:, None]) @ (y / np.where(yn, yn, 1.0)[:, None]).T
        return 1.0 - sim
    raise DataError(f"unknown metric {metric!r}")
