"""Input validation helpers used across estimators."""

import numpy as np

from .errors import DataError


def as_matrix(x, name="X", allow_empty=False):
    """Coerce to a finite float64 2-D array or raise DataError."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(1, -1)
    if x.ndim != 2:
        raise DataError(f"{name} must be 2-D, got shape {x.shape}")
    if not allow_empty and x.shape[0] == 0:
        raise DataError(f"{name} has no rows")
    if x.size and not np.isfinite(x).all():
        raise DataError(f"{name} contains non-finite values")
    return x


def as_labels(y, name="y"):
    y = np.asarray(y, dtype=np.int64).reshape(-1)
    if y.size == 0:
        raise DataError(f"{name} is empty")
    return y


def as_row(x, dim, name="x"):
    """Coerce a single feature row, checking its dimension."""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.shape[0] != dim:
        raise DataError(f"{name} has dimension {x.shape[0]}, expected {dim}")
    return x


def check_dim(actual, expected, what):
    if actual != expected:
        raise DataError(f"{what}: got {actual}, expected {expected}")
