"""Elementwise numerical kernels shared by the simulation modules.

Ensembles are simulated as stacked arrays of shape (n_trajectories, d). Every
kernel here works row by row with a fixed accumulation order, so the result for
one trajectory does not depend on how many other rows share the array. That is
what keeps ensembles bitwise identical across parallelism degrees.
"""

import math
from typing import Iterable

import numpy as np


def apply_matrix(matrix: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Compute ``matrix @ x`` over the last axis of ``x`` in fixed column order.

    Args:
        matrix: Array of shape (m, d)
        x: Array of shape (..., d)

    Returns:
        Array of shape (..., m)
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape[:-1] + (matrix.shape[0],))
    for j in range(matrix.shape[1]):
        out = out + x[..., j, None] * matrix[:, j]
    return out


def row_dot(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Inner product over the last axis, accumulated in coordinate order."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.zeros(np.broadcast_shapes(x.shape, y.shape)[:-1])
    for j in range(x.shape[-1]):
        out = out + x[..., j] * y[..., j]
    return out


def row_norms(x: np.ndarray) -> np.ndarray:
    """Euclidean norm over the last axis, accumulated in coordinate order."""
    return np.sqrt(row_dot(x, x))


def compensated_sum(values: Iterable[float]) -> float:
    """Sum floats in the given order with exact rounding (``math.fsum``).

    Args:
        values: Terms to add, typically ascending in the series index

    Returns:
        Correctly rounded sum of the terms
    """
    return math.fsum(np.asarray(values, dtype=float).ravel().tolist())


def spectral_norm(matrix: np.ndarray) -> float:
    """Largest singular value of a matrix."""
    return float(np.linalg.norm(np.asarray(matrix, dtype=float), ord=2))
