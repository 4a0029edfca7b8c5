"""Elementary power inequalities behind the moment-order drift arguments.

Both checks return signed gaps (bound minus quantity) together with the sum of
the absolute values of the terms involved, so that callers can compare the
gap with a tolerance relative to the magnitude of the computation.
"""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from src.utils.numerics import row_dot

RELATIVE_TOLERANCE = 1e-12

ArrayOrFloat = Union[float, np.ndarray]


class ZeroBaseError(ValueError):
    """Raised when the norm-power inequality is evaluated at v = 0."""

    pass


@dataclass(frozen=True)
class PowerBoundGaps:
    """Gaps of the two-sided scalar power bound.

    Attributes:
        lower_gap: center - lower bound
        upper_gap: upper bound - center
        center: |x + d|^p - |x|^p - p |x|^(p-1) sgn(x) d
        scale: Sum of the absolute values of all terms
    """

    lower_gap: ArrayOrFloat
    upper_gap: ArrayOrFloat
    center: ArrayOrFloat
    scale: ArrayOrFloat


def norm_power_terms(
    v: np.ndarray, u: np.ndarray, p: ArrayOrFloat
) -> Tuple[np.ndarray, np.ndarray]:
    """Gap and scale of ||v + u||^p <= ||v||^p + p <v, u> / ||v||^(2-p) + 2^(2-p) ||u||^p.

    Args:
        v: Base vectors, shape (..., d), nonzero
        u: Increments, shape (..., d)
        p: Exponent(s) in (1, 2]

    Returns:
        (rhs - lhs, sum of absolute terms), each of shape (...)

    Raises:
        ValueError: If some p is outside (1, 2]
        ZeroBaseError: If some v is zero
    """
    v = np.asarray(v, dtype=float)
    u = np.asarray(u, dtype=float)
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr <= 1) or np.any(p_arr > 2):
        raise ValueError("p must be in (1, 2]")
    v_norm = np.sqrt(row_dot(v, v))
    if np.any(v_norm == 0):
        raise ZeroBaseError("v must be nonzero")
    u_norm = np.sqrt(row_dot(u, u))
    w = v + u
    lhs = np.sqrt(row_dot(w, w)) ** p_arr
    first = v_norm**p_arr
    middle = p_arr * row_dot(v, u) * v_norm ** (p_arr - 2.0)
    last = 2.0 ** (2.0 - p_arr) * u_norm**p_arr
    rhs = first + middle + last
    scale = lhs + first + np.abs(middle) + last
    return rhs - lhs, scale


def norm_power_gap(v: np.ndarray, u: np.ndarray, p: float) -> float:
    """RHS - LHS of the sub-quadratic norm-power inequality for one pair.

    Nonnegative up to 1e-12 times the magnitude of the terms.

    Raises:
        ValueError: If p is outside (1, 2]
        ZeroBaseError: If v = 0
    """
    gap, _ = norm_power_terms(v, u, p)
    return float(gap)


def scalar_power_terms(x: ArrayOrFloat, delta: ArrayOrFloat, p: ArrayOrFloat) -> PowerBoundGaps:
    """Gaps of the two-sided bound on |x + d|^p - |x|^p - p |x|^(p-1) sgn(x) d for p >= 2.

    lower = (p / 8) |x|^(p-2) d^2 + |d|^p / 2^(p+1)
    upper = 2 p^2 |x|^(p-2) d^2 + p^p |d|^p

    |x|^(p-2) is taken as 0 at x = 0 (also for p = 2).

    Raises:
        ValueError: If some p < 2
    """
    x_arr = np.asarray(x, dtype=float)
    d = np.asarray(delta, dtype=float)
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr < 2):
        raise ValueError("p must be >= 2")
    ax = np.abs(x_arr)
    ad = np.abs(d)
    curvature = np.where(ax > 0, np.where(ax > 0, ax, 1.0) ** (p_arr - 2.0), 0.0)
    linear = p_arr * ax ** (p_arr - 1.0) * np.sign(x_arr) * d
    shifted = np.abs(x_arr + d) ** p_arr
    base = ax**p_arr
    center = shifted - base - linear
    lower = (p_arr / 8.0) * curvature * d**2 + ad**p_arr / 2.0 ** (p_arr + 1.0)
    upper = 2.0 * p_arr**2 * curvature * d**2 + p_arr**p_arr * ad**p_arr
    scale = shifted + base + np.abs(linear) + lower + upper
    return PowerBoundGaps(
        lower_gap=center - lower, upper_gap=upper - center, center=center, scale=scale
    )


def scalar_power_bounds(x: float, delta: float, p: float) -> PowerBoundGaps:
    """Scalar version of scalar_power_terms returning plain floats."""
    gaps = scalar_power_terms(x, delta, p)
    return PowerBoundGaps(
        lower_gap=float(gaps.lower_gap),
        upper_gap=float(gaps.upper_gap),
        center=float(gaps.center),
        scale=float(gaps.scale),
    )
