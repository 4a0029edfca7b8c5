"""Sampled structural checks for operators."""

import logging
from typing import Optional

import numpy as np

from src.operators.base import Operator, OperatorError, SubspaceSolutionOperator
from src.operators.zoo import PLGradientOperator
from src.utils.numerics import row_norms

logger = logging.getLogger(__name__)

LIPSCHITZ_SLACK = 1e-9
FIXED_POINT_SLACK = 1e-12


def sampling_center(op: Operator) -> np.ndarray:
    """Point around which operator checks sample: x*, or the solution-set offset."""
    if op.fixed_point is not None:
        return op.fixed_point
    if isinstance(op, SubspaceSolutionOperator):
        return op.solution_offset
    return np.zeros(op.dim)


def sample_ball(center: np.ndarray, radius: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform samples from the Euclidean ball of the given radius.

    Args:
        center: Ball center, shape (d,)
        radius: Ball radius
        n: Number of samples
        rng: Random generator

    Returns:
        Array of shape (n, d)
    """
    d = center.shape[0]
    directions = rng.standard_normal((n, d))
    directions /= row_norms(directions)[:, None]
    radii = radius * rng.random(n) ** (1.0 / d)
    return center + radii[:, None] * directions


def sampled_lipschitz_ratio(
    op: Operator,
    n_pairs: int = 10_000,
    radius: float = 10.0,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """Largest ratio ||H(x) - H(y)|| / ||x - y|| over random pairs near the solution.

    Args:
        op: Operator to measure
        n_pairs: Number of pairs
        radius: Sampling radius around the fixed point (or solution set)
        rng: Random generator (default seeded with 0)

    Returns:
        Maximum sampled ratio
    """
    rng = np.random.default_rng(0) if rng is None else rng
    center = sampling_center(op)
    x = sample_ball(center, radius, n_pairs, rng)
    y = sample_ball(center, radius, n_pairs, rng)
    gaps = row_norms(x - y)
    keep = gaps > 0
    ratios = row_norms(op.evaluate(x) - op.evaluate(y))[keep] / gaps[keep]
    return float(ratios.max()) if ratios.size else 0.0


def satisfies_lipschitz(
    op: Operator,
    n_pairs: int = 10_000,
    radius: float = 10.0,
    rng: Optional[np.random.Generator] = None,
) -> bool:
    """Check the declared Lipschitz constant against sampled pairs."""
    if op.lipschitz is None:
        raise OperatorError(f"{op.family.value} operator declares no Lipschitz constant")
    ratio = sampled_lipschitz_ratio(op, n_pairs, radius, rng)
    ok = ratio <= op.lipschitz * (1 + LIPSCHITZ_SLACK)
    if not ok:
        logger.warning(
            f"Sampled Lipschitz ratio {ratio:.6g} exceeds declared {op.lipschitz:.6g} "
            f"for {op.family.value}"
        )
    return ok


def fixed_point_residual(op: Operator) -> float:
    """||H(x*) - x*|| for an operator with a unique fixed point."""
    x_star = op.require_fixed_point()
    return float(np.linalg.norm(op.evaluate(x_star) - x_star))


def has_valid_fixed_point(op: Operator) -> bool:
    """Fixed-point residual within 1e-12 (1 + ||x*||)."""
    x_star = op.require_fixed_point()
    return fixed_point_residual(op) <= FIXED_POINT_SLACK * (1 + float(np.linalg.norm(x_star)))


def pl_inequality_gaps(op: PLGradientOperator, points: np.ndarray) -> np.ndarray:
    """||grad f(x)||^2 / 2 - mu (f(x) - f*) at each point; non-negative under PL.

    Args:
        op: PL-gradient operator
        points: Array of shape (n, d)

    Returns:
        Gap per point
    """
    grad = op.gradient(points)
    return 0.5 * np.sum(grad * grad, axis=-1) - op.mu * op.objective(points)
