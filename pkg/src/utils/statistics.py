"""Statistical helper functions for ensemble diagnostics.

This module provides the summary statistics shared by the ensemble reports:
Wilson confidence intervals for converged fractions, standard errors for jump
counts, and quantile summaries that stay well defined when some trajectories
diverged to infinity.
"""

from typing import Dict, Sequence, Tuple

import numpy as np
from scipy.stats import norm

QUANTILE_LEVELS = (0.05, 0.25, 0.5, 0.75, 0.95)


def wilson_confidence_interval(
    successes: int, trials: int, confidence: float = 0.95
) -> Tuple[float, float]:
    """Calculate Wilson score confidence interval for binomial proportion.

    More accurate than the normal approximation for small ensembles and for
    fractions close to 0 or 1, which is exactly where converged fractions live.

    Args:
        successes: Number of converged trajectories
        trials: Total number of trajectories
        confidence: Confidence level (default 0.95 = 95%)

    Returns:
        Tuple of (lower_bound, upper_bound) as Python floats

    References:
        https://en.wikipedia.org/wiki/Binomial_proportion_confidence_interval
    """
    if trials == 0:
        return (0.0, 0.0)

    p = successes / trials
    z = norm.ppf(1 - (1 - confidence) / 2)  # 1.96 for 95% confidence

    denominator = 1 + z**2 / trials
    center = (p + z**2 / (2 * trials)) / denominator
    margin = z * ((p * (1 - p) / trials + z**2 / (4 * trials**2)) ** 0.5) / denominator

    return (float(max(0.0, center - margin)), float(min(1.0, center + margin)))


def standard_error(values: Sequence[float]) -> float:
    """Standard error of the mean (sample standard deviation over sqrt(n)).

    Args:
        values: Observations

    Returns:
        Standard error, 0.0 for fewer than two observations
    """
    data = np.asarray(values, dtype=float)
    if data.size < 2:
        return 0.0
    return float(np.std(data, ddof=1) / np.sqrt(data.size))


def quantile_summary(
    values: Sequence[float], levels: Sequence[float] = QUANTILE_LEVELS
) -> Dict[str, float]:
    """Empirical quantiles without interpolation.

    Uses the inverted-CDF definition so every reported quantile is an observed
    value; infinite observations (diverged trajectories) stay infinite instead
    of turning into NaN through interpolation.

    Args:
        values: Observations, possibly containing +inf
        levels: Quantile levels in [0, 1]

    Returns:
        Dictionary such as {"q05": ..., "q50": ...}, monotone in the level
    """
    data = np.asarray(values, dtype=float)
    summary = {}
    for level in levels:
        key = f"q{int(round(level * 100)):02d}"
        summary[key] = float(np.quantile(data, level, method="inverted_cdf"))
    return summary


def clt_z_score(estimate: float, exact: float, stderr: float) -> float:
    """Distance between a Monte Carlo estimate and its exact value in standard errors.

    Args:
        estimate: Monte Carlo mean
        exact: Exact expectation
        stderr: Standard error of the estimate

    Returns:
        |estimate - exact| / stderr (0.0 when both the gap and stderr vanish)
    """
    gap = abs(estimate - exact)
    if stderr == 0.0:
        return 0.0 if gap == 0.0 else float("inf")
    return float(gap / stderr)
