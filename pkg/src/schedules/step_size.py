"""Step-size schedules and their summability classification.

A schedule is the polynomial rule alpha_k = alpha * (k + K) ** (-xi), or a
constant step used for contrast runs. Summability of the schedule (and of its
p-th power) is decided from the exponents with the p-series test, never by
truncated summation: a truncated sum cannot tell slow divergence from
convergence.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Union

import numpy as np

from src.utils.numerics import compensated_sum


# Slack on exponent comparisons, so that decimal inputs such as xi = 0.625 with
# p = 1.6 land on the boundary xi * p = 1 instead of one ulp above it.
EXPONENT_TOLERANCE = 1e-12

ArrayLike = Union[int, float, np.ndarray]


class ScheduleError(ValueError):
    """Raised for invalid schedule parameters."""

    pass


class ScheduleKind(str, Enum):
    """Schedule families."""

    POLYNOMIAL = "polynomial"
    CONSTANT = "constant"


@dataclass(frozen=True)
class StepSchedule:
    """Step-size rule alpha_k = alpha * (k + K) ** (-xi).

    Constant schedules carry xi = 0 and always return alpha.

    Attributes:
        alpha: Scale, strictly positive
        K: Index offset, at least 1
        xi: Decay exponent in (0, 1] for polynomial schedules
        kind: Polynomial or constant
    """

    alpha: float = 1.0
    K: float = 1.0
    xi: float = 1.0
    kind: ScheduleKind = ScheduleKind.POLYNOMIAL

    def __post_init__(self) -> None:
        """Validate parameters; constant schedules are normalised to xi = 0."""
        if not self.alpha > 0:
            raise ScheduleError(f"alpha must be > 0, got {self.alpha}")
        if not self.K >= 1:
            raise ScheduleError(f"K must be >= 1, got {self.K}")
        if self.kind == ScheduleKind.CONSTANT:
            object.__setattr__(self, "xi", 0.0)
        elif not 0 < self.xi <= 1:
            raise ScheduleError(f"xi must be in (0, 1] for polynomial schedules, got {self.xi}")

    def value(self, k: ArrayLike) -> ArrayLike:
        """Step size at iteration k (scalar or array of indices).

        Args:
            k: Iteration index, k >= 0

        Returns:
            alpha * (k + K) ** (-xi)
        """
        if self.kind == ScheduleKind.CONSTANT:
            if np.ndim(k) == 0:
                return float(self.alpha)
            return np.full(np.shape(k), float(self.alpha))
        if np.ndim(k) == 0:
            return float(self.alpha * (float(k) + self.K) ** (-self.xi))
        return self.alpha * (np.asarray(k, dtype=float) + self.K) ** (-self.xi)

    def values(self, start: int, size: int) -> np.ndarray:
        """Step sizes for the consecutive indices start, ..., start + size - 1."""
        return np.asarray(self.value(np.arange(start, start + size)), dtype=float)

    def to_dict(self) -> Dict[str, Any]:
        """JSON fragment with the field names used by scenario files."""
        if self.kind == ScheduleKind.CONSTANT:
            return {"kind": self.kind.value, "alpha": self.alpha}
        return {"kind": self.kind.value, "alpha": self.alpha, "K": self.K, "xi": self.xi}


@dataclass(frozen=True)
class Summability:
    """Outcome of the p-series test for a schedule."""

    sum_divergent: bool
    p_power_summable: bool
    admissible: bool

    def to_dict(self) -> Dict[str, bool]:
        """Plain dictionary for reports."""
        return {
            "sum_divergent": self.sum_divergent,
            "p_power_summable": self.p_power_summable,
            "admissible": self.admissible,
        }


def value(schedule: StepSchedule, k: ArrayLike) -> ArrayLike:
    """Step size alpha_k of a schedule (see StepSchedule.value)."""
    return schedule.value(k)


def classify_summability(schedule: StepSchedule, p: float) -> Summability:
    """Classify sum(alpha_k) = inf and sum(alpha_k ** p) < inf from the exponents.

    For polynomial schedules the sum diverges iff xi <= 1 and the p-th powers
    are summable iff xi * p > 1, so the schedule is admissible exactly when
    xi is in (1/p, 1]. Constant schedules never have summable powers.

    Args:
        schedule: Step-size schedule
        p: Noise moment order, p > 1

    Returns:
        Summability verdict

    Raises:
        ScheduleError: If p <= 1
    """
    if not p > 1:
        raise ScheduleError(f"p must be > 1 for summability classification, got {p}")

    if schedule.kind == ScheduleKind.CONSTANT:
        return Summability(sum_divergent=True, p_power_summable=False, admissible=False)

    sum_divergent = schedule.xi <= 1 + EXPONENT_TOLERANCE
    p_power_summable = schedule.xi * p > 1 + EXPONENT_TOLERANCE
    return Summability(
        sum_divergent=sum_divergent,
        p_power_summable=p_power_summable,
        admissible=sum_divergent and p_power_summable,
    )


def partial_p_sum(schedule: StepSchedule, p: float, N: int) -> float:
    """Exact finite sum of alpha_k ** p for k = 0, ..., N - 1.

    Terms are accumulated in ascending k with exactly rounded summation.

    Args:
        schedule: Step-size schedule
        p: Power applied to each step size
        N: Number of terms, N >= 1

    Returns:
        The partial sum

    Raises:
        ScheduleError: If N < 1
    """
    if N < 1:
        raise ScheduleError(f"N must be >= 1, got {N}")
    return compensated_sum(schedule.values(0, N) ** p)


def p_sum_upper_bound(schedule: StepSchedule, p: float) -> Optional[float]:
    """Integral-test bound on the full series sum of alpha_k ** p.

    sum_{k>=0} (k + K) ** (-s) <= K ** (-s) + K ** (1 - s) / (s - 1) for s = xi * p > 1.

    Args:
        schedule: Polynomial step-size schedule
        p: Power applied to each step size

    Returns:
        The bound, or None when the series diverges (or the schedule is constant)
    """
    if schedule.kind == ScheduleKind.CONSTANT:
        return None
    s = schedule.xi * p
    if not s > 1 + EXPONENT_TOLERANCE:
        return None
    K = schedule.K
    return float(schedule.alpha**p * (K ** (-s) + K ** (1 - s) / (s - 1)))
