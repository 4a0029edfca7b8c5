"""Randomised searches for counterexamples to the drift inequalities.

Each runner draws its inputs from a seeded generator, evaluates the inequality
in vectorised batches and reports the worst normalised margin it saw.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, Optional, Tuple

import numpy as np

from src.lyapunov.fourth_moment import fourth_moment_drift_demo
from src.lyapunov.inequalities import RELATIVE_TOLERANCE, norm_power_terms, scalar_power_terms
from src.lyapunov.projection import check_projection_drift, expected_projection_excess
from src.noise.models import ThreePointMDS
from src.operators.checks import sample_ball
from src.operators.zoo import make_hurwitz_linear
from src.schedules.step_size import StepSchedule

logger = logging.getLogger(__name__)

BATCH_SIZE = 100_000
MAX_DIMENSION = 4

# Projection-drift oracle setup: the selector's stable A2 mode alone (A1 has det -72),
# three-point noise of order 2.5
PROJECTION_MATRIX = ((-5.0, -4.0), (-1.0, -2.0))
PROJECTION_D = 0.5
PROJECTION_P = 2.5
PROJECTION_STEPS = (1_000, 10_000, 100_000)


class OracleKind(str, Enum):
    """Available oracles."""

    NORM_POWER = "norm_power"
    SCALAR_POWER = "scalar_power"
    PROJECTION_DRIFT = "projection_drift"
    FOURTH_MOMENT = "fourth_moment"


@dataclass
class OracleResult:
    """Outcome of an oracle run.

    Attributes:
        name: Oracle name
        trials: Number of random inputs evaluated
        worst_margin: Smallest normalised gap (or the oracle's headline statistic)
        violations: Inputs beyond tolerance
        tolerance: Allowed normalised slack
        details: Oracle-specific data
    """

    name: str
    trials: int
    worst_margin: float
    violations: int
    tolerance: float
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """True when no input violated the inequality."""
        return self.violations == 0

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready summary."""
        return {
            "name": self.name,
            "trials": self.trials,
            "worst_margin": self.worst_margin,
            "violations": self.violations,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "details": self.details,
        }


def _log_magnitudes(rng: np.random.Generator, n: int, decades: float) -> np.ndarray:
    return 10.0 ** rng.uniform(-decades, decades, size=n)


def _batches(trials: int) -> Iterator[Tuple[int, int]]:
    start = 0
    while start < trials:
        size = min(BATCH_SIZE, trials - start)
        yield start, size
        start += size


def run_norm_power_oracle(trials: int, rng: np.random.Generator) -> OracleResult:
    """Random search over (v, u, p) with p in (1, 2] and dimensions 1 to 4."""
    worst = np.inf
    violations = 0
    for start, size in _batches(trials):
        dim = 1 + (start // BATCH_SIZE) % MAX_DIMENSION
        v = rng.standard_normal((size, dim)) * _log_magnitudes(rng, size, 3.0)[:, None]
        u = rng.standard_normal((size, dim)) * _log_magnitudes(rng, size, 3.0)[:, None]
        p = 2.0 - rng.random(size)
        gap, scale = norm_power_terms(v, u, p)
        margin = gap / scale
        worst = min(worst, float(margin.min()))
        violations += int(np.count_nonzero(margin < -RELATIVE_TOLERANCE))
    return OracleResult(OracleKind.NORM_POWER.value, trials, worst, violations, RELATIVE_TOLERANCE)


def run_scalar_power_oracle(trials: int, rng: np.random.Generator) -> OracleResult:
    """Random search over (x, delta, p) with p in [2, 6]."""
    worst = np.inf
    violations = 0
    for _, size in _batches(trials):
        x = rng.standard_normal(size) * _log_magnitudes(rng, size, 2.0)
        delta = rng.standard_normal(size) * _log_magnitudes(rng, size, 2.0)
        p = rng.uniform(2.0, 6.0, size=size)
        gaps = scalar_power_terms(x, delta, p)
        margin = np.minimum(gaps.lower_gap, gaps.upper_gap) / gaps.scale
        worst = min(worst, float(margin.min()))
        violations += int(np.count_nonzero(margin < -RELATIVE_TOLERANCE))
    return OracleResult(
        OracleKind.SCALAR_POWER.value, trials, worst, violations, RELATIVE_TOLERANCE
    )


def run_projection_drift_oracle(trials: int, rng: np.random.Generator) -> OracleResult:
    """Exact projection drift on a stable linear system at k = 10^3, 10^4, 10^5.

    The excess estimates must agree within a factor 2 across the steps; the
    headline margin is the worst excess, to compare with 2 c D^p / alpha^p.
    """
    op = make_hurwitz_linear(PROJECTION_MATRIX, [0.0, 0.0])
    schedule = StepSchedule(alpha=0.1, K=1.0, xi=0.8)
    noise = ThreePointMDS(alpha=0.1, K=1.0, xi=0.8, p=PROJECTION_P, c=0.5, dim=2)
    states = sample_ball(np.zeros(2), 3 * PROJECTION_D, trials, rng)
    result = check_projection_drift(
        op, noise, schedule, PROJECTION_D, PROJECTION_P, states, PROJECTION_STEPS
    )
    details = result.to_dict()
    details["reference_excess"] = expected_projection_excess(noise, PROJECTION_D)
    return OracleResult(
        OracleKind.PROJECTION_DRIFT.value,
        trials,
        result.worst,
        0 if result.bounded else 1,
        0.0,
        details,
    )


def run_fourth_moment_oracle(trials: int, rng: np.random.Generator) -> OracleResult:
    """Four-term expansion at x = 1, alpha = 0.1 against `trials` Monte Carlo draws."""
    demo = fourth_moment_drift_demo(alpha_k=0.1, x=1.0, n_draws=trials, rng=rng)
    return OracleResult(
        OracleKind.FOURTH_MOMENT.value,
        trials,
        demo.z_score,
        0 if demo.passed else 1,
        5.0,
        demo.to_dict(),
    )


def run_oracle(
    kind: OracleKind, trials: int, seed: int = 0, rng: Optional[np.random.Generator] = None
) -> OracleResult:
    """Dispatch to the named oracle.

    Raises:
        ValueError: If trials < 1
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng = np.random.default_rng(seed) if rng is None else rng
    runners = {
        OracleKind.NORM_POWER: run_norm_power_oracle,
        OracleKind.SCALAR_POWER: run_scalar_power_oracle,
        OracleKind.PROJECTION_DRIFT: run_projection_drift_oracle,
        OracleKind.FOURTH_MOMENT: run_fourth_moment_oracle,
    }
    result = runners[OracleKind(kind)](trials, rng)
    logger.info(
        f"Oracle {result.name}: trials={result.trials}, worst={result.worst_margin:.6g}, "
        f"violations={result.violations}"
    )
    return result
