"""Projection Lyapunov process z = clamp(u, D, 2D) - D and its drift.

For moment orders p > 2 the distance u_k = ||x_k - x*|| is tracked only through
its projection onto the band [D, 2D]. Upcrossings count full traversals of the
band from bottom (u <= D) to top (u >= 2D).
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Sequence

import numpy as np

from src.noise.models import NoiseModel, ThreePointMDS, UnsupportedNoiseError
from src.operators.base import Operator
from src.schedules.step_size import StepSchedule

logger = logging.getLogger(__name__)

# Largest tolerated ratio between per-step excess estimates
BOUNDEDNESS_FACTOR = 2.0


def project(u: Any, D: float) -> Any:
    """z = clamp(u, D, 2D) - D, elementwise."""
    return np.clip(u, D, 2.0 * D) - D


@dataclass(frozen=True)
class ProjectionStep:
    """Result of feeding one distance into a tracker."""

    z: float
    upcrossing: bool


@dataclass
class ProjectionTracker:
    """Sequential projection of one trajectory's distances.

    Attributes:
        D: Band lower edge, > 0
        p: Moment order the projection serves, > 2
        z: Last projected value, in [0, D]
        armed: True once z has touched 0 since the last upcrossing
        upcrossings: Completed bottom-to-top traversals
    """

    D: float
    p: float = 2.5
    z: float = 0.0
    armed: bool = True
    upcrossings: int = field(default=0)

    def __post_init__(self) -> None:
        """Validate D and p."""
        if not self.D > 0:
            raise ValueError(f"D must be > 0, got {self.D}")
        if not self.p > 2:
            raise ValueError(f"p must be > 2, got {self.p}")

    def reset(self, u: float) -> None:
        """Start tracking from distance u."""
        self.z = float(project(u, self.D))
        self.armed = self.z == 0.0
        self.upcrossings = 0


def project_track(tracker: ProjectionTracker, u_next: float) -> ProjectionStep:
    """Feed the next distance u_{k+1} >= 0 into the tracker.

    An upcrossing is reported when z reaches D after having been 0 since the
    previous upcrossing (or since the start).

    Raises:
        ValueError: If u_next < 0
    """
    if u_next < 0:
        raise ValueError(f"u_next must be >= 0, got {u_next}")
    z_next = float(project(u_next, tracker.D))
    upcrossing = tracker.armed and tracker.z < tracker.D and z_next == tracker.D
    if upcrossing:
        tracker.upcrossings += 1
        tracker.armed = False
    if z_next == 0.0:
        tracker.armed = True
    tracker.z = z_next
    return ProjectionStep(z=z_next, upcrossing=upcrossing)


@dataclass
class ProjectionDriftResult:
    """Per-step estimates of (E[z_{k+1}^p | x_k] - z_k^p) / alpha_k^p."""

    excess_by_step: Dict[int, float]
    states: int
    D: float
    p: float

    @property
    def worst(self) -> float:
        """Largest excess over all steps."""
        return max(self.excess_by_step.values())

    @property
    def bounded(self) -> bool:
        """Positive excess estimates agree within BOUNDEDNESS_FACTOR across steps."""
        positive = [v for v in self.excess_by_step.values() if v > 0]
        if not positive:
            return True
        return bool(np.isfinite(positive).all()) and max(positive) <= BOUNDEDNESS_FACTOR * min(
            positive
        )

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready summary."""
        return {
            "excess_by_step": {str(k): v for k, v in self.excess_by_step.items()},
            "worst": self.worst,
            "bounded": self.bounded,
            "states": self.states,
            "D": self.D,
            "p": self.p,
        }


def check_projection_drift(
    op: Operator,
    model: NoiseModel,
    schedule: StepSchedule,
    D: float,
    p: float,
    states: np.ndarray,
    steps: Sequence[int],
) -> ProjectionDriftResult:
    """Exact conditional drift of z^p over the finite noise support.

    For every step k and sampled state x_k, E[z_{k+1}^p | x_k] is the
    probability-weighted sum over the noise atoms of z(x_k + alpha_k (H(x_k) - x_k + w))^p.

    Args:
        op: Operator with a known fixed point
        model: Finite-support noise
        schedule: Step-size schedule
        D: Band lower edge
        p: Moment order, > 2
        states: Sampled states, shape (n, d)
        steps: Step indices k

    Returns:
        Maximum excess per step

    Raises:
        UnsupportedNoiseError: If the noise has infinite support
        ValueError: If p <= 2 or D <= 0
    """
    if not p > 2:
        raise ValueError(f"p must be > 2, got {p}")
    if not D > 0:
        raise ValueError(f"D must be > 0, got {D}")
    states = np.atleast_2d(np.asarray(states, dtype=float))
    drift = op.drift(states)
    z_now = project(op.distance(states), D) ** p
    scale = model.scale_factor(model.state_distance(states))

    excess_by_step: Dict[int, float] = {}
    for k in steps:
        support = model.innovation_atoms(int(k))
        if support is None:
            raise UnsupportedNoiseError(
                f"projection drift needs finite-support noise, got {model.family.value}"
            )
        alpha_k = float(schedule.value(int(k)))
        expected = np.zeros(states.shape[0])
        for prob, value in support:
            if prob == 0.0:
                continue
            w = (scale * value)[:, None] * model.direction
            x_next = states + alpha_k * (drift + w)
            expected = expected + prob * project(op.distance(x_next), D) ** p
        excess = (expected - z_now) / alpha_k**p
        excess_by_step[int(k)] = float(excess.max())
        logger.debug(f"Projection drift at k={k}: max excess {excess_by_step[int(k)]:.6g}")

    return ProjectionDriftResult(
        excess_by_step=excess_by_step, states=states.shape[0], D=float(D), p=float(p)
    )


def expected_projection_excess(model: ThreePointMDS, D: float) -> float:
    """Excess 2 c D^p / alpha^p of a state below D whose every firing exits the band.

    Holds at every step when the projection order equals the noise order p.
    """
    return 2.0 * model.c * D**model.p / model.alpha**model.p
