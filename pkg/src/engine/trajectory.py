"""Trajectory simulation and per-trajectory diagnostics.

A batch of trajectories is stepped together as an (M, d) array. Every kernel
acts row by row in a fixed order and each row draws its noise from its own
stream, so a trajectory's bytes do not depend on which batch it ran in.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config.scenario import DiagnosticsConfig
from src.lyapunov.projection import project
from src.noise.models import NoiseModel
from src.operators.base import Operator
from src.schedules.step_size import StepSchedule
from src.utils.numerics import row_norms

logger = logging.getLogger(__name__)

# Steps of noise drawn per stream refill
BLOCK_SIZE = 4096

CHECKPOINTS_PER_DECADE = 16

# Relative slack on the jump threshold, so a kick of exactly 4 counts
JUMP_SLACK = 1e-9


class Outcome(str, Enum):
    """Categorical fate of a trajectory."""

    CONVERGED = "converged"
    DIVERGED = "diverged"
    DIVERGED_NONFINITE = "diverged_nonfinite"
    UNDETERMINED = "undetermined"


@dataclass
class TrajectoryRecord:
    """Diagnostics of one trajectory.

    Attributes:
        trajectory_id: Index within the ensemble
        checkpoints: (k, u_k) at log-spaced k, strictly increasing in k
        jump_events: Steps whose noise kick alpha_k ||w_k|| reached the jump threshold
        noise_firings: Steps with a nonzero noise draw
        tail_sup: max u_k over the tail window
        upcrossings: Traversals of the band [D, 2D] from bottom to top
        final_state: x_N
        u0: Initial distance to the solution
        epsilon: Convergence tolerance applied
        outcome: Categorical outcome
        nonfinite_step: First k with a non-finite x_k, if any
        final_distance: u_N (inf when non-finite)
    """

    trajectory_id: int
    checkpoints: List[Tuple[int, float]]
    jump_events: int
    noise_firings: int
    tail_sup: float
    upcrossings: int
    final_state: List[float]
    u0: float
    epsilon: float
    outcome: Outcome
    nonfinite_step: Optional[int] = None
    final_distance: float = field(default=math.inf, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        """Plain dictionary for reports."""
        return {
            "trajectory_id": self.trajectory_id,
            "checkpoints": [[k, u] for k, u in self.checkpoints],
            "jump_events": self.jump_events,
            "noise_firings": self.noise_firings,
            "tail_sup": self.tail_sup,
            "upcrossings": self.upcrossings,
            "final_state": self.final_state,
            "u0": self.u0,
            "epsilon": self.epsilon,
            "outcome": self.outcome.value,
            "nonfinite_step": self.nonfinite_step,
        }


def checkpoint_indices(N: int) -> List[int]:
    """{0} U {ceil(10^(j/16))} U {N - 1}, restricted to [0, N - 1] and sorted.

    Powers that are integers up to rounding (10^(16/16) = 10, ...) are taken as
    those integers rather than rounded up past them.
    """
    indices = {0, N - 1}
    j = 0
    while True:
        value = 10.0 ** (j / CHECKPOINTS_PER_DECADE)
        nearest = round(value)
        k = int(nearest) if abs(value - nearest) < 1e-9 * value else math.ceil(value)
        if k > N - 1:
            break
        indices.add(k)
        j += 1
    return sorted(indices)


def tail_start(N: int, tail_fraction: float) -> int:
    """First index of the tail window over u_0, ..., u_N."""
    return max(0, N - math.ceil(tail_fraction * N))


def classify_outcome(
    tail_sup: float, u0: float, epsilon: float, divergence_factor: float, nonfinite: bool
) -> Outcome:
    """Outcome from the tail supremum."""
    if nonfinite or not math.isfinite(tail_sup):
        return Outcome.DIVERGED_NONFINITE
    if tail_sup <= epsilon:
        return Outcome.CONVERGED
    if tail_sup > divergence_factor * (1.0 + u0):
        return Outcome.DIVERGED
    return Outcome.UNDETERMINED


def simulate_batch(
    op: Operator,
    noise: NoiseModel,
    schedule: StepSchedule,
    x0: np.ndarray,
    N: int,
    diagnostics: DiagnosticsConfig,
    streams: Sequence[np.random.Generator],
    trajectory_ids: Sequence[int],
) -> List[TrajectoryRecord]:
    """Iterate x_{k+1} = x_k + alpha_k (H(x_k) - x_k + w_k) for a batch of trajectories.

    Args:
        op: Operator H
        noise: Noise model (dimension must match the operator)
        schedule: Step sizes alpha_k
        x0: Initial states, shape (M, d) or (d,) shared by all rows
        N: Number of steps
        diagnostics: Jump threshold, tail window, tolerances, band D
        streams: One noise generator per trajectory
        trajectory_ids: Ids reported in the records

    Returns:
        One TrajectoryRecord per trajectory, in input order

    Raises:
        ValueError: If N < 1 or the dimensions disagree
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    M = len(streams)
    x = np.array(np.broadcast_to(np.asarray(x0, dtype=float), (M, op.dim)))
    if noise.dim != op.dim:
        raise ValueError(f"noise dimension {noise.dim} != operator dimension {op.dim}")

    D = diagnostics.D
    threshold = diagnostics.jump_threshold * (1.0 - JUMP_SLACK)
    checkpoints = checkpoint_indices(N)
    start_tail = tail_start(N, diagnostics.tail_fraction)

    u = op.distance(x)
    u0 = u.copy()
    recorded: List[List[Tuple[int, float]]] = [[] for _ in range(M)]
    next_checkpoint = 0
    jumps = np.zeros(M, dtype=np.int64)
    firings = np.zeros(M, dtype=np.int64)
    upcrossings = np.zeros(M, dtype=np.int64)
    tail_sup = np.full(M, -np.inf)
    active = np.isfinite(x).all(axis=1)
    nonfinite_step = np.where(active, -1, 0)
    z = project(u, D)
    armed = z == 0.0

    def observe(k: int, u_k: np.ndarray) -> None:
        nonlocal next_checkpoint
        if next_checkpoint < len(checkpoints) and checkpoints[next_checkpoint] == k:
            for i in range(M):
                recorded[i].append((k, float(u_k[i])))
            next_checkpoint += 1
        if k >= start_tail:
            np.maximum(tail_sup, u_k, out=tail_sup)

    observe(0, np.where(active, u, np.inf))

    with np.errstate(all="ignore"):
        for block_start in range(0, N, BLOCK_SIZE):
            size = min(BLOCK_SIZE, N - block_start)
            draws = np.stack([noise.sample_block(block_start, size, rng) for rng in streams])
            alphas = schedule.values(block_start, size)
            for j in range(size):
                k = block_start + j
                alpha_k = alphas[j]
                drift = op.drift(x)
                scale = noise.scale_factor(noise.state_distance(x))
                w = scale[:, None] * draws[:, j, :]
                x_next = x + alpha_k * (drift + w)

                fired = np.any(draws[:, j, :] != 0.0, axis=1)
                # Displacement from the noiseless step x_k + alpha_k drift
                kicked = alpha_k * row_norms(w)
                jumps += (kicked >= threshold) & active
                firings += fired & active

                became_bad = active & ~np.isfinite(x_next).all(axis=1)
                nonfinite_step = np.where(became_bad, k + 1, nonfinite_step)
                active = active & ~became_bad
                # Non-finite rows keep their first bad value and stop moving
                x = np.where((active | became_bad)[:, None], x_next, x)

                u_next = np.where(active, op.distance(x), np.inf)
                z_next = project(u_next, D)
                crossed = active & armed & (z < D) & (z_next == D)
                upcrossings += crossed
                armed = (armed & ~crossed) | (z_next == 0.0)
                z = z_next
                observe(k + 1, u_next)

    u_final = np.where(active, op.distance(np.where(active[:, None], x, 0.0)), np.inf)
    records = []
    for i in range(M):
        epsilon = diagnostics.tolerance(float(u0[i]))
        nonfinite = bool(nonfinite_step[i] >= 0)
        records.append(
            TrajectoryRecord(
                trajectory_id=int(trajectory_ids[i]),
                checkpoints=recorded[i],
                jump_events=int(jumps[i]),
                noise_firings=int(firings[i]),
                tail_sup=float(tail_sup[i]),
                upcrossings=int(upcrossings[i]),
                final_state=x[i].tolist(),
                u0=float(u0[i]),
                epsilon=epsilon,
                outcome=classify_outcome(
                    float(tail_sup[i]),
                    float(u0[i]),
                    epsilon,
                    diagnostics.divergence_factor,
                    nonfinite,
                ),
                nonfinite_step=int(nonfinite_step[i]) if nonfinite else None,
                final_distance=float(u_final[i]),
            )
        )
    return records


def run_trajectory(
    op: Operator,
    noise: NoiseModel,
    schedule: StepSchedule,
    x0: np.ndarray,
    N: int,
    diagnostics: Optional[DiagnosticsConfig] = None,
    rng: Optional[np.random.Generator] = None,
    trajectory_id: int = 0,
) -> TrajectoryRecord:
    """Simulate a single trajectory (see simulate_batch)."""
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (op.dim,):
        raise ValueError(f"x0 must have shape ({op.dim},), got {x0.shape}")
    diagnostics = DiagnosticsConfig() if diagnostics is None else diagnostics
    rng = np.random.default_rng(0) if rng is None else rng
    return simulate_batch(op, noise, schedule, x0, N, diagnostics, [rng], [trajectory_id])[0]
