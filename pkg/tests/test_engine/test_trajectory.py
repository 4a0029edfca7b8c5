"""Tests for trajectory simulation and per-trajectory diagnostics."""

import math

import numpy as np
import pytest

from src.config.scenario import DiagnosticsConfig
from src.engine import (
    Outcome,
    checkpoint_indices,
    classify_outcome,
    run_trajectory,
    simulate_batch,
    tail_start,
)
from src.noise import ThreePointMDS, ZeroNoise, trajectory_stream
from src.operators import make_contractive_affine, make_hurwitz_linear
from src.schedules.step_size import ScheduleKind, StepSchedule


def three_point_setup():
    op = make_contractive_affine(0.5, [0.0, 0.0])
    noise = ThreePointMDS(alpha=0.1, K=1.0, xi=0.8, p=1.6, c=0.5, dim=2)
    schedule = StepSchedule(alpha=0.1, K=1.0, xi=0.8)
    return op, noise, schedule


def test_checkpoint_indices_are_log_spaced():
    """Every integer up to 10, then 16 points per decade, then N - 1."""
    decade = [12, 14, 16, 18, 21, 24, 28, 32, 37, 43, 49, 57, 65, 75, 87]

    assert checkpoint_indices(100) == list(range(11)) + decade + [99]
    assert checkpoint_indices(1) == [0]
    assert checkpoint_indices(2) == [0, 1]


def test_tail_start():
    """The tail covers the last ceil(fraction * N) indices."""
    assert tail_start(1000, 0.1) == 900
    assert tail_start(7, 0.1) == 6
    assert tail_start(10, 1.0) == 0


@pytest.mark.parametrize(
    "tail_sup, nonfinite, expected",
    [
        (0.01, False, Outcome.CONVERGED),
        (0.1, False, Outcome.CONVERGED),
        (0.5, False, Outcome.UNDETERMINED),
        (21.0, False, Outcome.DIVERGED),
        (math.inf, False, Outcome.DIVERGED_NONFINITE),
        (0.01, True, Outcome.DIVERGED_NONFINITE),
    ],
)
def test_classify_outcome(tail_sup, nonfinite, expected):
    """epsilon = 0.1 and u0 = 1, so divergence starts above 20."""
    assert classify_outcome(tail_sup, 1.0, 0.1, 10.0, nonfinite) == expected


def test_single_zero_noise_step():
    """x_1 = x_0 + alpha_0 (H(x_0) - x_0)."""
    op = make_contractive_affine(0.5, [1.0, 2.0])
    record = run_trajectory(
        op, ZeroNoise(2), StepSchedule(alpha=0.1, K=1.0, xi=1.0), np.zeros(2), 1
    )

    np.testing.assert_allclose(record.final_state, [0.05, 0.1], rtol=1e-15)
    assert record.checkpoints == [(0, pytest.approx(math.sqrt(5.0)))]
    assert record.noise_firings == 0


def test_contraction_without_noise_converges_monotonically():
    """u_{k+1} = (1 - alpha_k / 2) u_k for gamma = 1/2."""
    op = make_contractive_affine(0.5, [1.0, 2.0])
    record = run_trajectory(
        op, ZeroNoise(2), StepSchedule(alpha=1.0, K=1.0, xi=1.0), np.zeros(2), 1000
    )
    distances = [u for _, u in record.checkpoints]

    assert all(later < earlier for earlier, later in zip(distances, distances[1:]))
    assert record.outcome == Outcome.CONVERGED
    assert record.u0 == pytest.approx(math.sqrt(5.0))
    assert record.epsilon == pytest.approx(0.05 * (1 + math.sqrt(5.0)))
    assert record.jump_events == 0
    assert record.final_distance < record.tail_sup


def test_nonfinite_trajectory_is_flagged():
    """A constant step of 10 on gamma = 1/2 multiplies the error by -4 until overflow."""
    op = make_contractive_affine(0.5, [1.0, 2.0])
    schedule = StepSchedule(alpha=10.0, kind=ScheduleKind.CONSTANT)
    record = run_trajectory(op, ZeroNoise(2), schedule, np.zeros(2), 1000)

    assert record.outcome == Outcome.DIVERGED_NONFINITE
    assert 500 <= record.nonfinite_step <= 520
    assert math.isinf(record.final_distance)
    assert not np.all(np.isfinite(record.final_state))
    assert record.to_dict()["outcome"] == "diverged_nonfinite"


def test_every_firing_is_a_jump():
    """alpha_k s_k = 4, so each firing moves the state by the jump threshold."""
    op, noise, schedule = three_point_setup()
    streams = [trajectory_stream(5, i) for i in range(6)]
    records = simulate_batch(
        op, noise, schedule, np.zeros(2), 3000, DiagnosticsConfig(), streams, range(6)
    )

    for record in records:
        assert record.noise_firings >= 1
        assert record.jump_events == record.noise_firings


def test_large_noiseless_step_is_not_a_jump():
    """Drift alone moves the state by 10 here, and no jump is counted."""
    op = make_contractive_affine(0.0, [0.0, 0.0])
    schedule = StepSchedule(alpha=1.0, K=1.0, xi=1.0)
    record = run_trajectory(op, ZeroNoise(2), schedule, np.array([10.0, 0.0]), 1)

    np.testing.assert_allclose(record.final_state, [0.0, 0.0], atol=1e-15)
    assert record.jump_events == 0
    assert record.noise_firings == 0


def test_firings_against_a_strong_drift_still_count():
    """Jumps equal firings even when alpha_k ||drift|| is comparable to the kick."""
    op = make_hurwitz_linear([[-5.0, -4.0], [-1.0, -2.0]], [0.0, 0.0])
    noise = ThreePointMDS(alpha=1.0, K=10.0, xi=0.8, p=1.6, c=0.5, dim=2)
    schedule = StepSchedule(alpha=1.0, K=10.0, xi=0.8)
    streams = [trajectory_stream(21, i) for i in range(8)]
    records = simulate_batch(
        op, noise, schedule, np.array([1.0, -1.0]), 3000, DiagnosticsConfig(), streams, range(8)
    )

    assert sum(record.noise_firings for record in records) >= 1
    for record in records:
        assert record.jump_events == record.noise_firings


def test_batch_results_match_single_runs():
    """A trajectory's record does not depend on the rows it is batched with."""
    op, noise, schedule = three_point_setup()
    x0 = np.array([1.0, -1.0])
    diagnostics = DiagnosticsConfig(D=0.5)
    streams = [trajectory_stream(9, i) for i in range(5)]
    batch = simulate_batch(op, noise, schedule, x0, 5000, diagnostics, streams, range(5))

    for i, record in enumerate(batch):
        single = run_trajectory(
            op, noise, schedule, x0, 5000, diagnostics, trajectory_stream(9, i), trajectory_id=i
        )
        assert single.to_dict() == record.to_dict()


def test_upcrossings_counted_after_jumps():
    """Starting at x*, the first firing crosses the band [D, 2D] for D = 1."""
    op, noise, schedule = three_point_setup()
    record = run_trajectory(
        op, noise, schedule, np.zeros(2), 10, DiagnosticsConfig(D=1.0), trajectory_stream(1, 0)
    )

    assert record.noise_firings >= 1
    assert record.upcrossings >= 1


def test_run_trajectory_validates_inputs():
    """x0 must match the dimension and N must be positive."""
    op, noise, schedule = three_point_setup()

    with pytest.raises(ValueError):
        run_trajectory(op, noise, schedule, np.zeros(3), 10)
    with pytest.raises(ValueError):
        run_trajectory(op, noise, schedule, np.zeros(2), 0)
    with pytest.raises(ValueError):
        run_trajectory(op, ZeroNoise(3), schedule, np.zeros(2), 10)
