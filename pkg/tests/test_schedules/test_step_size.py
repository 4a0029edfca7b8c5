"""Tests for step-size schedules and summability classification."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.schedules.step_size import (
    ScheduleError,
    ScheduleKind,
    StepSchedule,
    classify_summability,
    p_sum_upper_bound,
    partial_p_sum,
    value,
)


def test_value_matches_closed_form():
    """alpha_k = alpha * (k + K) ** (-xi) for scalars and arrays."""
    schedule = StepSchedule(alpha=0.1, K=1, xi=0.8)

    assert schedule.value(0) == pytest.approx(0.1)
    assert value(schedule, 1) == pytest.approx(0.1 * 2 ** (-0.8))

    ks = np.array([0, 9, 99])
    expected = 0.1 * (ks + 1.0) ** (-0.8)
    np.testing.assert_allclose(schedule.value(ks), expected, rtol=1e-15)
    np.testing.assert_allclose(schedule.values(9, 3), 0.1 * np.array([10.0, 11.0, 12.0]) ** -0.8)


def test_harmonic_schedule_is_one_over_k_plus_one():
    """alpha = 1, K = 1, xi = 1 gives 1 / (k + 1)."""
    schedule = StepSchedule(alpha=1.0, K=1, xi=1.0)

    assert schedule.value(0) == 1.0
    assert schedule.value(3) == pytest.approx(0.25)


def test_constant_schedule_normalises_xi():
    """Constant schedules return alpha everywhere and carry xi = 0."""
    schedule = StepSchedule(alpha=0.05, kind=ScheduleKind.CONSTANT, xi=0.7)

    assert schedule.xi == 0.0
    assert schedule.value(1000) == 0.05
    assert schedule.to_dict() == {"kind": "constant", "alpha": 0.05}
    np.testing.assert_array_equal(schedule.values(0, 4), np.full(4, 0.05))


@pytest.mark.parametrize(
    "params",
    [
        {"alpha": 0.0},
        {"alpha": -1.0},
        {"K": 0.5},
        {"xi": 0.0},
        {"xi": 1.2},
    ],
)
def test_invalid_parameters_rejected(params):
    """Non-positive alpha, K < 1 and xi outside (0, 1] raise ScheduleError."""
    with pytest.raises(ScheduleError):
        StepSchedule(**params)


@pytest.mark.parametrize(
    "xi, p, admissible",
    [
        (0.8, 1.6, True),
        (1.0, 1.6, True),
        (0.625, 1.6, False),  # boundary xi * p = 1 exactly
        (0.5, 1.6, False),
        (0.8, 1.4, True),
        (0.6, 1.4, False),
        (0.5, 2.0, False),
        (0.51, 2.0, True),
    ],
)
def test_classify_summability_threshold(xi, p, admissible):
    """Admissible exactly when xi is in (1/p, 1]."""
    verdict = classify_summability(StepSchedule(alpha=0.1, K=1, xi=xi), p)

    assert verdict.sum_divergent is True
    assert verdict.admissible is admissible, f"xi={xi}, p={p}"
    assert verdict.p_power_summable is admissible


def test_constant_schedule_never_admissible():
    """Constant steps have a divergent p-th power sum."""
    verdict = classify_summability(StepSchedule(alpha=0.1, kind=ScheduleKind.CONSTANT), 2.0)

    assert verdict.sum_divergent is True
    assert verdict.p_power_summable is False
    assert verdict.admissible is False


def test_classify_rejects_p_at_most_one():
    """p <= 1 has no summability meaning."""
    with pytest.raises(ScheduleError):
        classify_summability(StepSchedule(), 1.0)


def test_partial_sum_below_integral_bound():
    """Partial sums stay below the integral-test bound and approach zeta(2)."""
    schedule = StepSchedule(alpha=1.0, K=1, xi=1.0)

    partial = partial_p_sum(schedule, 2.0, 10_000)
    bound = p_sum_upper_bound(schedule, 2.0)

    assert bound == pytest.approx(2.0)
    assert partial < math.pi**2 / 6 < bound
    assert partial == pytest.approx(math.pi**2 / 6, abs=1e-3)


def test_upper_bound_none_when_series_diverges():
    """xi * p <= 1 and constant schedules have no finite bound."""
    assert p_sum_upper_bound(StepSchedule(alpha=0.1, K=1, xi=0.5), 1.6) is None
    assert p_sum_upper_bound(StepSchedule(alpha=0.1, K=1, xi=0.625), 1.6) is None
    assert p_sum_upper_bound(StepSchedule(alpha=0.1, kind=ScheduleKind.CONSTANT), 2.0) is None


def test_partial_sum_requires_positive_horizon():
    """N = 0 is rejected."""
    with pytest.raises(ScheduleError):
        partial_p_sum(StepSchedule(), 2.0, 0)


@given(
    alpha=st.floats(min_value=1e-3, max_value=10.0),
    K=st.floats(min_value=1.0, max_value=100.0),
    xi=st.floats(min_value=0.05, max_value=1.0),
    k=st.integers(min_value=0, max_value=10**6),
)
def test_schedule_positive_and_non_increasing(alpha, K, xi, k):
    """alpha_k > 0 and alpha_{k+1} <= alpha_k."""
    schedule = StepSchedule(alpha=alpha, K=K, xi=xi)

    assert schedule.value(k) > 0
    assert schedule.value(k + 1) <= schedule.value(k)


@given(
    xi=st.floats(min_value=0.3, max_value=1.0),
    p=st.floats(min_value=1.05, max_value=3.0),
)
def test_bound_exists_iff_p_power_summable(xi, p):
    """The integral bound is finite exactly when the p-th powers are summable."""
    schedule = StepSchedule(alpha=0.5, K=2.0, xi=xi)
    verdict = classify_summability(schedule, p)

    assert (p_sum_upper_bound(schedule, p) is not None) == verdict.p_power_summable
