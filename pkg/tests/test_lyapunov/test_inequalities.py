"""Tests for the norm-power and scalar power inequalities."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.lyapunov import (
    RELATIVE_TOLERANCE,
    ZeroBaseError,
    norm_power_gap,
    norm_power_terms,
    scalar_power_bounds,
)

coordinates = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)


def test_norm_power_is_an_identity_at_p_two():
    """For p = 2 both sides are ||v + u||^2."""
    gap = norm_power_gap(np.array([1.0, 2.0]), np.array([-3.0, 0.5]), 2.0)

    assert gap == pytest.approx(0.0, abs=1e-12)


def test_norm_power_gap_positive_example():
    """v = 1, u = 1, p = 1.5: 1 + 1.5 + 2^0.5 - 2^1.5 > 0."""
    gap = norm_power_gap(np.array([1.0]), np.array([1.0]), 1.5)

    assert gap == pytest.approx(2.5 + 2**0.5 - 2**1.5)


def test_norm_power_rejects_zero_base_and_bad_order():
    """v = 0 and p outside (1, 2] are errors."""
    with pytest.raises(ZeroBaseError):
        norm_power_gap(np.zeros(2), np.ones(2), 1.5)
    with pytest.raises(ValueError):
        norm_power_gap(np.ones(2), np.ones(2), 2.5)
    with pytest.raises(ValueError):
        norm_power_gap(np.ones(2), np.ones(2), 1.0)


@given(
    v=st.lists(coordinates, min_size=3, max_size=3),
    u=st.lists(coordinates, min_size=3, max_size=3),
    p=st.floats(min_value=1.01, max_value=2.0),
)
def test_norm_power_inequality_holds(v, u, p):
    """RHS - LHS >= -1e-12 times the magnitude of the terms."""
    v_arr = np.asarray(v)
    if np.linalg.norm(v_arr) < 1e-6:
        v_arr = v_arr + 1.0
    gap, scale = norm_power_terms(v_arr, np.asarray(u), p)

    assert gap >= -RELATIVE_TOLERANCE * scale


def test_norm_power_terms_broadcast_over_batches():
    """Batches of shape (n, d) give n gaps."""
    rng = np.random.default_rng(0)
    gap, scale = norm_power_terms(rng.normal(size=(50, 4)), rng.normal(size=(50, 4)), 1.3)

    assert gap.shape == (50,)
    assert np.all(gap >= -RELATIVE_TOLERANCE * scale)


def test_scalar_bounds_at_zero_base():
    """x = 0 leaves |d|^p between |d|^p / 2^(p+1) and p^p |d|^p."""
    gaps = scalar_power_bounds(0.0, 2.0, 3.0)

    assert gaps.center == pytest.approx(8.0)
    assert gaps.lower_gap == pytest.approx(8.0 - 0.5)
    assert gaps.upper_gap == pytest.approx(27.0 * 8.0 - 8.0)


def test_scalar_bounds_at_p_two():
    """p = 2: center d^2 between 3 d^2 / 8 and 12 d^2."""
    gaps = scalar_power_bounds(5.0, -1.0, 2.0)

    assert gaps.center == pytest.approx(1.0)
    assert gaps.lower_gap == pytest.approx(1.0 - 0.375)
    assert gaps.upper_gap == pytest.approx(11.0)


def test_scalar_bounds_reject_order_below_two():
    """p < 2 is outside the range of the two-sided bound."""
    with pytest.raises(ValueError):
        scalar_power_bounds(1.0, 1.0, 1.5)


@given(x=coordinates, delta=coordinates, p=st.floats(min_value=2.0, max_value=6.0))
def test_scalar_power_bounds_hold(x, delta, p):
    """Both gaps are >= -1e-12 times the magnitude of the terms."""
    gaps = scalar_power_bounds(x, delta, p)

    assert gaps.lower_gap >= -RELATIVE_TOLERANCE * gaps.scale
    assert gaps.upper_gap >= -RELATIVE_TOLERANCE * gaps.scale
