"""Tests for Lyapunov candidates and their sandwich constants."""

import numpy as np
import pytest

from src.lyapunov import (
    PiecewiseQuadratic,
    WeightedQuadratic,
    power_transform,
    quadratic_from_lyapunov_equation,
    sandwich_constants,
)

HURWITZ_A = [[-5.0, -4.0], [-1.0, -2.0]]


def test_weighted_quadratic_value_and_gradient():
    """e^T P e and 2 P e on a batch."""
    phi = WeightedQuadratic([[2.0, 0.0], [0.0, 1.0]])
    e = np.array([[1.0, 1.0], [0.0, -3.0]])

    np.testing.assert_allclose(phi.value(e), [3.0, 9.0])
    np.testing.assert_allclose(phi.gradient(e), [[4.0, 2.0], [0.0, -6.0]])


@pytest.mark.parametrize(
    "P",
    [
        [[1.0, 0.5], [0.0, 1.0]],
        [[1.0, 0.0], [0.0, -1.0]],
        [[1.0, 0.0, 0.0]],
    ],
    ids=["asymmetric", "indefinite", "not-square"],
)
def test_weighted_quadratic_rejects_bad_matrices(P):
    """P must be square, symmetric and positive definite."""
    with pytest.raises(ValueError):
        WeightedQuadratic(P)


def test_piecewise_quadratic_branches():
    """The eta k k^T term only acts where k^T e > 0."""
    phi = PiecewiseQuadratic()

    assert float(phi.value(np.array([-1.0, 1.0]))) == pytest.approx(4.0)
    assert float(phi.value(np.array([1.0, 1.0]))) == pytest.approx(13.0)
    np.testing.assert_allclose(phi.gradient(np.array([1.0, 1.0])), [20.0, 6.0])


def test_piecewise_quadratic_continuous_across_switching_plane():
    """Values agree on both sides of k^T e = 0."""
    phi = PiecewiseQuadratic()
    eps = 1e-9
    left = phi.value(np.array([-eps, 2.0]))
    right = phi.value(np.array([eps, 2.0]))

    assert float(left) == pytest.approx(float(right), rel=1e-12)


def test_analytic_gradient_matches_finite_differences():
    """Gradients agree with central differences away from the switching plane."""
    points = np.random.default_rng(4).normal(size=(200, 2))
    points = points[np.abs(points[:, 0]) > 0.05]

    for phi in (WeightedQuadratic([[2.0, 0.3], [0.3, 1.0]]), PiecewiseQuadratic()):
        np.testing.assert_allclose(
            phi.gradient(points), phi.finite_difference_gradient(points), rtol=1e-5, atol=1e-6
        )


def test_piecewise_rejects_negative_eta_and_wrong_k():
    """eta >= 0 and len(k) = d."""
    with pytest.raises(ValueError):
        PiecewiseQuadratic(eta=-1.0)
    with pytest.raises(ValueError):
        PiecewiseQuadratic(k=[1.0, 0.0, 0.0])


def test_lyapunov_equation_solution():
    """A^T P + P A = -I for the Hurwitz matrix."""
    phi = quadratic_from_lyapunov_equation(HURWITZ_A)
    A = np.asarray(HURWITZ_A)

    np.testing.assert_allclose(A.T @ phi.P + phi.P @ A, -np.eye(2), atol=1e-12)
    assert np.all(np.linalg.eigvalsh(phi.P) > 0)


def test_sandwich_constants():
    """Extreme eigenvalues of P, and of both branch matrices for the piecewise form."""
    quadratic = sandwich_constants(WeightedQuadratic([[1.0, 0.0], [0.0, 4.0]]))
    piecewise = sandwich_constants(PiecewiseQuadratic())

    assert quadratic == pytest.approx({"c1": 1.0, "c2": 4.0, "L2": 8.0})
    assert piecewise == pytest.approx({"c1": 1.0, "c2": 10.0, "L2": 20.0})


def test_power_transform_constants_and_value():
    """Psi = Phi^(p/2) with a_i = c_i^(p/2)."""
    psi = power_transform(WeightedQuadratic([[1.0, 0.0], [0.0, 4.0]]), 1.5, eta=2.0)

    assert psi.a1 == pytest.approx(1.0)
    assert psi.a2 == pytest.approx(4.0**0.75)
    assert psi.eta_p == pytest.approx(1.5)
    assert float(psi.value(np.array([0.0, 1.0]))) == pytest.approx(4.0**0.75)
    np.testing.assert_array_equal(psi.gradient(np.zeros(2)), [0.0, 0.0])


def test_power_transform_rejects_order_outside_range():
    """p must be in (1, 2]."""
    phi = WeightedQuadratic(np.eye(2))

    with pytest.raises(ValueError):
        power_transform(phi, 2.5)
    with pytest.raises(ValueError):
        power_transform(phi, 1.0)
    with pytest.raises(ValueError):
        power_transform(phi, 1.5, c1=0.0, c2=1.0)
