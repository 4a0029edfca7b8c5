"""Tests for sampled drift certification."""

import json

import numpy as np
import pytest

from src.lyapunov import (
    DegenerateRegionError,
    PiecewiseQuadratic,
    SamplingRegion,
    WeightedQuadratic,
    certify_drift,
    quadratic_from_lyapunov_equation,
    search_quadratic_violations,
    selector_lmi_report,
)
from src.operators import (
    MissingFixedPointError,
    NonexpansiveKind,
    make_contractive_affine,
    make_hurwitz_linear,
    make_nonexpansive,
    make_selector_control,
)

HURWITZ_A = [[-5.0, -4.0], [-1.0, -2.0]]


def test_contractive_certificate_constants():
    """For H = gamma (x - t) + t and Phi = ||e||^2, the drift ratio is 2 (gamma - 1)."""
    op = make_contractive_affine(0.5, [1.0, 2.0])
    certificate = certify_drift(op, WeightedQuadratic(np.eye(2)), n_samples=5000)

    assert certificate.passed
    assert certificate.violation_count == 0
    assert certificate.eta_hat == pytest.approx(1.0, rel=1e-9)
    assert certificate.L2_hat == pytest.approx(2.0, rel=1e-6)
    assert certificate.c1_hat == pytest.approx(1.0)
    assert certificate.c2_hat == pytest.approx(1.0)
    assert certificate.eta_p(1.6) == pytest.approx(0.8, rel=1e-9)


def test_hurwitz_certificate_from_lyapunov_equation():
    """The Lyapunov-equation quadratic decreases everywhere with eta = 1 / lambda_max(P)."""
    op = make_hurwitz_linear(HURWITZ_A, [1.0, 0.0])
    phi = quadratic_from_lyapunov_equation(HURWITZ_A)

    certificate = certify_drift(op, phi, n_samples=5000, rng=np.random.default_rng(2))

    assert certificate.passed
    assert certificate.eta_hat >= 1.0 / np.linalg.eigvalsh(phi.P).max() - 1e-9


def test_selector_piecewise_candidate_has_violations():
    """At (-1, 1) the first branch pushes the piecewise quadratic up."""
    op = make_selector_control()
    phi = PiecewiseQuadratic()
    point = np.array([-1.0, 1.0])

    assert float(phi.gradient(point) @ op.drift(point)) == pytest.approx(112.0)

    certificate = certify_drift(op, phi, n_samples=20_000)
    assert not certificate.passed
    assert certificate.violation_count > 0
    assert certificate.eta_hat < 0
    assert 0 < len(certificate.violations) <= 20
    assert all(v["margin"] >= 0 for v in certificate.violations)


def test_certificate_serialises_to_json():
    """to_dict is plain JSON."""
    op = make_contractive_affine(0.5, [0.0, 0.0])
    certificate = certify_drift(op, WeightedQuadratic(np.eye(2)), n_samples=100)

    document = json.loads(json.dumps(certificate.to_dict()))
    assert document["method"] == "sampled"
    assert document["region"] == {"r_min": 1e-3, "radius": 10.0}
    assert document["passed"] is True


@pytest.mark.parametrize("r_min, radius", [(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)])
def test_degenerate_region_rejected(r_min, radius):
    """The annulus must exclude x* and be non-empty."""
    op = make_contractive_affine(0.5, [0.0, 0.0])

    with pytest.raises(DegenerateRegionError):
        certify_drift(op, WeightedQuadratic(np.eye(2)), SamplingRegion(r_min, radius))


def test_certify_needs_fixed_point():
    """Operators with a solution set cannot be certified around a point."""
    op = make_nonexpansive(NonexpansiveKind.CONVEX_GRADIENT_STEP, L=1.0, eta=1.0)

    with pytest.raises(MissingFixedPointError):
        certify_drift(op, WeightedQuadratic(np.eye(2)), n_samples=10)


def test_region_samples_stay_in_annulus():
    """Sampled radii lie in [r_min, radius]."""
    region = SamplingRegion(0.5, 2.0)
    points = region.sample(3, 1000, np.random.default_rng(0))
    radii = np.linalg.norm(points, axis=1)

    assert points.shape == (1000, 3)
    assert radii.min() >= 0.5 - 1e-12
    assert radii.max() <= 2.0 + 1e-12


def test_quadratic_search_finds_violations_on_selector():
    """The unstable first branch defeats random quadratic candidates."""
    results = search_quadratic_violations(
        make_selector_control(), n_matrices=5, n_samples=5000, rng=np.random.default_rng(1)
    )

    assert len(results) == 5
    assert any(entry["violation_count"] > 0 for entry in results)
    for entry in results:
        assert np.allclose(np.trace(np.asarray(entry["P"])), 1.0)


def test_selector_lmi_report_flags_unstable_branch():
    """det A1 = -72 and the lower switched inequality fails."""
    report = selector_lmi_report(make_selector_control())

    assert report["det_A1"] == pytest.approx(-72.0)
    assert report["det_A2"] == pytest.approx(6.0)
    assert report["eig_A1"][-1][0] > 0
    assert report["lmi_lower_max_eig"] > 0
    assert report["lmi_feasible"] is False
