"""Tests for the randomised inequality oracles and the fourth-moment expansion."""

import numpy as np
import pytest

from src.lyapunov import (
    OracleKind,
    fourth_moment_drift_demo,
    fourth_moment_terms,
    run_oracle,
)
from src.noise import IIDCentered, IIDDistribution, UnsupportedNoiseError


def test_fourth_moment_terms_for_skewed_two_point_law():
    """alpha = 0.1, x = 1 with moments 2, 2, 6 of the {2, -1} law."""
    terms = fourth_moment_terms(0.1, 1.0, IIDCentered(IIDDistribution.TWO_POINT))

    assert terms["quartic"] == pytest.approx(0.9**4)
    assert terms["quadratic"] == pytest.approx(6 * 0.81 * 0.01 * 2)
    assert terms["cubic"] == pytest.approx(0.0072)
    assert terms["constant"] == pytest.approx(0.0006)


def test_fourth_moment_terms_need_finite_support():
    """Continuous noise has no exact expansion here."""
    with pytest.raises(UnsupportedNoiseError):
        fourth_moment_terms(0.1, 1.0, IIDCentered(IIDDistribution.GAUSSIAN))


def test_fourth_moment_monte_carlo_agrees():
    """The sample mean of x'^4 lands within 5 standard errors of the expansion."""
    demo = fourth_moment_drift_demo(0.1, 1.0, n_draws=200_000, rng=np.random.default_rng(1))

    assert demo.exact == pytest.approx(0.6561 + 0.0972 + 0.0072 + 0.0006)
    assert demo.passed, f"z = {demo.z_score}"
    assert demo.to_dict()["terms"]["cubic"] == pytest.approx(0.0072)


@pytest.mark.parametrize("kind", [OracleKind.NORM_POWER, OracleKind.SCALAR_POWER])
def test_inequality_oracles_find_no_violations(kind):
    """Random searches over the power inequalities pass."""
    result = run_oracle(kind, 20_000, seed=3)

    assert result.passed
    assert result.trials == 20_000
    assert result.worst_margin >= -result.tolerance


def test_projection_drift_oracle_matches_reference():
    """Worst excess equals 2 c D^p / alpha^p and stays bounded across steps."""
    result = run_oracle(OracleKind.PROJECTION_DRIFT, 500, seed=0)

    assert result.passed
    assert result.worst_margin == pytest.approx(result.details["reference_excess"], rel=1e-9)


def test_fourth_moment_oracle_passes():
    """The oracle wraps the expansion check."""
    result = run_oracle("fourth_moment", 100_000, seed=7)

    assert result.passed
    assert result.name == "fourth_moment"
    assert set(result.details["terms"]) == {"quartic", "quadratic", "cubic", "constant"}


def test_run_oracle_validation():
    """Trial counts must be positive and names known."""
    with pytest.raises(ValueError):
        run_oracle(OracleKind.NORM_POWER, 0)
    with pytest.raises(ValueError):
        run_oracle("triangle", 10)
