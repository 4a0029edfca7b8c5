"""Integration tests for the scenario files shipped under configs/scenarios.

Every file must load and validate; short runs of each scenario exercise the
whole path from file to report.
"""

import json
from dataclasses import replace
from pathlib import Path

import pytest

from src.cli import EXIT_OK, cmd_run
from src.config.scenario import load_scenario
from src.engine import Outcome, run_ensemble, slln_scenario
from src.noise import NoiseFamily
from src.reports import summary_document

CONFIG_DIR = Path(__file__).resolve().parents[2] / "configs" / "scenarios"
SCENARIO_FILES = sorted(CONFIG_DIR.glob("*.json"))


def test_scenario_directory_is_populated():
    """The selector-control ladder and the certification inputs are shipped."""
    names = {path.stem for path in SCENARIO_FILES}

    for xi in ("05", "0625", "08", "10"):
        assert f"selector_control_xi{xi}" in names
    assert {"certify_contractive", "certify_selector_piecewise", "hurwitz_phase"} <= names


@pytest.mark.parametrize("path", SCENARIO_FILES, ids=lambda path: path.stem)
def test_scenario_loads(path):
    """Each file parses, validates and is named after itself."""
    config = load_scenario(path)

    assert config.name == path.stem
    assert config.horizon >= 1


@pytest.mark.parametrize("path", SCENARIO_FILES, ids=lambda path: path.stem)
def test_short_run_of_each_scenario(path):
    """A few hundred steps of two trajectories run to a strict-JSON summary."""
    config = load_scenario(path)
    short = replace(config, horizon=min(config.horizon, 300), n_trajectories=2)
    report = run_ensemble(short)

    assert len(report.records) == 2
    json.dumps(summary_document("ensemble", report.to_dict()), allow_nan=False)


def test_selector_ladder_shares_everything_but_xi():
    """The four ladder files differ only in name and decay exponent."""
    configs = [
        load_scenario(CONFIG_DIR / f"selector_control_xi{xi}.json")
        for xi in ("05", "0625", "08", "10")
    ]

    assert [config.schedule["xi"] for config in configs] == [0.5, 0.625, 0.8, 1.0]
    assert all(config.operator == configs[0].operator for config in configs)
    assert all(config.seed == configs[0].seed for config in configs)
    assert all(config.noise["family"] == NoiseFamily.THREE_POINT.value for config in configs)


def test_selector_ladder_admissibility(tmp_path):
    """The summary flags xi = 0.8 as admissible at p = 1.6 and xi = 0.5 as not."""
    for xi, admissible in (("05", False), ("08", True)):
        path = tmp_path / f"ladder_{xi}.json"
        data = json.loads((CONFIG_DIR / f"selector_control_xi{xi}.json").read_text("utf-8"))
        data.update(horizon=200, n_trajectories=2)
        path.write_text(json.dumps(data), encoding="utf-8")

        assert cmd_run(path, tmp_path / "out") == EXIT_OK
        summary_path = tmp_path / "out" / f"{data['name']}.summary.json"
        summary = json.loads(summary_path.read_text(encoding="utf-8"))
        assert summary["admissible"] is admissible


def test_slln_pareto_scenario_runs():
    """The heavy-tailed strong-law file drives the strong-law runner."""
    config = load_scenario(CONFIG_DIR / "slln_pareto.json")
    report = slln_scenario(
        config.noise,
        config.operator["mu"][0],
        config.schedule,
        1000,
        n_trajectories=2,
        base_seed=config.seed,
        diagnostics=config.diagnostics,
    )

    assert report.n_trajectories == 2
    assert report.admissible is True
    for record in report.records:
        assert record.outcome != Outcome.DIVERGED_NONFINITE


@pytest.mark.slow
def test_slln_pareto_ensemble_settles_at_full_horizon():
    """10^6 steps of 50 trajectories: typical errors are well inside epsilon and none diverge.

    Isolated draws above 0.1 / alpha_n still push about a quarter of the trajectories
    past epsilon inside the tail window at this horizon, so the converged share is
    checked against one half.
    """
    config = load_scenario(CONFIG_DIR / "slln_pareto.json")
    report = slln_scenario(
        config.noise,
        config.operator["mu"][0],
        config.schedule,
        config.horizon,
        n_trajectories=config.n_trajectories,
        base_seed=config.seed,
        diagnostics=config.diagnostics,
    )

    assert report.horizon == 1_000_000
    assert report.n_trajectories == 50
    assert report.admissible is True
    assert report.diverged_fraction == 0.0
    assert report.final_distance_quantiles["q50"] <= config.diagnostics.epsilon
    assert report.converged_fraction >= 0.5
