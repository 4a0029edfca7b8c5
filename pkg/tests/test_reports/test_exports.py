"""Tests for CSV, JSON and SVG artifacts."""

import json
import math

import pytest

from src.config.scenario import parse_scenario
from src.engine import Outcome, TrajectoryRecord, phase_scan
from src.reports import (
    FORMAT_VERSION,
    export_to_json,
    format_float,
    plot_phase,
    plot_u_vs_k,
    summary_document,
    write_phase_csv,
    write_trajectories_csv,
)

SCAN = {
    "name": "scan",
    "operator": {"family": "contractive", "gamma": 0.5, "target": [0.0]},
    "noise": {"family": "three_point", "p": 1.6, "c": 0.5},
    "schedule": {"kind": "polynomial", "alpha": 0.1, "K": 1, "xi": 0.8},
    "horizon": 20,
    "n_trajectories": 2,
    "x0": [1.0],
}


def make_record(trajectory_id, checkpoints):
    return TrajectoryRecord(
        trajectory_id=trajectory_id,
        checkpoints=checkpoints,
        jump_events=0,
        noise_firings=0,
        tail_sup=0.0,
        upcrossings=0,
        final_state=[0.0],
        u0=1.0,
        epsilon=0.1,
        outcome=Outcome.CONVERGED,
    )


@pytest.mark.parametrize(
    "value, text",
    [
        (0.1, "0.10000000000000001"),
        (1.0, "1"),
        (1e-20, "9.9999999999999995e-21"),
        (math.inf, "inf"),
        (-math.inf, "-inf"),
        (math.nan, "nan"),
        (None, ""),
    ],
)
def test_format_float(value, text):
    """17 significant digits, spelled-out non-finite values, empty for None."""
    assert format_float(value) == text


def test_float_text_round_trips():
    """Parsing the text gives back the same double."""
    for value in (1 / 3, 2.0**-40, 12.090146129863428):
        assert float(format_float(value)) == value


def test_trajectories_csv_layout(tmp_path):
    """Header, one row per checkpoint and Unix line endings."""
    path = tmp_path / "run.trajectories.csv"
    records = [make_record(0, [(0, 1.0), (1, 0.5)]), make_record(1, [(0, 2.0), (1, math.inf)])]

    rows = write_trajectories_csv(records, path)

    assert rows == 4
    assert path.read_bytes() == b"trajectory_id,k,u\n0,0,1\n0,1,0.5\n1,0,2\n1,1,inf\n"


def test_phase_csv_and_json(tmp_path):
    """Phase rows carry the admissibility column; JSON is strict with a version."""
    rows = phase_scan(parse_scenario(SCAN), xi_list=[0.5, 1.0])
    csv_path = tmp_path / "scan.phase.csv"
    json_path = tmp_path / "scan.phase.json"

    write_phase_csv(rows, csv_path)
    export_to_json(summary_document("phase_scan", {"rows": [r.to_dict() for r in rows]}), json_path)

    lines = csv_path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "xi,admissible,converged_fraction,mean_jumps,analytic_jumps"
    assert lines[1].startswith("0.5,false,")
    assert lines[2].startswith("1,true,")

    document = json.loads(json_path.read_text(encoding="utf-8"))
    assert document["format_version"] == FORMAT_VERSION
    assert document["kind"] == "phase_scan"
    assert [row["admissible"] for row in document["rows"]] == [False, True]
    assert json_path.read_bytes().endswith(b"}\n")


def test_json_export_writes_null_for_non_finite(tmp_path):
    """Infinite quantiles are written as null."""
    path = tmp_path / "summary.json"
    export_to_json(summary_document("run", {"tail_sup": {"q95": math.inf}}), path)

    assert json.loads(path.read_text(encoding="utf-8"))["tail_sup"] == {"q95": None}


def test_u_vs_k_svg_is_deterministic(tmp_path):
    """The same curve gives byte-identical SVG, zero and infinite points included."""
    curve = [
        {"k": 0, "q25": 1.0, "q50": 2.0, "q75": 3.0},
        {"k": 10, "q25": 0.1, "q50": 0.5, "q75": math.inf},
        {"k": 99, "q25": 0.0, "q50": 0.01, "q75": 0.02},
    ]
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"

    plot_u_vs_k(curve, first, title="curve")
    plot_u_vs_k(curve, second, title="curve")

    content = first.read_bytes()
    assert content == second.read_bytes()
    assert content.lstrip().startswith(b"<?xml")
    assert b"<svg" in content
    assert b"<dc:date>" not in content


def test_phase_svg_is_deterministic(tmp_path):
    """Phase charts are reproducible as well."""
    rows = phase_scan(parse_scenario(SCAN), xi_list=[0.5, 1.0])
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"

    plot_phase(rows, first, p=1.6, title="scan")
    plot_phase(rows, second, p=1.6, title="scan")

    assert first.read_bytes() == second.read_bytes()
