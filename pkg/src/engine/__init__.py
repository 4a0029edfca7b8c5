"""Trajectory simulation, ensembles and experiment drivers."""

from .ensemble import (
    EnsembleReport,
    checkpoint_curve,
    resolve_parallelism,
    run_chunk,
    run_ensemble,
    summarize_records,
)
from .scenarios import PhaseRow, phase_scan, slln_scenario
from .trajectory import (
    BLOCK_SIZE,
    Outcome,
    TrajectoryRecord,
    checkpoint_indices,
    classify_outcome,
    run_trajectory,
    simulate_batch,
    tail_start,
)

__all__ = [
    "BLOCK_SIZE",
    "EnsembleReport",
    "Outcome",
    "PhaseRow",
    "TrajectoryRecord",
    "checkpoint_curve",
    "checkpoint_indices",
    "classify_outcome",
    "phase_scan",
    "resolve_parallelism",
    "run_chunk",
    "run_ensemble",
    "run_trajectory",
    "simulate_batch",
    "slln_scenario",
    "summarize_records",
    "tail_start",
]
