"""Monte Carlo ensembles of SA trajectories.

Trajectory ids are split into contiguous chunks. Each chunk is simulated in one
process, which rebuilds the scenario components from the (picklable) config.
Records are reduced in id order, so the report does not depend on the number
of workers.
"""

import concurrent.futures as cf
import logging
import math
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.config.scenario import ScenarioConfig
from src.engine.trajectory import Outcome, TrajectoryRecord, simulate_batch
from src.noise.models import UnsupportedNoiseError, expected_jump_count
from src.noise.streams import StreamPurpose, trajectory_stream
from src.schedules.step_size import Summability, classify_summability
from src.utils.statistics import quantile_summary, standard_error, wilson_confidence_interval

logger = logging.getLogger(__name__)

# Trajectories stepped together in one vectorised batch
BATCH_TRAJECTORIES = 256


@dataclass
class EnsembleReport:
    """Aggregate diagnostics of an ensemble.

    Attributes:
        scenario: Scenario descriptor
        n_trajectories: Ensemble size
        horizon: Steps per trajectory
        base_seed: Seed the streams were derived from
        converged_fraction: Share of trajectories with outcome converged
        converged_interval: Wilson 95% interval on converged_fraction
        diverged_fraction: Share diverged (finite or not)
        outcome_counts: Trajectories per outcome
        tail_sup_quantiles: Quantiles of tail_sup
        final_distance_quantiles: Quantiles of u_N
        mean_jumps: Mean jump events per trajectory
        jumps_stderr: Standard error of mean_jumps
        mean_firings: Mean nonzero noise draws per trajectory
        expected_jump_count: Analytic mean firings (three-point noise only)
        moment_order: p used for the admissibility verdict
        summability: Verdict for the schedule at p (None without noise)
        checkpoint_curve: Per checkpoint k, the q25/q50/q75 of u_k
        records: Per-trajectory records, in id order
    """

    scenario: Dict[str, Any]
    n_trajectories: int
    horizon: int
    base_seed: int
    converged_fraction: float
    converged_interval: List[float]
    diverged_fraction: float
    outcome_counts: Dict[str, int]
    tail_sup_quantiles: Dict[str, float]
    final_distance_quantiles: Dict[str, float]
    mean_jumps: float
    jumps_stderr: float
    mean_firings: float
    expected_jump_count: Optional[float]
    moment_order: Optional[float]
    summability: Optional[Summability]
    checkpoint_curve: List[Dict[str, float]]
    records: List[TrajectoryRecord] = field(default_factory=list, repr=False)

    @property
    def admissible(self) -> Optional[bool]:
        """Schedule admissibility at the moment order, None without noise."""
        return None if self.summability is None else self.summability.admissible

    def to_dict(self) -> Dict[str, Any]:
        """Summary without the per-trajectory records."""
        return {
            "scenario": self.scenario,
            "n_trajectories": self.n_trajectories,
            "horizon": self.horizon,
            "base_seed": self.base_seed,
            "converged_fraction": self.converged_fraction,
            "converged_interval": self.converged_interval,
            "diverged_fraction": self.diverged_fraction,
            "outcome_counts": self.outcome_counts,
            "tail_sup_quantiles": self.tail_sup_quantiles,
            "final_distance_quantiles": self.final_distance_quantiles,
            "mean_jumps": self.mean_jumps,
            "jumps_stderr": self.jumps_stderr,
            "mean_firings": self.mean_firings,
            "expected_jump_count": self.expected_jump_count,
            "moment_order": self.moment_order,
            "summability": None if self.summability is None else self.summability.to_dict(),
            "admissible": self.admissible,
            "checkpoint_curve": self.checkpoint_curve,
        }


def run_chunk(config: ScenarioConfig, trajectory_ids: Sequence[int]) -> List[TrajectoryRecord]:
    """Simulate the given trajectory ids of a scenario.

    Module-level so that it can be shipped to worker processes.
    """
    op = config.build_operator()
    noise = config.build_noise(op)
    schedule = config.build_schedule()
    x0 = config.initial_state(op)
    records: List[TrajectoryRecord] = []
    for start in range(0, len(trajectory_ids), BATCH_TRAJECTORIES):
        ids = list(trajectory_ids[start : start + BATCH_TRAJECTORIES])
        streams = [trajectory_stream(config.seed, i, StreamPurpose.NOISE) for i in ids]
        records.extend(
            simulate_batch(
                op, noise, schedule, x0, config.horizon, config.diagnostics, streams, ids
            )
        )
        logger.debug(f"{config.name}: trajectories {ids[0]}..{ids[-1]} done")
    return records


def _chunks(n: int, parts: int) -> List[List[int]]:
    size = math.ceil(n / parts)
    return [list(range(start, min(n, start + size))) for start in range(0, n, size)]


def resolve_parallelism(parallelism: int) -> int:
    """Worker count: 0 means one per CPU."""
    if parallelism < 0:
        raise ValueError(f"parallelism must be >= 0, got {parallelism}")
    if parallelism == 0:
        return os.cpu_count() or 1
    return parallelism


def checkpoint_curve(records: Sequence[TrajectoryRecord]) -> List[Dict[str, float]]:
    """Median and interquartile band of u_k at each checkpoint."""
    curve = []
    for column in zip(*(record.checkpoints for record in records)):
        summary = quantile_summary([u for _, u in column], levels=(0.25, 0.5, 0.75))
        curve.append({"k": column[0][0], **summary})
    return curve


def summarize_records(
    config: ScenarioConfig, records: Sequence[TrajectoryRecord]
) -> EnsembleReport:
    """Aggregate trajectory records into an EnsembleReport.

    Args:
        config: Scenario the records came from
        records: Records in trajectory id order

    Returns:
        EnsembleReport
    """
    n = len(records)
    counts = {outcome.value: 0 for outcome in Outcome}
    for record in records:
        counts[record.outcome.value] += 1
    converged = counts[Outcome.CONVERGED.value]
    diverged = counts[Outcome.DIVERGED.value] + counts[Outcome.DIVERGED_NONFINITE.value]
    jumps = [float(record.jump_events) for record in records]

    schedule = config.build_schedule()
    p = config.moment_order()
    summability = None if p is None else classify_summability(schedule, p)
    if summability is not None and not summability.admissible:
        logger.warning(
            f"{config.name}: schedule xi={schedule.xi} is not admissible at p={p}; "
            "no convergence claim"
        )

    noise = config.build_noise()
    try:
        analytic_jumps: Optional[float] = expected_jump_count(noise, config.horizon)
    except UnsupportedNoiseError:
        analytic_jumps = None

    return EnsembleReport(
        scenario=config.to_dict(),
        n_trajectories=n,
        horizon=config.horizon,
        base_seed=config.seed,
        converged_fraction=converged / n,
        converged_interval=list(wilson_confidence_interval(converged, n)),
        diverged_fraction=diverged / n,
        outcome_counts=counts,
        tail_sup_quantiles=quantile_summary([record.tail_sup for record in records]),
        final_distance_quantiles=quantile_summary(
            [record.final_distance for record in records]
        ),
        mean_jumps=float(np.mean(jumps)),
        jumps_stderr=standard_error(jumps),
        mean_firings=float(np.mean([record.noise_firings for record in records])),
        expected_jump_count=analytic_jumps,
        moment_order=p,
        summability=summability,
        checkpoint_curve=checkpoint_curve(records),
        records=list(records),
    )


def run_ensemble(
    config: ScenarioConfig,
    n_trajectories: Optional[int] = None,
    base_seed: Optional[int] = None,
    parallelism: int = 1,
) -> EnsembleReport:
    """Run a scenario's ensemble and aggregate it.

    Args:
        config: Validated scenario
        n_trajectories: Overrides the scenario's ensemble size
        base_seed: Overrides the scenario's seed
        parallelism: Worker processes (1 runs in-process, 0 uses every CPU)

    Returns:
        EnsembleReport, identical for every parallelism

    Raises:
        ValueError: If n_trajectories < 1 or parallelism < 0
    """
    config = config.with_overrides(seed=base_seed, n_trajectories=n_trajectories)
    if config.n_trajectories < 1:
        raise ValueError(f"n_trajectories must be >= 1, got {config.n_trajectories}")
    workers = min(resolve_parallelism(parallelism), config.n_trajectories)
    logger.info(
        f"Running {config.name}: {config.n_trajectories} trajectories x {config.horizon} steps, "
        f"seed={config.seed}, workers={workers}"
    )

    chunks = _chunks(config.n_trajectories, workers)
    if workers == 1:
        records = run_chunk(config, chunks[0])
    else:
        with cf.ProcessPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(run_chunk, config, chunk) for chunk in chunks]
            results = [future.result() for future in futures]
        records = [record for chunk_records in results for record in chunk_records]
    records.sort(key=lambda record: record.trajectory_id)

    report = summarize_records(config, records)
    logger.info(
        f"Finished {config.name}: converged={report.converged_fraction:.3f}, "
        f"mean_jumps={report.mean_jumps:.3f}"
    )
    return report
