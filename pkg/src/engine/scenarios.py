"""Experiment drivers built on run_ensemble: the xi phase scan and strong-law runs."""

import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Mapping, Optional, Sequence

from src.config.scenario import ConfigError, DiagnosticsConfig, ScenarioConfig
from src.engine.ensemble import EnsembleReport, run_ensemble
from src.noise.models import NoiseFamily
from src.schedules.step_size import classify_summability

logger = logging.getLogger(__name__)


@dataclass
class PhaseRow:
    """One xi cell of a phase scan."""

    xi: float
    admissible: Optional[bool]
    converged_fraction: float
    mean_jumps: float
    jumps_stderr: float
    analytic_jumps: Optional[float]
    report: EnsembleReport

    @property
    def jumps_z_score(self) -> Optional[float]:
        """|mean_jumps - analytic| in standard errors (None without an analytic mean)."""
        if self.analytic_jumps is None:
            return None
        gap = abs(self.mean_jumps - self.analytic_jumps)
        if self.jumps_stderr == 0.0:
            return 0.0 if gap == 0.0 else math.inf
        return gap / self.jumps_stderr

    def to_dict(self) -> Dict[str, Any]:
        """Row of the phase table plus the cell's summary."""
        return {
            "xi": self.xi,
            "admissible": self.admissible,
            "converged_fraction": self.converged_fraction,
            "mean_jumps": self.mean_jumps,
            "jumps_stderr": self.jumps_stderr,
            "analytic_jumps": self.analytic_jumps,
            "summary": self.report.to_dict(),
        }


def phase_scan(
    config: ScenarioConfig,
    xi_list: Optional[Sequence[float]] = None,
    p: Optional[float] = None,
    n_trajectories: Optional[int] = None,
    horizon: Optional[int] = None,
    base_seed: Optional[int] = None,
    parallelism: int = 1,
) -> List[PhaseRow]:
    """Run the scenario once per decay exponent xi.

    Every cell uses the same base seed, so cells differ only through xi.

    Args:
        config: Scenario (its schedule, and a three-point noise, are re-keyed per xi)
        xi_list: Exponents in (0, 1]; defaults to the scenario's xi_list
        p: Moment order for the admissibility column (default: the scenario's)
        n_trajectories: Trajectories per cell
        horizon: Steps per trajectory
        base_seed: Seed shared by all cells
        parallelism: Worker processes per cell

    Returns:
        One PhaseRow per xi, in input order

    Raises:
        ConfigError: If no xi list is available or an xi is outside (0, 1]
    """
    xis = list(xi_list) if xi_list is not None else config.xi_list
    if not xis:
        raise ConfigError("xi_list: a phase scan needs at least one xi")
    for xi in xis:
        if not 0 < xi <= 1:
            raise ConfigError(f"xi_list: xi must be in (0, 1], got {xi}")
    if horizon is not None:
        config = replace(config, horizon=horizon)
    if p is not None:
        config = replace(config, diagnostics=replace(config.diagnostics, p=p))

    rows = []
    for xi in xis:
        cell = config.with_xi(xi)
        cell.validate()
        report = run_ensemble(cell, n_trajectories, base_seed, parallelism)
        rows.append(
            PhaseRow(
                xi=float(xi),
                admissible=report.admissible,
                converged_fraction=report.converged_fraction,
                mean_jumps=report.mean_jumps,
                jumps_stderr=report.jumps_stderr,
                analytic_jumps=report.expected_jump_count,
                report=report,
            )
        )
        logger.info(
            f"xi={xi}: admissible={report.admissible}, "
            f"converged={report.converged_fraction:.3f}, mean_jumps={report.mean_jumps:.3f}"
        )
    return rows


def slln_scenario(
    distribution: Mapping[str, Any],
    mu: float,
    schedule: Mapping[str, Any],
    N: int,
    n_trajectories: int = 1,
    base_seed: int = 0,
    parallelism: int = 1,
    diagnostics: Optional[DiagnosticsConfig] = None,
    name: str = "slln",
) -> EnsembleReport:
    """Weighted strong-law recursion X_{n+1} = X_n + alpha_n (Z_n - X_n).

    Z_n = mu + w_n with w_n drawn from the centered i.i.d. law, and X_0 = 0, so
    X_1 = Z_0 exactly when alpha_0 = 1 (alpha_n = 1/(n+1) gives the sample mean).

    Args:
        distribution: iid noise fragment (distribution, p, and its parameters)
        mu: Mean of Z
        schedule: Schedule fragment
        N: Horizon
        n_trajectories: Ensemble size
        base_seed: Seed
        parallelism: Worker processes
        diagnostics: Tolerances (default: absolute epsilon 0.1)
        name: Scenario name

    Returns:
        EnsembleReport whose distances are |X_N - mu|

    Raises:
        ConfigError: If the distribution fragment is not an iid law
    """
    fragment = dict(distribution)
    fragment.setdefault("family", NoiseFamily.IID.value)
    if fragment["family"] != NoiseFamily.IID.value:
        raise ConfigError(
            f"noise.family: the strong-law runner needs iid noise, got {fragment['family']!r}"
        )

    config = ScenarioConfig(
        name=name,
        description="Weighted strong law of large numbers",
        operator={"family": "constant_mean", "mu": [float(mu)]},
        noise=fragment,
        schedule=dict(schedule),
        horizon=N,
        n_trajectories=n_trajectories,
        seed=base_seed,
        x0=[0.0],
        diagnostics=diagnostics if diagnostics is not None else DiagnosticsConfig(epsilon=0.1),
    )
    config.validate()

    step = config.build_schedule()
    if step.value(0) != 1.0:
        logger.warning(f"{name}: alpha_0 = {step.value(0)} != 1, so X_1 != Z_0")
    p = config.moment_order()
    if p is not None and not classify_summability(step, p).admissible:
        logger.warning(f"{name}: xi={step.xi} at p={p} is outside the strong-law regime")
    return run_ensemble(config, parallelism=parallelism)
