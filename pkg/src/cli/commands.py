"""Command implementations behind the sa-lab entry point.

Each command returns a process exit status and is the only place where
exceptions are turned into codes: 0 success, 1 I/O failure, 2 invalid
configuration or input, 3 certification or oracle violation.
"""

import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

from src.config.scenario import ConfigError, ScenarioConfig, load_scenario
from src.engine.ensemble import run_ensemble
from src.engine.scenarios import phase_scan
from src.lyapunov.certify import (
    DegenerateRegionError,
    SamplingRegion,
    certify_drift,
    search_quadratic_violations,
    selector_lmi_report,
)
from src.lyapunov.inequalities import ZeroBaseError
from src.lyapunov.oracles import OracleKind, run_oracle
from src.noise.models import (
    DimensionMismatchError,
    NoiseConfigError,
    UnavailableMomentError,
    UnsupportedNoiseError,
)
from src.noise.streams import StreamPurpose, trajectory_stream
from src.operators.base import OperatorError, SelectorControlOperator
from src.reports.csv_export import write_phase_csv, write_trajectories_csv
from src.reports.json_export import export_to_json, summary_document
from src.reports.svg_plot import plot_phase, plot_u_vs_k
from src.schedules.step_size import ScheduleError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_VIOLATION = 3

PathLike = Union[str, Path]

# Errors raised for invalid user input; anything else is a defect and propagates
INPUT_ERRORS = (
    ConfigError,
    ScheduleError,
    OperatorError,
    NoiseConfigError,
    DimensionMismatchError,
    UnavailableMomentError,
    UnsupportedNoiseError,
    DegenerateRegionError,
    ZeroBaseError,
)


def _guarded(action: Callable[[], int]) -> int:
    """Run a command body and map its exceptions to exit codes."""
    try:
        return action()
    except INPUT_ERRORS as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        return EXIT_IO


def _prepare_output(out_dir: PathLike) -> Path:
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load(config_path: PathLike, seed: Optional[int]) -> ScenarioConfig:
    return load_scenario(config_path).with_overrides(seed=seed)


def cmd_run(
    config_path: PathLike, out_dir: PathLike, seed: Optional[int] = None, threads: int = 1
) -> int:
    """Run a scenario ensemble.

    Writes <name>.trajectories.csv, <name>.summary.json and <name>.u_vs_k.svg.
    """

    def action() -> int:
        config = _load(config_path, seed)
        out = _prepare_output(out_dir)
        report = run_ensemble(config, parallelism=threads)

        write_trajectories_csv(report.records, out / f"{config.name}.trajectories.csv")
        export_to_json(
            summary_document("ensemble", report.to_dict()), out / f"{config.name}.summary.json"
        )
        plot_u_vs_k(report.checkpoint_curve, out / f"{config.name}.u_vs_k.svg", config.name)

        logger.info(
            f"{config.name}: converged_fraction={report.converged_fraction:.3f} "
            f"(95% CI {report.converged_interval[0]:.3f}-{report.converged_interval[1]:.3f}), "
            f"mean_jumps={report.mean_jumps:.3f} +/- {report.jumps_stderr:.3f}"
        )
        return EXIT_OK

    return _guarded(action)


def cmd_phase_scan(
    config_path: PathLike,
    out_dir: PathLike,
    xi_list: Optional[Sequence[float]] = None,
    seed: Optional[int] = None,
    threads: int = 1,
) -> int:
    """Run a scenario across decay exponents.

    Writes <name>.phase.csv, <name>.phase.json and <name>.phase.svg.
    """

    def action() -> int:
        config = _load(config_path, seed)
        if xi_list is not None and len(xi_list) == 0:
            raise ConfigError("--xi: the list of exponents is empty")
        out = _prepare_output(out_dir)
        rows = phase_scan(config, xi_list=xi_list, parallelism=threads)

        p = config.moment_order()
        write_phase_csv(rows, out / f"{config.name}.phase.csv")
        export_to_json(
            summary_document(
                "phase_scan", {"moment_order": p, "rows": [row.to_dict() for row in rows]}
            ),
            out / f"{config.name}.phase.json",
        )
        plot_phase(rows, out / f"{config.name}.phase.svg", p=p, title=config.name)

        for row in rows:
            logger.info(
                f"xi={row.xi:.4g} admissible={row.admissible} "
                f"converged={row.converged_fraction:.3f} mean_jumps={row.mean_jumps:.3f} "
                f"analytic={row.analytic_jumps}"
            )
        return EXIT_OK

    return _guarded(action)


def cmd_certify(config_path: PathLike, out_dir: PathLike, seed: Optional[int] = None) -> int:
    """Certify the scenario's Lyapunov candidate against its operator.

    Writes <name>.certificate.json; exit 3 when any sampled point violates the
    negative drift condition.
    """

    def action() -> int:
        config = _load(config_path, seed)
        out = _prepare_output(out_dir)
        op = config.build_operator()
        phi = config.build_lyapunov(op)
        settings = config.certification
        region = SamplingRegion(r_min=settings.r_min, radius=settings.radius)
        rng = trajectory_stream(config.seed, 0, StreamPurpose.SAMPLING)

        certificate = certify_drift(op, phi, region, settings.samples, rng)
        document: Dict[str, Any] = {"scenario": config.name, "certificate": certificate.to_dict()}
        if settings.quadratic_search > 0:
            document["quadratic_search"] = search_quadratic_violations(
                op, n_matrices=settings.quadratic_search, rng=rng
            )
        if isinstance(op, SelectorControlOperator):
            document["lmi"] = selector_lmi_report(op)
        export_to_json(
            summary_document("certificate", document), out / f"{config.name}.certificate.json"
        )

        if not certificate.passed:
            logger.error(
                f"{config.name}: {certificate.violation_count} drift violations, "
                f"eta_hat={certificate.eta_hat:.6g}"
            )
            for violation in certificate.violations:
                logger.error(f"  x={violation['point']} ratio={violation['ratio']:.6g}")
            return EXIT_VIOLATION
        logger.info(f"{config.name}: certified, eta_hat={certificate.eta_hat:.6g}")
        return EXIT_OK

    return _guarded(action)


def cmd_oracle(which: str, trials: int, seed: int = 0, out_dir: Optional[PathLike] = None) -> int:
    """Run one inequality oracle; exit 3 on a violation beyond tolerance."""

    def action() -> int:
        try:
            kind = OracleKind(which)
        except ValueError:
            choices = ", ".join(option.value for option in OracleKind)
            raise ConfigError(f"--which: unknown oracle {which!r} (expected {choices})")
        if trials < 1:
            raise ConfigError(f"--trials: must be >= 1, got {trials}")
        result = run_oracle(kind, trials, seed=seed)
        if out_dir is not None:
            out = _prepare_output(out_dir)
            export_to_json(
                summary_document("oracle", result.to_dict()), out / f"{kind.value}.oracle.json"
            )

        print(
            f"{result.name}: trials={result.trials} worst_margin={result.worst_margin:.6g} "
            f"violations={result.violations}"
        )
        if kind == OracleKind.FOURTH_MOMENT:
            for term, value in result.details["terms"].items():
                print(f"  {term}: {value:.10g}")
        return EXIT_OK if result.passed else EXIT_VIOLATION

    return _guarded(action)


def parse_xi_list(text: str) -> List[float]:
    """Comma-separated exponents, e.g. "0.5,0.625,0.8"."""
    items = [item.strip() for item in text.split(",") if item.strip()]
    try:
        return [float(item) for item in items]
    except ValueError:
        raise ConfigError(f"--xi: expected comma-separated numbers, got {text!r}")
