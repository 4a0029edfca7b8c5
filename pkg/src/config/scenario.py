"""Scenario files and the fragment builders behind them.

A scenario is a strict JSON document: every object accepts only the keys listed
here, and anything else is rejected with the dotted path of the offending
field. Builders turn the validated fragments into schedules, operators, noise
models and Lyapunov candidates.
"""

import copy
import json
import logging
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Union

import numpy as np

from src.lyapunov.functions import (
    LyapunovFunction,
    LyapunovKind,
    PiecewiseQuadratic,
    WeightedQuadratic,
    power_transform,
    quadratic_from_lyapunov_equation,
)
from src.noise.models import (
    IIDCentered,
    IIDDistribution,
    NoiseFamily,
    NoiseModel,
    ThreePointMDS,
    ZeroNoise,
    wrap_multiplicative,
)
from src.noise.streams import MAX_SEED
from src.operators.base import AffineOperator, Operator, OperatorFamily
from src.operators.zoo import (
    NonexpansiveKind,
    PLKind,
    make_constant_mean,
    make_contractive_affine,
    make_hurwitz_linear,
    make_nonexpansive,
    make_pl_gradient,
    make_selector_control,
)
from src.schedules.step_size import ScheduleKind, StepSchedule

logger = logging.getLogger(__name__)

SCENARIO_KEYS = {
    "name",
    "description",
    "operator",
    "noise",
    "schedule",
    "horizon",
    "n_trajectories",
    "seed",
    "x0",
    "diagnostics",
    "lyapunov",
    "certification",
    "xi_list",
}
REQUIRED_KEYS = {"name", "operator", "schedule", "horizon"}

OPERATOR_KEYS = {
    OperatorFamily.CONTRACTIVE_AFFINE: {"gamma", "target", "weights"},
    OperatorFamily.HURWITZ_LINEAR: {"A", "b"},
    OperatorFamily.SELECTOR_CONTROL: {"A", "B", "k1", "k2"},
    OperatorFamily.PL_GRADIENT: {"kind", "curvature", "step", "target", "rotation_seed"},
    OperatorFamily.NONEXPANSIVE: {"kind", "L", "eta", "dim", "rank"},
    OperatorFamily.CONSTANT_MEAN: {"mu"},
}
NOISE_KEYS = {
    NoiseFamily.ZERO: set(),
    NoiseFamily.THREE_POINT: {"alpha", "K", "xi", "p", "c", "direction"},
    NoiseFamily.IID: {"distribution", "p", "sigma", "tail", "nu", "scale", "direction"},
    NoiseFamily.MULTIPLICATIVE: {"lambda", "base"},
}
SCHEDULE_KEYS = {"kind", "alpha", "K", "xi"}
LYAPUNOV_KEYS = {
    "weighted_quadratic": {"P"},
    "piecewise_quadratic": {"P", "eta", "k"},
    "lyapunov_equation": {"Q"},
    "power_transform": {"base", "p"},
}
DIAGNOSTICS_KEYS = {
    "epsilon",
    "epsilon_relative",
    "jump_threshold",
    "tail_fraction",
    "D",
    "p",
    "divergence_factor",
}
CERTIFICATION_KEYS = {"samples", "r_min", "radius", "quadratic_search"}


class ConfigError(ValueError):
    """Raised for malformed or invalid scenario files."""

    pass


@dataclass(frozen=True)
class DiagnosticsConfig:
    """Per-trajectory diagnostics.

    Attributes:
        epsilon: Absolute convergence tolerance on tail_sup; None means
            epsilon_relative * (1 + u_0)
        epsilon_relative: Relative tolerance used when epsilon is None
        jump_threshold: Noise displacement alpha_k ||w_k|| that counts as a jump event
        tail_fraction: Fraction of the horizon forming the tail window
        D: Lower edge of the upcrossing band [D, 2D]
        p: Moment order for summability classification (None: the noise order)
        divergence_factor: tail_sup above divergence_factor * (1 + u_0) is divergence
    """

    epsilon: Optional[float] = None
    epsilon_relative: float = 0.05
    jump_threshold: float = 4.0
    tail_fraction: float = 0.1
    D: float = 1.0
    p: Optional[float] = None
    divergence_factor: float = 10.0

    def __post_init__(self) -> None:
        """Validate ranges."""
        if self.epsilon is not None and not self.epsilon > 0:
            raise ConfigError(f"diagnostics.epsilon must be > 0, got {self.epsilon}")
        if not self.epsilon_relative > 0:
            raise ConfigError(
                f"diagnostics.epsilon_relative must be > 0, got {self.epsilon_relative}"
            )
        if not self.jump_threshold > 0:
            raise ConfigError(
                f"diagnostics.jump_threshold must be > 0, got {self.jump_threshold}"
            )
        if not 0 < self.tail_fraction <= 1:
            raise ConfigError(
                f"diagnostics.tail_fraction must be in (0, 1], got {self.tail_fraction}"
            )
        if not self.D > 0:
            raise ConfigError(f"diagnostics.D must be > 0, got {self.D}")
        if self.p is not None and not self.p > 1:
            raise ConfigError(f"diagnostics.p must be > 1, got {self.p}")

    def tolerance(self, u0: float) -> float:
        """Convergence tolerance for a trajectory starting at distance u0."""
        if self.epsilon is not None:
            return self.epsilon
        return self.epsilon_relative * (1.0 + u0)


@dataclass(frozen=True)
class CertificationConfig:
    """Sampling settings for drift certification."""

    samples: int = 100_000
    r_min: float = 1e-3
    radius: float = 10.0
    quadratic_search: int = 0


@dataclass
class ScenarioConfig:
    """Validated scenario.

    Fragments stay as plain dictionaries so a config can be shipped to worker
    processes and re-built there.
    """

    name: str
    operator: Dict[str, Any]
    schedule: Dict[str, Any]
    horizon: int
    noise: Dict[str, Any] = field(default_factory=lambda: {"family": "zero"})
    n_trajectories: int = 1
    seed: int = 0
    x0: Optional[List[float]] = None
    diagnostics: DiagnosticsConfig = field(default_factory=DiagnosticsConfig)
    description: str = ""
    lyapunov: Optional[Dict[str, Any]] = None
    certification: CertificationConfig = field(default_factory=CertificationConfig)
    xi_list: Optional[List[float]] = None

    def build_operator(self) -> Operator:
        """Operator described by the operator fragment."""
        return build_operator(self.operator)

    def build_schedule(self) -> StepSchedule:
        """Schedule described by the schedule fragment."""
        return build_schedule(self.schedule)

    def build_noise(self, op: Optional[Operator] = None) -> NoiseModel:
        """Noise model, sized to the operator and tied to its fixed point."""
        op = self.build_operator() if op is None else op
        center = None if op.fixed_point is None else op.fixed_point
        return build_noise(self.noise, op.dim, self.build_schedule(), center)

    def build_lyapunov(self, op: Optional[Operator] = None) -> LyapunovFunction:
        """Lyapunov candidate (default ||e||^2)."""
        op = self.build_operator() if op is None else op
        fragment = self.lyapunov or {"kind": "weighted_quadratic"}
        return build_lyapunov(fragment, op)

    def initial_state(self, op: Optional[Operator] = None) -> np.ndarray:
        """x0, or the origin when the scenario does not set it."""
        op = self.build_operator() if op is None else op
        if self.x0 is None:
            return np.zeros(op.dim)
        try:
            x0 = np.asarray(self.x0, dtype=float)
        except (TypeError, ValueError):
            raise ConfigError(f"x0: must be a list of numbers, got {self.x0!r}")
        if x0.shape != (op.dim,):
            raise ConfigError(f"x0 must have length {op.dim}, got {x0.shape}")
        return x0

    def moment_order(self) -> Optional[float]:
        """p used for summability: diagnostics.p, else the noise order."""
        if self.diagnostics.p is not None:
            return self.diagnostics.p
        fragment = self.noise
        if fragment.get("family") == NoiseFamily.MULTIPLICATIVE.value:
            fragment = fragment["base"]
        if fragment.get("family") == NoiseFamily.ZERO.value:
            return None
        return float(fragment.get("p", 2.0))

    def with_xi(self, xi: float) -> "ScenarioConfig":
        """Copy with the schedule decay exponent (and a three-point noise's) set to xi."""
        schedule = dict(self.schedule, xi=xi)
        noise = copy.deepcopy(self.noise)
        target = noise["base"] if noise.get("family") == NoiseFamily.MULTIPLICATIVE.value else noise
        if target.get("family") == NoiseFamily.THREE_POINT.value:
            target["xi"] = xi
        return replace(self, schedule=schedule, noise=noise)

    def with_overrides(
        self, seed: Optional[int] = None, n_trajectories: Optional[int] = None
    ) -> "ScenarioConfig":
        """Copy with command-line overrides applied."""
        updated = self
        if seed is not None:
            _check_seed(seed)
            updated = replace(updated, seed=seed)
        if n_trajectories is not None:
            updated = replace(updated, n_trajectories=n_trajectories)
        return updated

    def validate(self) -> None:
        """Build every fragment once so that errors surface before any run."""
        op = self.build_operator()
        self.build_schedule()
        self.build_noise(op)
        self.initial_state(op)
        if self.lyapunov is not None:
            self.build_lyapunov(op)

    def to_dict(self) -> Dict[str, Any]:
        """Scenario descriptor for reports."""
        return asdict(self)


def _check_keys(fragment: Any, allowed: Iterable[str], path: str) -> Dict[str, Any]:
    if not isinstance(fragment, Mapping):
        raise ConfigError(f"{path}: expected an object, got {type(fragment).__name__}")
    unknown = sorted(set(fragment) - set(allowed))
    if unknown:
        raise ConfigError(f"{path}.{unknown[0]}: unknown field")
    return dict(fragment)


def _family(fragment: Any, enum_type: Any, path: str, key: str = "family") -> Any:
    if not isinstance(fragment, Mapping) or key not in fragment:
        raise ConfigError(f"{path}.{key}: required field missing")
    try:
        return enum_type(fragment[key])
    except ValueError:
        choices = ", ".join(member.value for member in enum_type)
        raise ConfigError(f"{path}.{key}: unknown value {fragment[key]!r} (expected {choices})")


def _check_seed(seed: Any) -> int:
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < MAX_SEED:
        raise ConfigError(f"seed: must be an unsigned 64-bit integer, got {seed!r}")
    return seed


def _wrap(path: str, build: Any, **kwargs: Any) -> Any:
    try:
        return build(**kwargs)
    except ConfigError:
        raise
    except (ValueError, TypeError) as e:
        raise ConfigError(f"{path}: {e}")


def build_schedule(fragment: Mapping[str, Any], path: str = "schedule") -> StepSchedule:
    """StepSchedule from {"kind", "alpha", "K", "xi"}."""
    params = _check_keys(fragment, SCHEDULE_KEYS, path)
    kind = _family(dict(params, kind=params.get("kind", "polynomial")), ScheduleKind, path, "kind")
    params["kind"] = kind
    return _wrap(path, StepSchedule, **params)


def build_operator(fragment: Mapping[str, Any], path: str = "operator") -> Operator:
    """Operator from a fragment such as {"family": "hurwitz", "A": ..., "b": ...}."""
    family = _family(fragment, OperatorFamily, path)
    params = _check_keys(fragment, OPERATOR_KEYS[family] | {"family"}, path)
    params.pop("family")

    if family == OperatorFamily.CONTRACTIVE_AFFINE:
        return _wrap(path, make_contractive_affine, **params)
    if family == OperatorFamily.HURWITZ_LINEAR:
        return _wrap(path, make_hurwitz_linear, **params)
    if family == OperatorFamily.SELECTOR_CONTROL:
        return _wrap(path, make_selector_control, **params)
    if family == OperatorFamily.PL_GRADIENT:
        params["kind"] = _family(
            dict(params, kind=params.get("kind", "quadratic")), PLKind, path, "kind"
        )
        return _wrap(path, make_pl_gradient, **params)
    if family == OperatorFamily.NONEXPANSIVE:
        params["kind"] = _family(
            dict(params, kind=params.get("kind", "convex_gradient_step")),
            NonexpansiveKind,
            path,
            "kind",
        )
        return _wrap(path, make_nonexpansive, **params)
    return _wrap(path, make_constant_mean, **params)


def build_noise(
    fragment: Mapping[str, Any],
    dim: int,
    schedule: Optional[StepSchedule] = None,
    center: Optional[np.ndarray] = None,
    path: str = "noise",
) -> NoiseModel:
    """Noise model from a fragment.

    Three-point noise takes alpha, K and xi from the companion schedule unless
    the fragment sets them. Multiplicative noise scales around ``center``.
    """
    family = _family(fragment, NoiseFamily, path)
    params = _check_keys(fragment, NOISE_KEYS[family] | {"family"}, path)
    params.pop("family")

    if family == NoiseFamily.ZERO:
        return ZeroNoise(dim)
    if family == NoiseFamily.THREE_POINT:
        if schedule is not None:
            for key in ("alpha", "K", "xi"):
                params.setdefault(key, getattr(schedule, key))
        missing = sorted({"alpha", "K", "xi", "p", "c"} - set(params))
        if missing:
            raise ConfigError(f"{path}.{missing[0]}: required field missing")
        return _wrap(path, ThreePointMDS, dim=dim, **params)
    if family == NoiseFamily.IID:
        params["distribution"] = _family(params, IIDDistribution, path, "distribution")
        return _wrap(path, IIDCentered, dim=dim, **params)

    if "base" not in params:
        raise ConfigError(f"{path}.base: required field missing")
    base = build_noise(params["base"], dim, schedule, None, f"{path}.base")
    return _wrap(path, wrap_multiplicative, base=base, lam=params.get("lambda", 0.0), center=center)


def build_lyapunov(
    fragment: Mapping[str, Any], op: Operator, path: str = "lyapunov"
) -> LyapunovFunction:
    """Lyapunov candidate from a fragment.

    Kinds: weighted_quadratic (P, default identity), piecewise_quadratic
    (P, eta, k), lyapunov_equation (Q, solved against a Hurwitz operator's A)
    and power_transform (base, p).
    """
    if not isinstance(fragment, Mapping) or "kind" not in fragment:
        raise ConfigError(f"{path}.kind: required field missing")
    kind = fragment["kind"]
    if kind not in LYAPUNOV_KEYS:
        raise ConfigError(
            f"{path}.kind: unknown value {kind!r} (expected {', '.join(sorted(LYAPUNOV_KEYS))})"
        )
    params = _check_keys(fragment, LYAPUNOV_KEYS[kind] | {"kind"}, path)
    params.pop("kind")

    if kind == LyapunovKind.WEIGHTED_QUADRATIC.value:
        P = params.get("P", np.eye(op.dim).tolist())
        return _wrap(path, WeightedQuadratic, P=P)
    if kind == LyapunovKind.PIECEWISE_QUADRATIC.value:
        return _wrap(path, PiecewiseQuadratic, **params)
    if kind == "lyapunov_equation":
        if not isinstance(op, AffineOperator) or op.family != OperatorFamily.HURWITZ_LINEAR:
            raise ConfigError(f"{path}.kind: lyapunov_equation needs a hurwitz operator")
        return _wrap(path, quadratic_from_lyapunov_equation, A=op.drift_matrix, Q=params.get("Q"))
    if "base" not in params or "p" not in params:
        raise ConfigError(f"{path}: power_transform needs base and p")
    base = build_lyapunov(params["base"], op, f"{path}.base")
    return _wrap(path, power_transform, phi=base, p=params["p"])


def _positive_int(data: Mapping[str, Any], key: str, default: Optional[int] = None) -> int:
    value = data.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"{key}: must be a positive integer, got {value!r}")
    return value


def parse_scenario(data: Any) -> ScenarioConfig:
    """Validate a decoded scenario document.

    Raises:
        ConfigError: With the dotted path of the first invalid field
    """
    data = _check_keys(data, SCENARIO_KEYS, "scenario")
    missing = sorted(REQUIRED_KEYS - set(data))
    if missing:
        raise ConfigError(f"{missing[0]}: required field missing")
    if not isinstance(data["name"], str) or not data["name"]:
        raise ConfigError("name: must be a non-empty string")

    diagnostics = _wrap(
        "diagnostics",
        DiagnosticsConfig,
        **_check_keys(data.get("diagnostics", {}), DIAGNOSTICS_KEYS, "diagnostics"),
    )
    certification = _wrap(
        "certification",
        CertificationConfig,
        **_check_keys(data.get("certification", {}), CERTIFICATION_KEYS, "certification"),
    )
    xi_list = data.get("xi_list")
    if xi_list is not None:
        if not isinstance(xi_list, list) or not all(
            isinstance(xi, (int, float)) and 0 < xi <= 1 for xi in xi_list
        ):
            raise ConfigError("xi_list: must be a list of numbers in (0, 1]")

    config = ScenarioConfig(
        name=data["name"],
        description=data.get("description", ""),
        operator=data["operator"],
        noise=data.get("noise", {"family": "zero"}),
        schedule=data["schedule"],
        horizon=_positive_int(data, "horizon"),
        n_trajectories=_positive_int(data, "n_trajectories", 1),
        seed=_check_seed(data.get("seed", 0)),
        x0=data.get("x0"),
        diagnostics=diagnostics,
        lyapunov=data.get("lyapunov"),
        certification=certification,
        xi_list=None if xi_list is None else [float(xi) for xi in xi_list],
    )
    config.validate()
    return config


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    """Read and validate a scenario file.

    Raises:
        OSError: If the file cannot be read
        ConfigError: On malformed JSON (with line and column) or invalid fields
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}")
    config = parse_scenario(data)
    logger.info(f"Loaded scenario '{config.name}' from {path}")
    return config
