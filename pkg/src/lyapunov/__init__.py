"""Lyapunov drift certification, proof-device inequalities and projection tracking."""

from .certify import (
    DegenerateRegionError,
    DriftCertificate,
    SamplingRegion,
    certify_drift,
    random_positive_definite,
    search_quadratic_violations,
    selector_lmi_report,
)
from .fourth_moment import (
    FourthMomentDecomposition,
    fourth_moment_drift_demo,
    fourth_moment_terms,
)
from .functions import (
    LyapunovFunction,
    LyapunovKind,
    PiecewiseQuadratic,
    PowerTransform,
    WeightedQuadratic,
    power_transform,
    quadratic_from_lyapunov_equation,
    sandwich_constants,
)
from .inequalities import (
    RELATIVE_TOLERANCE,
    PowerBoundGaps,
    ZeroBaseError,
    norm_power_gap,
    norm_power_terms,
    scalar_power_bounds,
    scalar_power_terms,
)
from .oracles import (
    OracleKind,
    OracleResult,
    run_fourth_moment_oracle,
    run_norm_power_oracle,
    run_oracle,
    run_projection_drift_oracle,
    run_scalar_power_oracle,
)
from .projection import (
    ProjectionDriftResult,
    ProjectionStep,
    ProjectionTracker,
    check_projection_drift,
    expected_projection_excess,
    project,
    project_track,
)

__all__ = [
    "RELATIVE_TOLERANCE",
    "DegenerateRegionError",
    "DriftCertificate",
    "FourthMomentDecomposition",
    "LyapunovFunction",
    "LyapunovKind",
    "OracleKind",
    "OracleResult",
    "PiecewiseQuadratic",
    "PowerBoundGaps",
    "PowerTransform",
    "ProjectionDriftResult",
    "ProjectionStep",
    "ProjectionTracker",
    "SamplingRegion",
    "WeightedQuadratic",
    "ZeroBaseError",
    "certify_drift",
    "check_projection_drift",
    "expected_projection_excess",
    "fourth_moment_drift_demo",
    "fourth_moment_terms",
    "norm_power_gap",
    "norm_power_terms",
    "power_transform",
    "project",
    "project_track",
    "quadratic_from_lyapunov_equation",
    "random_positive_definite",
    "run_fourth_moment_oracle",
    "run_norm_power_oracle",
    "run_oracle",
    "run_projection_drift_oracle",
    "run_scalar_power_oracle",
    "sandwich_constants",
    "scalar_power_bounds",
    "scalar_power_terms",
    "search_quadratic_violations",
    "selector_lmi_report",
]
