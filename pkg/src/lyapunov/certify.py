"""Sampled certification of the Lyapunov drift conditions.

A certificate is evidence, not proof: it reports the constants observed on a
finite sample of an annulus around the fixed point, plus every sampled point at
which the candidate fails to decrease along the mean field.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from src.lyapunov.functions import LyapunovFunction, WeightedQuadratic, sandwich_constants
from src.operators.base import Operator, SelectorControlOperator
from src.utils.numerics import row_dot

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 100_000
SMOOTHNESS_STEPS = (1e-2, 1e-1, 1.0)
MAX_REPORTED_VIOLATIONS = 20


class DegenerateRegionError(ValueError):
    """Raised when the sampling annulus is empty or touches the fixed point."""

    pass


@dataclass(frozen=True)
class SamplingRegion:
    """Annulus r_min <= ||x - x*|| <= radius."""

    r_min: float = 1e-3
    radius: float = 10.0

    def validate(self) -> None:
        """Reject annuli that include the fixed point or are empty."""
        if not self.r_min > 0:
            raise DegenerateRegionError(f"r_min must be > 0, got {self.r_min}")
        if not self.radius > self.r_min:
            raise DegenerateRegionError(
                f"radius must exceed r_min, got radius={self.radius}, r_min={self.r_min}"
            )

    def sample(self, dim: int, n: int, rng: np.random.Generator) -> np.ndarray:
        """Uniform samples of the annulus centered at the origin, shape (n, dim)."""
        directions = rng.standard_normal((n, dim))
        directions /= np.sqrt(row_dot(directions, directions))[:, None]
        inner, outer = self.r_min**dim, self.radius**dim
        radii = (inner + rng.random(n) * (outer - inner)) ** (1.0 / dim)
        return radii[:, None] * directions


@dataclass
class DriftCertificate:
    """Constants observed while certifying a Lyapunov candidate.

    Attributes:
        eta_hat: Largest eta with <grad Phi, H(x) - x> <= -eta Phi at every sample
        L2_hat: Largest smoothness quotient over multiscale pairs
        c1_hat: min Phi(e) / ||e||^2 over the samples
        c2_hat: max Phi(e) / ||e||^2 over the samples
        violation_count: Samples without strict decrease
        violations: Worst violating points and their drift margins
        samples: Number of sampled points
        region: Sampling annulus
    """

    eta_hat: float
    L2_hat: float
    c1_hat: float
    c2_hat: float
    violation_count: int
    samples: int
    region: SamplingRegion
    violations: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """True when eta_hat > 0 and no sample violates the drift condition."""
        return self.eta_hat > 0 and self.violation_count == 0

    def eta_p(self, p: float) -> float:
        """Drift constant (p / 2) eta_hat of the power transform Phi^(p/2)."""
        return 0.5 * p * self.eta_hat

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready certificate."""
        return {
            "eta_hat": self.eta_hat,
            "L2_hat": self.L2_hat,
            "c1_hat": self.c1_hat,
            "c2_hat": self.c2_hat,
            "violation_count": self.violation_count,
            "violations": self.violations,
            "samples": self.samples,
            "region": asdict(self.region),
            "passed": self.passed,
            "method": "sampled",
        }


def certify_drift(
    op: Operator,
    phi: LyapunovFunction,
    region: Optional[SamplingRegion] = None,
    n_samples: int = DEFAULT_SAMPLES,
    rng: Optional[np.random.Generator] = None,
) -> DriftCertificate:
    """Certify the negative drift, smoothness and sandwich conditions on samples.

    For each sampled x the drift ratio <grad Phi(x - x*), H(x) - x> / Phi(x - x*)
    is computed; eta_hat is minus its maximum. A sample whose ratio is not
    strictly negative is a violation.

    Args:
        op: Operator with a known fixed point
        phi: Lyapunov candidate
        region: Sampling annulus (default r_min = 1e-3, radius = 10)
        n_samples: Number of sampled points
        rng: Random generator (default seeded with 0)

    Returns:
        DriftCertificate

    Raises:
        MissingFixedPointError: If the operator has no unique fixed point
        DegenerateRegionError: If the annulus is degenerate
    """
    region = SamplingRegion() if region is None else region
    region.validate()
    x_star = op.require_fixed_point()
    rng = np.random.default_rng(0) if rng is None else rng

    e = region.sample(op.dim, n_samples, rng)
    values = phi.value(e)
    inner = row_dot(phi.gradient(e), op.drift(x_star + e))
    ratios = inner / values
    sq_norms = row_dot(e, e)
    eta_hat = -float(ratios.max())

    bad = np.flatnonzero(ratios >= 0)
    worst = bad[np.argsort(-inner[bad], kind="stable")][:MAX_REPORTED_VIOLATIONS]
    violations = [
        {"point": (x_star + e[i]).tolist(), "margin": float(inner[i]), "ratio": float(ratios[i])}
        for i in worst
    ]

    L2_hat = 0.0
    for h in SMOOTHNESS_STEPS:
        directions = rng.standard_normal(e.shape)
        directions /= np.sqrt(row_dot(directions, directions))[:, None]
        shifted = e + h * directions
        gap = phi.value(shifted) - values - h * row_dot(phi.gradient(e), directions)
        L2_hat = max(L2_hat, float((2.0 * gap / h**2).max()))

    certificate = DriftCertificate(
        eta_hat=eta_hat,
        L2_hat=L2_hat,
        c1_hat=float((values / sq_norms).min()),
        c2_hat=float((values / sq_norms).max()),
        violation_count=int(bad.size),
        samples=n_samples,
        region=region,
        violations=violations,
    )
    logger.info(
        f"Certified {phi.kind.value} on {op.family.value}: eta_hat={eta_hat:.6g}, "
        f"violations={certificate.violation_count}/{n_samples}"
    )
    return certificate


def random_positive_definite(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Random SPD matrix B B^T + I / 2 normalised to unit trace."""
    B = rng.standard_normal((dim, dim))
    P = B @ B.T + 0.5 * np.eye(dim)
    return P / np.trace(P)


def search_quadratic_violations(
    op: Operator,
    n_matrices: int = 20,
    n_samples: int = 20_000,
    rng: Optional[np.random.Generator] = None,
) -> List[Dict[str, Any]]:
    """Look for drift violations of random quadratic candidates e^T P e.

    Args:
        op: Operator with a known fixed point
        n_matrices: Number of random SPD matrices
        n_samples: Samples per matrix
        rng: Random generator (default seeded with 0)

    Returns:
        One entry per matrix with P, eta_hat and the violation count
    """
    rng = np.random.default_rng(0) if rng is None else rng
    results = []
    for _ in range(n_matrices):
        P = random_positive_definite(op.dim, rng)
        certificate = certify_drift(op, WeightedQuadratic(P), n_samples=n_samples, rng=rng)
        results.append(
            {
                "P": P.tolist(),
                "eta_hat": certificate.eta_hat,
                "violation_count": certificate.violation_count,
            }
        )
    return results


def selector_lmi_report(
    op: SelectorControlOperator,
    P: Optional[np.ndarray] = None,
    eta_sw: float = 9.0,
) -> Dict[str, Any]:
    """Branch eigenvalues and the two switched Lyapunov inequalities.

    Reports the largest eigenvalue of A1^T P + P A1 and of
    A2^T (P + eta k1 k1^T) + (P + eta k1 k1^T) A2; both must be negative for the
    piecewise quadratic to decrease on each branch.
    """
    P_lower = np.diag([1.0, 3.0]) if P is None else np.asarray(P, dtype=float)
    P_upper = P_lower + eta_sw * np.outer(op.k1, op.k1)
    lmi_lower = op.A1.T @ P_lower + P_lower @ op.A1
    lmi_upper = op.A2.T @ P_upper + P_upper @ op.A2

    def spectrum(matrix: np.ndarray) -> List[List[float]]:
        eig = np.linalg.eigvals(matrix)
        return [[float(z.real), float(z.imag)] for z in sorted(eig, key=lambda z: z.real)]

    report = {
        "A1": op.A1.tolist(),
        "A2": op.A2.tolist(),
        "det_A1": float(np.linalg.det(op.A1)),
        "det_A2": float(np.linalg.det(op.A2)),
        "eig_A1": spectrum(op.A1),
        "eig_A2": spectrum(op.A2),
        "lmi_lower_max_eig": float(np.linalg.eigvalsh(0.5 * (lmi_lower + lmi_lower.T)).max()),
        "lmi_upper_max_eig": float(np.linalg.eigvalsh(0.5 * (lmi_upper + lmi_upper.T)).max()),
        "quadratic_constants": sandwich_constants(WeightedQuadratic(P_lower)),
    }
    report["lmi_feasible"] = report["lmi_lower_max_eig"] < 0 and report["lmi_upper_max_eig"] < 0
    return report
