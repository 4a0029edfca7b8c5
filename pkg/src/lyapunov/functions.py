"""Lyapunov function candidates.

All functions act on the error e = x - x* and evaluate batches of shape (..., d).
"""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from src.utils.numerics import apply_matrix, row_dot

MatrixLike = Union[Sequence[Sequence[float]], np.ndarray]

# Default piecewise quadratic for the selector-control system
DEFAULT_PIECEWISE_P = ((1.0, 0.0), (0.0, 3.0))
DEFAULT_PIECEWISE_ETA = 9.0
DEFAULT_PIECEWISE_K = (1.0, 0.0)


class LyapunovKind(str, Enum):
    """Lyapunov function families."""

    WEIGHTED_QUADRATIC = "weighted_quadratic"
    PIECEWISE_QUADRATIC = "piecewise_quadratic"
    POWER_TRANSFORM = "power_transform"


def _positive_definite(matrix: MatrixLike, name: str) -> np.ndarray:
    P = np.asarray(matrix, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {P.shape}")
    if not np.allclose(P, P.T, rtol=1e-12, atol=1e-12):
        raise ValueError(f"{name} must be symmetric")
    if float(np.linalg.eigvalsh(P).min()) <= 0:
        raise ValueError(f"{name} must be positive definite")
    return 0.5 * (P + P.T)


class LyapunovFunction(ABC):
    """Candidate Phi with value and gradient on errors e = x - x*."""

    kind: LyapunovKind

    def __init__(self, dim: int) -> None:
        self.dim = dim

    @abstractmethod
    def value(self, e: np.ndarray) -> np.ndarray:
        """Phi(e) for e of shape (..., d)."""

    @abstractmethod
    def gradient(self, e: np.ndarray) -> np.ndarray:
        """grad Phi(e) for e of shape (..., d)."""

    def finite_difference_gradient(self, e: np.ndarray) -> np.ndarray:
        """Central differences with step h = 1e-6 (1 + ||e||)."""
        e = np.asarray(e, dtype=float)
        h = 1e-6 * (1.0 + np.sqrt(row_dot(e, e)))
        grad = np.empty_like(e)
        for j in range(self.dim):
            step = np.zeros_like(e)
            step[..., j] = h
            grad[..., j] = (self.value(e + step) - self.value(e - step)) / (2 * h)
        return grad

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """JSON fragment."""


class WeightedQuadratic(LyapunovFunction):
    """Phi(e) = e^T P e with P symmetric positive definite."""

    kind = LyapunovKind.WEIGHTED_QUADRATIC

    def __init__(self, P: MatrixLike) -> None:
        self.P = _positive_definite(P, "P")
        super().__init__(self.P.shape[0])

    def value(self, e: np.ndarray) -> np.ndarray:
        e = np.asarray(e, dtype=float)
        return row_dot(e, apply_matrix(self.P, e))

    def gradient(self, e: np.ndarray) -> np.ndarray:
        return 2.0 * apply_matrix(self.P, e)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "P": self.P.tolist()}


class PiecewiseQuadratic(LyapunovFunction):
    """Phi(e) = e^T P e if k^T e <= 0, else e^T (P + eta k k^T) e.

    The added term vanishes on the switching plane, so Phi is continuous; its
    gradient is taken from the k^T e <= 0 branch on the plane itself.
    """

    kind = LyapunovKind.PIECEWISE_QUADRATIC

    def __init__(
        self,
        P: MatrixLike = DEFAULT_PIECEWISE_P,
        eta: float = DEFAULT_PIECEWISE_ETA,
        k: Sequence[float] = DEFAULT_PIECEWISE_K,
    ) -> None:
        self.P = _positive_definite(P, "P")
        super().__init__(self.P.shape[0])
        if not eta >= 0:
            raise ValueError(f"eta must be >= 0, got {eta}")
        self.eta = float(eta)
        self.k = np.asarray(k, dtype=float).ravel()
        if self.k.shape[0] != self.dim:
            raise ValueError(f"k must have length {self.dim}, got {self.k.shape[0]}")
        self.P_switched = self.P + self.eta * np.outer(self.k, self.k)

    def _upper(self, e: np.ndarray) -> np.ndarray:
        return row_dot(e, self.k) > 0

    def value(self, e: np.ndarray) -> np.ndarray:
        e = np.asarray(e, dtype=float)
        lower = row_dot(e, apply_matrix(self.P, e))
        upper = row_dot(e, apply_matrix(self.P_switched, e))
        return np.where(self._upper(e), upper, lower)

    def gradient(self, e: np.ndarray) -> np.ndarray:
        e = np.asarray(e, dtype=float)
        lower = 2.0 * apply_matrix(self.P, e)
        upper = 2.0 * apply_matrix(self.P_switched, e)
        return np.where(self._upper(e)[..., None], upper, lower)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "P": self.P.tolist(),
            "eta": self.eta,
            "k": self.k.tolist(),
        }


class PowerTransform(LyapunovFunction):
    """Psi = Phi^(p/2) with sandwich constants a1 = c1^(p/2), a2 = c2^(p/2).

    Attributes:
        base: Transformed function Phi
        p: Moment order in (1, 2]
        a1: Lower sandwich constant, a1 ||e||^p <= Psi(e)
        a2: Upper sandwich constant, Psi(e) <= a2 ||e||^p
        eta_p: Drift constant (p / 2) eta of Psi, when Phi's drift constant is known
    """

    kind = LyapunovKind.POWER_TRANSFORM

    def __init__(
        self,
        base: LyapunovFunction,
        p: float,
        c1: float,
        c2: float,
        eta: Optional[float] = None,
    ) -> None:
        super().__init__(base.dim)
        self.base = base
        self.p = float(p)
        self.exponent = self.p / 2.0
        self.a1 = c1**self.exponent
        self.a2 = c2**self.exponent
        self.eta_p = None if eta is None else self.exponent * eta

    def value(self, e: np.ndarray) -> np.ndarray:
        return self.base.value(e) ** self.exponent

    def gradient(self, e: np.ndarray) -> np.ndarray:
        phi = self.base.value(e)
        safe = np.where(phi > 0, phi, 1.0)
        factor = np.where(phi > 0, self.exponent * safe ** (self.exponent - 1.0), 0.0)
        return factor[..., None] * self.base.gradient(e)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "p": self.p,
            "base": self.base.to_dict(),
            "a1": self.a1,
            "a2": self.a2,
            "eta_p": self.eta_p,
        }


def quadratic_from_lyapunov_equation(
    A: MatrixLike, Q: Optional[MatrixLike] = None
) -> WeightedQuadratic:
    """Solve A^T P + P A = -Q for the quadratic Lyapunov function of a Hurwitz matrix.

    Args:
        A: Hurwitz drift matrix
        Q: Symmetric positive definite right-hand side (default identity)

    Returns:
        WeightedQuadratic with the solution P

    Raises:
        ValueError: If the solution is not positive definite (A not Hurwitz)
    """
    A_mat = np.asarray(A, dtype=float)
    Q_mat = np.eye(A_mat.shape[0]) if Q is None else _positive_definite(Q, "Q")
    P = scipy.linalg.solve_continuous_lyapunov(A_mat.T, -Q_mat)
    return WeightedQuadratic(0.5 * (P + P.T))


def sandwich_constants(phi: LyapunovFunction) -> Dict[str, Optional[float]]:
    """Analytic c1, c2 (and L2 for quadratics) with c1 ||e||^2 <= Phi(e) <= c2 ||e||^2.

    Power transforms report their constants against ||e||^p instead (a1, a2).
    """
    if isinstance(phi, WeightedQuadratic):
        eig = np.linalg.eigvalsh(phi.P)
        return {"c1": float(eig[0]), "c2": float(eig[-1]), "L2": 2.0 * float(eig[-1])}
    if isinstance(phi, PiecewiseQuadratic):
        lower = np.linalg.eigvalsh(phi.P)
        upper = np.linalg.eigvalsh(phi.P_switched)
        c2 = max(float(lower[-1]), float(upper[-1]))
        return {"c1": min(float(lower[0]), float(upper[0])), "c2": c2, "L2": 2.0 * c2}
    if isinstance(phi, PowerTransform):
        return {"c1": phi.a1, "c2": phi.a2, "L2": None}
    raise ValueError(f"no analytic constants for {phi.kind.value}")


def power_transform(
    phi: LyapunovFunction,
    p: float,
    c1: Optional[float] = None,
    c2: Optional[float] = None,
    eta: Optional[float] = None,
) -> PowerTransform:
    """Psi = Phi^(p/2) for p in (1, 2].

    Sandwich constants default to the analytic ones of quadratic candidates; pass
    certified c1, c2 (and eta) to transform a sampled certificate instead.

    Raises:
        ValueError: If p is outside (1, 2] or the constants are not positive
    """
    if not 1 < p <= 2:
        raise ValueError(f"p must be in (1, 2], got {p}")
    if c1 is None or c2 is None:
        analytic = sandwich_constants(phi)
        c1 = analytic["c1"] if c1 is None else c1
        c2 = analytic["c2"] if c2 is None else c2
    assert c1 is not None and c2 is not None
    if not (c1 > 0 and c2 > 0):
        raise ValueError(f"sandwich constants must be positive, got c1={c1}, c2={c2}")
    return PowerTransform(phi, p, c1, c2, eta)
