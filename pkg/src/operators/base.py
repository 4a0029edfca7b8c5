"""Operator types for the stochastic approximation recursion.

An operator is the evaluation map H : R^d -> R^d whose fixed point the
recursion x_{k+1} = x_k + alpha_k (H(x_k) - x_k + w_k) seeks. Every operator
evaluates batches: inputs of shape (..., d) map to outputs of the same shape.
"""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from src.utils.numerics import apply_matrix, row_dot, row_norms

FIXED_POINT_TOLERANCE = 1e-12


class OperatorError(ValueError):
    """Raised for invalid operator parameters."""

    pass


class NotHurwitzError(OperatorError):
    """Raised when a drift matrix has an eigenvalue with real part >= -1e-9."""

    pass


class SingularMatrixError(OperatorError):
    """Raised when a drift matrix is not invertible."""

    pass


class MissingFixedPointError(OperatorError):
    """Raised when an operation needs a unique fixed point the operator lacks."""

    pass


class OperatorFamily(str, Enum):
    """Operator families, one per setting of the convergence theory."""

    CONTRACTIVE_AFFINE = "contractive"
    HURWITZ_LINEAR = "hurwitz"
    SELECTOR_CONTROL = "selector_control"
    PL_GRADIENT = "pl_gradient"
    NONEXPANSIVE = "nonexpansive"
    CONSTANT_MEAN = "constant_mean"


class Operator(ABC):
    """Evaluation map H with optional fixed point and Lipschitz constant.

    Attributes:
        family: Operator family
        dim: State dimension d
        fixed_point: Unique fixed point x*, or None when the solution set is not a point
        lipschitz: Lipschitz constant C of H in the Euclidean norm, if known
        metadata: Structural constants (curvatures, solution-set basis, ...)
    """

    def __init__(
        self,
        family: OperatorFamily,
        dim: int,
        fixed_point: Optional[np.ndarray] = None,
        lipschitz: Optional[float] = None,
        metadata: Optional[Dict[str, Any]] = None,
    ) -> None:
        if dim < 1:
            raise OperatorError(f"dim must be a positive integer, got {dim}")
        self.family = family
        self.dim = int(dim)
        self.fixed_point = None if fixed_point is None else np.asarray(fixed_point, dtype=float)
        self.lipschitz = None if lipschitz is None else float(lipschitz)
        self.metadata: Dict[str, Any] = dict(metadata or {})

    @abstractmethod
    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """H(x) for x of shape (..., d)."""

    def drift(self, x: np.ndarray) -> np.ndarray:
        """Mean field H(x) - x for x of shape (..., d)."""
        return self.evaluate(x) - np.asarray(x, dtype=float)

    def require_fixed_point(self) -> np.ndarray:
        """Return x*, raising MissingFixedPointError when it is not unique."""
        if self.fixed_point is None:
            raise MissingFixedPointError(
                f"{self.family.value} operator has no unique fixed point"
            )
        return self.fixed_point

    def distance(self, x: np.ndarray) -> np.ndarray:
        """Distance u = ||x - x*|| to the solution, for x of shape (..., d)."""
        return row_norms(np.asarray(x, dtype=float) - self.require_fixed_point())

    def describe(self) -> Dict[str, Any]:
        """Structural summary for reports."""
        return {
            "family": self.family.value,
            "dim": self.dim,
            "fixed_point": None if self.fixed_point is None else self.fixed_point.tolist(),
            "lipschitz": self.lipschitz,
        }


class AffineOperator(Operator):
    """Affine operator H(x) = M x + c, with drift (M - I) x + c.

    The contractive, Hurwitz, PL-gradient, nonexpansive and constant-mean
    families are all affine; they differ only in how M, c and the metadata
    are built (see ``src.operators.zoo``).
    """

    def __init__(
        self,
        family: OperatorFamily,
        matrix: np.ndarray,
        offset: np.ndarray,
        drift_matrix: Optional[np.ndarray] = None,
        fixed_point: Optional[np.ndarray] = None,
        lipschitz: Optional[float] = None,
        metadata: Optional[Dict[str, Any]] = None,
    ) -> None:
        matrix = np.asarray(matrix, dtype=float)
        super().__init__(family, matrix.shape[0], fixed_point, lipschitz, metadata)
        self.matrix = matrix
        self.offset = np.asarray(offset, dtype=float)
        if drift_matrix is None:
            drift_matrix = matrix - np.eye(self.dim)
        self.drift_matrix = np.asarray(drift_matrix, dtype=float)

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """H(x) = M x + c."""
        return apply_matrix(self.matrix, x) + self.offset

    def drift(self, x: np.ndarray) -> np.ndarray:
        """H(x) - x = (M - I) x + c, evaluated without cancellation."""
        return apply_matrix(self.drift_matrix, x) + self.offset


class SubspaceSolutionOperator(AffineOperator):
    """Affine operator whose fixed points form the affine set offset + span(basis).

    Distances are measured to that set through the closed-form orthogonal
    projection, so convergence diagnostics work without a unique x*.
    """

    def __init__(self, solution_basis: np.ndarray, solution_offset: np.ndarray, **kwargs: Any):
        super().__init__(**kwargs)
        basis = np.asarray(solution_basis, dtype=float).reshape(self.dim, -1)
        self.solution_basis = basis
        self.solution_offset = np.asarray(solution_offset, dtype=float)
        self._range_projector = np.eye(self.dim) - basis @ basis.T
        self.metadata["solution_basis"] = basis.T.tolist()
        self.metadata["solution_offset"] = self.solution_offset.tolist()

    def distance(self, x: np.ndarray) -> np.ndarray:
        """Distance from x to the solution set."""
        shifted = np.asarray(x, dtype=float) - self.solution_offset
        return row_norms(apply_matrix(self._range_projector, shifted))

    def project_to_solutions(self, x: np.ndarray) -> np.ndarray:
        """Closest point of the solution set."""
        shifted = np.asarray(x, dtype=float) - self.solution_offset
        projector = self.solution_basis @ self.solution_basis.T
        return self.solution_offset + apply_matrix(projector, shifted)


class SelectorControlOperator(Operator):
    """Switched linear operator H(x) = x + A x + B min(k1^T x, k2^T x).

    The drift equals A1 x on the half-space k1^T x <= k2^T x and A2 x on the
    rest, with A1 = A + B k1^T and A2 = A + B k2^T. The min keeps it continuous
    across the switching plane.
    """

    def __init__(self, A: np.ndarray, B: np.ndarray, k1: np.ndarray, k2: np.ndarray) -> None:
        A = np.asarray(A, dtype=float)
        B = np.asarray(B, dtype=float).reshape(A.shape[0], 1)
        k1 = np.asarray(k1, dtype=float).ravel()
        k2 = np.asarray(k2, dtype=float).ravel()
        A1 = A + B @ k1[None, :]
        A2 = A + B @ k2[None, :]
        drift_lipschitz = max(
            float(np.linalg.norm(A1, ord=2)), float(np.linalg.norm(A2, ord=2))
        )
        super().__init__(
            OperatorFamily.SELECTOR_CONTROL,
            A.shape[0],
            fixed_point=np.zeros(A.shape[0]),
            lipschitz=1.0 + drift_lipschitz,
            metadata={
                "A": A.tolist(),
                "B": B.ravel().tolist(),
                "k1": k1.tolist(),
                "k2": k2.tolist(),
                "A1": A1.tolist(),
                "A2": A2.tolist(),
                "drift_lipschitz": drift_lipschitz,
            },
        )
        self.A, self.B, self.k1, self.k2 = A, B, k1, k2
        self.A1, self.A2 = A1, A2

    def first_branch(self, x: np.ndarray) -> np.ndarray:
        """Mask of points where the A1 branch is active (k1^T x <= k2^T x)."""
        x = np.asarray(x, dtype=float)
        return row_dot(x, self.k1) <= row_dot(x, self.k2)

    def drift(self, x: np.ndarray) -> np.ndarray:
        """Piecewise-linear drift A1 x or A2 x."""
        x = np.asarray(x, dtype=float)
        mask = self.first_branch(x)
        return np.where(mask[..., None], apply_matrix(self.A1, x), apply_matrix(self.A2, x))

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """H(x) = x + drift(x)."""
        x = np.asarray(x, dtype=float)
        return x + self.drift(x)
