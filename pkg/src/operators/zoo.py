"""Constructors for the operator zoo.

Each constructor validates its parameters, builds the matrices of an affine
(or switched linear) map and records the structural constants that the
Lyapunov certifier and the ensemble diagnostics need.
"""

from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np
import scipy.linalg

from src.operators.base import (
    AffineOperator,
    NotHurwitzError,
    Operator,
    OperatorError,
    OperatorFamily,
    SelectorControlOperator,
    SingularMatrixError,
    SubspaceSolutionOperator,
)
from src.utils.numerics import apply_matrix, spectral_norm

# Real parts at or above this value disqualify a matrix as Hurwitz
HURWITZ_TOLERANCE = -1e-9

# Selector-control system constants
SELECTOR_A = ((-5.0, -4.0), (-1.0, -2.0))
SELECTOR_B = (-3.0, -21.0)
SELECTOR_K1 = (1.0, 0.0)
SELECTOR_K2 = (0.0, 0.0)

VectorLike = Union[float, Sequence[float], np.ndarray]


class PLKind(str, Enum):
    """Curvature layouts for the PL-gradient operator."""

    QUADRATIC = "quadratic"
    ROTATED_QUADRATIC = "rotated_quadratic"


class NonexpansiveKind(str, Enum):
    """Nonexpansive operator constructions."""

    CONVEX_GRADIENT_STEP = "convex_gradient_step"


class PLGradientOperator(AffineOperator):
    """Gradient step H(x) = x - c grad f(x) on f(x) = (x - x*)^T Q (x - x*) / 2."""

    def __init__(self, curvature: np.ndarray, step: float, target: np.ndarray, mu: float, L: float):
        d = curvature.shape[0]
        super().__init__(
            family=OperatorFamily.PL_GRADIENT,
            matrix=np.eye(d) - step * curvature,
            offset=step * apply_matrix(curvature, target),
            drift_matrix=-step * curvature,
            fixed_point=target,
            lipschitz=max(abs(1.0 - step * mu), abs(1.0 - step * L)),
            metadata={"mu": mu, "L": L, "step": step, "Q": curvature.tolist()},
        )
        self.curvature = curvature
        self.step = step
        self.mu = mu
        self.L = L

    def objective(self, x: np.ndarray) -> np.ndarray:
        """f(x) - f* = (x - x*)^T Q (x - x*) / 2."""
        e = np.asarray(x, dtype=float) - self.require_fixed_point()
        return 0.5 * np.sum(e * apply_matrix(self.curvature, e), axis=-1)

    def gradient(self, x: np.ndarray) -> np.ndarray:
        """grad f(x) = Q (x - x*)."""
        e = np.asarray(x, dtype=float) - self.require_fixed_point()
        return apply_matrix(self.curvature, e)


def _as_vector(value: VectorLike, dim: Optional[int] = None) -> np.ndarray:
    vec = np.atleast_1d(np.asarray(value, dtype=float))
    if vec.ndim != 1:
        raise OperatorError(f"expected a vector, got shape {vec.shape}")
    if dim is not None and vec.shape[0] != dim:
        raise OperatorError(f"expected a vector of length {dim}, got {vec.shape[0]}")
    return vec


def _as_square(matrix: Union[Sequence[Sequence[float]], np.ndarray], name: str) -> np.ndarray:
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise OperatorError(f"{name} must be a square matrix, got shape {arr.shape}")
    return arr


def make_contractive_affine(
    gamma: float, target: VectorLike, weights: Optional[VectorLike] = None
) -> Operator:
    """Affine contraction H(x) = gamma (x - target) + target.

    The map contracts with factor gamma in every weighted Euclidean norm, so
    the weights are only validated and recorded.

    Args:
        gamma: Contraction factor in [0, 1)
        target: Fixed point
        weights: Positive norm weights (default all ones)

    Returns:
        Contractive affine operator

    Raises:
        OperatorError: If gamma is outside [0, 1) or a weight is not positive
    """
    if not 0 <= gamma < 1:
        raise OperatorError(f"gamma must be in [0, 1), got {gamma}")
    t = _as_vector(target)
    d = t.shape[0]
    w = np.ones(d) if weights is None else _as_vector(weights, d)
    if np.any(w <= 0):
        raise OperatorError("weights must be strictly positive")

    return AffineOperator(
        family=OperatorFamily.CONTRACTIVE_AFFINE,
        matrix=gamma * np.eye(d),
        offset=(1.0 - gamma) * t,
        drift_matrix=(gamma - 1.0) * np.eye(d),
        fixed_point=t,
        lipschitz=gamma,
        metadata={"gamma": gamma, "weights": w.tolist()},
    )


def make_hurwitz_linear(A: Union[Sequence[Sequence[float]], np.ndarray], b: VectorLike) -> Operator:
    """Linear SA operator H(x) = (A + I) x + b with drift A x + b.

    Args:
        A: Hurwitz matrix (every eigenvalue with negative real part)
        b: Offset vector

    Returns:
        Operator with fixed point -A^{-1} b

    Raises:
        SingularMatrixError: If A is not invertible
        NotHurwitzError: If an eigenvalue has real part >= -1e-9
    """
    A = _as_square(A, "A")
    d = A.shape[0]
    b_vec = _as_vector(b, d)

    if np.linalg.matrix_rank(A) < d:
        raise SingularMatrixError("A is singular")
    eigenvalues = np.linalg.eigvals(A)
    worst = float(np.max(eigenvalues.real))
    if worst >= HURWITZ_TOLERANCE:
        raise NotHurwitzError(f"A is not Hurwitz: max eigenvalue real part {worst:.6g}")

    fixed_point = scipy.linalg.solve(A, -b_vec)
    return AffineOperator(
        family=OperatorFamily.HURWITZ_LINEAR,
        matrix=A + np.eye(d),
        offset=b_vec,
        drift_matrix=A,
        fixed_point=fixed_point,
        lipschitz=spectral_norm(A + np.eye(d)),
        metadata={
            "A": A.tolist(),
            "b": b_vec.tolist(),
            "eigenvalues_real": sorted(eigenvalues.real.tolist()),
        },
    )


def make_selector_control(
    A: Optional[np.ndarray] = None,
    B: Optional[np.ndarray] = None,
    k1: Optional[np.ndarray] = None,
    k2: Optional[np.ndarray] = None,
) -> SelectorControlOperator:
    """Selector-control system with the default constants unless overridden."""
    A_mat = _as_square(SELECTOR_A if A is None else A, "A")
    if A_mat.shape != (2, 2) and (B is None or k1 is None or k2 is None):
        raise OperatorError("overriding A with a non-2x2 matrix requires B, k1 and k2")
    d = A_mat.shape[0]
    return SelectorControlOperator(
        A_mat,
        _as_vector(SELECTOR_B if B is None else B, d),
        _as_vector(SELECTOR_K1 if k1 is None else k1, d),
        _as_vector(SELECTOR_K2 if k2 is None else k2, d),
    )


def _rotation(dim: int, seed: int) -> np.ndarray:
    """Deterministic orthogonal matrix from the QR factorisation of a seeded Gaussian draw."""
    if dim == 1:
        return np.ones((1, 1))
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))


def make_pl_gradient(
    kind: PLKind,
    curvature: VectorLike,
    step: float,
    target: Optional[VectorLike] = None,
    rotation_seed: int = 0,
) -> PLGradientOperator:
    """Gradient step on a quadratic whose Hessian has the given spectrum.

    Args:
        kind: Diagonal Hessian, or the same spectrum in a rotated basis
        curvature: Hessian eigenvalues, all in [mu, L] with mu > 0
        step: Gradient step c in (0, 2 / L)
        target: Minimiser x* (default origin)
        rotation_seed: Seed of the rotation for ROTATED_QUADRATIC

    Returns:
        PL-gradient operator recording mu and L

    Raises:
        OperatorError: On a non-positive eigenvalue or a step outside (0, 2 / L)
    """
    spectrum = _as_vector(curvature)
    d = spectrum.shape[0]
    if np.any(spectrum <= 0):
        raise OperatorError("curvature eigenvalues must be strictly positive")
    mu, L = float(spectrum.min()), float(spectrum.max())
    if not 0 < step < 2.0 / L:
        raise OperatorError(f"step must be in (0, 2/L) = (0, {2.0 / L:.6g}), got {step}")

    Q = np.diag(spectrum)
    if PLKind(kind) == PLKind.ROTATED_QUADRATIC:
        R = _rotation(d, rotation_seed)
        Q = R @ Q @ R.T
        Q = 0.5 * (Q + Q.T)
    x_star = np.zeros(d) if target is None else _as_vector(target, d)
    return PLGradientOperator(Q, float(step), x_star, mu, L)


def make_nonexpansive(
    kind: NonexpansiveKind,
    L: float,
    eta: float,
    dim: int = 2,
    rank: int = 1,
) -> SubspaceSolutionOperator:
    """Gradient step on the PSD quadratic f(x) = L * ||x[:rank]||^2 / 2.

    The Hessian diag(L, ..., L, 0, ..., 0) has a nontrivial kernel, so the
    fixed points form the subspace spanned by the last dim - rank basis vectors.

    Args:
        kind: Construction (only the convex gradient step exists)
        L: Smoothness constant, > 0
        eta: Step in (0, 2 / L)
        dim: State dimension
        rank: Number of curved directions, 0 < rank < dim

    Returns:
        Nonexpansive operator without a unique fixed point

    Raises:
        OperatorError: On invalid L, eta or rank
    """
    NonexpansiveKind(kind)
    if not L > 0:
        raise OperatorError(f"L must be > 0, got {L}")
    if not 0 < eta < 2.0 / L:
        raise OperatorError(f"eta must be in (0, 2/L) = (0, {2.0 / L:.6g}), got {eta}")
    if not 0 < rank < dim:
        raise OperatorError(f"rank must satisfy 0 < rank < dim, got rank={rank}, dim={dim}")

    Q = np.diag([L] * rank + [0.0] * (dim - rank))
    basis = scipy.linalg.null_space(Q)
    return SubspaceSolutionOperator(
        solution_basis=basis,
        solution_offset=np.zeros(dim),
        family=OperatorFamily.NONEXPANSIVE,
        matrix=np.eye(dim) - eta * Q,
        offset=np.zeros(dim),
        drift_matrix=-eta * Q,
        fixed_point=None,
        lipschitz=max(abs(1.0 - eta * L), 1.0),
        metadata={"L": L, "eta": eta, "Q": Q.tolist()},
    )


def make_constant_mean(mu: VectorLike) -> Operator:
    """Constant operator H(x) = mu, the weighted strong-law recursion."""
    mean = _as_vector(mu)
    d = mean.shape[0]
    return AffineOperator(
        family=OperatorFamily.CONSTANT_MEAN,
        matrix=np.zeros((d, d)),
        offset=mean,
        drift_matrix=-np.eye(d),
        fixed_point=mean,
        lipschitz=0.0,
        metadata={"mu": mean.tolist()},
    )
