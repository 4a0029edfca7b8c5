"""Noise models for the stochastic approximation recursion.

Every model emits w_n = s(x_n) * zeta_n * e, a scalar innovation zeta_n along a
fixed unit direction e, optionally scaled by a state-dependent factor s. The
innovations of one trajectory are drawn in blocks of consecutive steps, so the
engine can pre-draw them independently of the state.

Conditional moments are exact: atom enumeration for finite-support laws and
closed forms (via ``scipy.special.gamma``) for the continuous ones. A moment
that does not exist is reported as ``None`` rather than raised.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.stats import t as student_t

from src.utils.numerics import compensated_sum, row_norms

logger = logging.getLogger(__name__)

# Jump magnitude alpha_n * s_n of the three-point construction
THREE_POINT_JUMP = 4.0

Atoms = List[Tuple[float, np.ndarray]]


class NoiseConfigError(ValueError):
    """Raised for invalid noise parameters."""

    pass


class DimensionMismatchError(ValueError):
    """Raised when a state does not match the noise dimension."""

    pass


class UnavailableMomentError(ValueError):
    """Raised when a construction needs a moment that is infinite."""

    pass


class UnsupportedNoiseError(ValueError):
    """Raised when an operation needs finite-support noise (or a specific family)."""

    pass


class NoiseFamily(str, Enum):
    """Noise families."""

    ZERO = "zero"
    THREE_POINT = "three_point"
    IID = "iid"
    MULTIPLICATIVE = "multiplicative"


class IIDDistribution(str, Enum):
    """Centered i.i.d. innovation laws."""

    GAUSSIAN = "gaussian"
    PARETO = "pareto"
    STUDENT_T = "student_t"
    TWO_POINT = "two_point"


@dataclass(frozen=True)
class MomentBound:
    """Declared bound E[||w||^p | F] <= A_p + B_p ||x - x*||^p."""

    A_p: float
    B_p: float
    p: float

    def at_order(self, kappa: float) -> Tuple[float, float]:
        """Constants of the implied bound at order kappa <= p.

        Conditional Jensen gives E[||w||^kappa] <= (A_p + B_p u^p)^(kappa/p), and
        t -> t^(kappa/p) is subadditive, so A_kappa = A_p^(kappa/p) and
        B_kappa = B_p^(kappa/p).
        """
        if not 0 < kappa <= self.p:
            raise NoiseConfigError(f"kappa must be in (0, {self.p}], got {kappa}")
        r = kappa / self.p
        return (self.A_p**r, self.B_p**r)

    def bound(self, u: float) -> float:
        """A_p + B_p u^p."""
        return self.A_p + self.B_p * u**self.p

    def to_dict(self) -> Dict[str, float]:
        """Plain dictionary for reports."""
        return {"A_p": self.A_p, "B_p": self.B_p, "p": self.p}


def _unit_direction(direction: Optional[Sequence[float]], dim: int) -> np.ndarray:
    if dim < 1:
        raise NoiseConfigError(f"dim must be a positive integer, got {dim}")
    if direction is None:
        e = np.zeros(dim)
        e[0] = 1.0
        return e
    e = np.asarray(direction, dtype=float).ravel()
    if e.shape[0] != dim:
        raise NoiseConfigError(f"direction must have length {dim}, got {e.shape[0]}")
    norm = float(np.linalg.norm(e))
    if norm == 0.0 or not math.isfinite(norm):
        raise NoiseConfigError("direction must be a finite nonzero vector")
    return e / norm


class NoiseModel(ABC):
    """Conditional law of w_n given x_n.

    Attributes:
        family: Noise family
        dim: Dimension of the noise vector
        direction: Unit vector carrying the scalar innovation
        p: Declared moment order
    """

    family: NoiseFamily

    def __init__(self, dim: int, direction: Optional[Sequence[float]], p: float) -> None:
        self.direction = _unit_direction(direction, dim)
        self.dim = int(dim)
        self.p = float(p)

    @abstractmethod
    def innovation_block(self, start: int, size: int, rng: np.random.Generator) -> np.ndarray:
        """Scalar innovations zeta_n for n = start, ..., start + size - 1."""

    @abstractmethod
    def innovation_moment(self, n: int, q: float) -> Optional[float]:
        """E|zeta_n|^q, or None when infinite."""

    def innovation_atoms(self, n: int) -> Optional[List[Tuple[float, float]]]:
        """Support of zeta_n as (probability, value) pairs; None for continuous laws."""
        return None

    def scale_factor(self, u: np.ndarray) -> np.ndarray:
        """State-dependent multiplier s(u) of the innovation, u = ||x - x*||."""
        return np.ones_like(np.asarray(u, dtype=float))

    def sample_block(self, start: int, size: int, rng: np.random.Generator) -> np.ndarray:
        """State-independent part zeta_n * e for a block of steps, shape (size, dim)."""
        return self.innovation_block(start, size, rng)[:, None] * self.direction

    def _check_state(self, x: Optional[np.ndarray]) -> np.ndarray:
        if x is None:
            return np.zeros(self.dim)
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise DimensionMismatchError(
                f"state has dimension {x.shape[-1]}, noise has dimension {self.dim}"
            )
        return x

    def state_distance(self, x: np.ndarray) -> np.ndarray:
        """Distance ||x - x*|| entering the scale factor (x* = origin unless wrapped)."""
        return row_norms(x)

    def sample(self, n: int, x: Optional[np.ndarray], rng: np.random.Generator) -> np.ndarray:
        """One draw of w_n given x_n, taken from the next position of the stream.

        Draws are sequential: n selects the law (q_n, s_n, ...) and the stream
        supplies the randomness, so calling sample for n = 0, 1, ... on a fresh
        trajectory stream reproduces what the engine draws block by block.

        Args:
            n: Step index
            x: Current state (None for state-independent models)
            rng: The trajectory's noise stream

        Returns:
            Noise vector of shape (dim,)

        Raises:
            DimensionMismatchError: If x has the wrong dimension
        """
        state = self._check_state(x)
        factor = float(self.scale_factor(self.state_distance(state)))
        return factor * self.sample_block(n, 1, rng)[0]

    def conditional_moment(self, n: int, x: Optional[np.ndarray], q: float) -> Optional[float]:
        """Exact E[||w_n||^q | x_n], or None when the moment is infinite.

        Raises:
            NoiseConfigError: If q < 1
            DimensionMismatchError: If x has the wrong dimension
        """
        if q < 1:
            raise NoiseConfigError(f"q must be >= 1, got {q}")
        state = self._check_state(x)
        moment = self.innovation_moment(n, q)
        if moment is None:
            return None
        return float(self.scale_factor(self.state_distance(state))) ** q * moment

    def atoms(self, n: int, x: Optional[np.ndarray]) -> Optional[Atoms]:
        """Support of w_n given x_n as (probability, vector) pairs, None if infinite."""
        state = self._check_state(x)
        scalar_atoms = self.innovation_atoms(n)
        if scalar_atoms is None:
            return None
        factor = float(self.scale_factor(self.state_distance(state)))
        return [(prob, factor * value * self.direction) for prob, value in scalar_atoms]

    def signed_moment(self, n: int, x: Optional[np.ndarray], order: int) -> float:
        """E[<w_n, e>^order | x_n] by atom enumeration.

        Raises:
            UnsupportedNoiseError: For laws without finite support
        """
        support = self.atoms(n, x)
        if support is None:
            raise UnsupportedNoiseError(
                f"signed moments need finite-support noise, got {self.family.value}"
            )
        return compensated_sum(
            [prob * float(np.dot(vec, self.direction)) ** order for prob, vec in support]
        )

    @abstractmethod
    def declared_bound(self) -> MomentBound:
        """Declared (A_p, B_p, p)."""

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """JSON fragment describing the model."""


class ZeroNoise(NoiseModel):
    """w_n = 0."""

    family = NoiseFamily.ZERO

    def __init__(self, dim: int = 1, p: float = 2.0) -> None:
        super().__init__(dim, None, p)

    def innovation_block(self, start: int, size: int, rng: np.random.Generator) -> np.ndarray:
        return np.zeros(size)

    def innovation_moment(self, n: int, q: float) -> Optional[float]:
        return 0.0

    def innovation_atoms(self, n: int) -> Optional[List[Tuple[float, float]]]:
        return [(1.0, 0.0)]

    def declared_bound(self) -> MomentBound:
        return MomentBound(0.0, 0.0, self.p)

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family.value}


class ThreePointMDS(NoiseModel):
    """Three-point martingale difference noise tuned to a step-size schedule.

    At step n the innovation is +s_n or -s_n with probability q_n each and 0
    otherwise, where s_n = (4 / alpha) (n + K)^xi and q_n = c (n + K)^(-xi p).
    With the companion schedule alpha_n = alpha (n + K)^(-xi) every firing moves
    the iterate by alpha_n s_n = 4, while the conditional p-th moment stays at
    2 c (4 / alpha)^p. Firings happen infinitely often exactly when xi p <= 1.
    """

    family = NoiseFamily.THREE_POINT

    def __init__(
        self,
        alpha: float,
        K: float,
        xi: float,
        p: float,
        c: float,
        dim: int = 1,
        direction: Optional[Sequence[float]] = None,
    ) -> None:
        if not alpha > 0:
            raise NoiseConfigError(f"alpha must be > 0, got {alpha}")
        if not K >= 1:
            raise NoiseConfigError(f"K must be >= 1, got {K}")
        if not 0 < xi <= 1:
            raise NoiseConfigError(f"xi must be in (0, 1], got {xi}")
        if not p >= 1:
            raise NoiseConfigError(f"p must be >= 1, got {p}")
        if not 0 < c <= 0.5:
            raise NoiseConfigError(f"c must be in (0, 1/2], got {c}")
        if p == 1:
            logger.warning("Three-point noise with p = 1: outside the p > 1 moment assumption")
        super().__init__(dim, direction, p)
        self.alpha = float(alpha)
        self.K = float(K)
        self.xi = float(xi)
        self.c = float(c)

    def magnitude(self, n: Any) -> Any:
        """s_n = (4 / alpha) (n + K)^xi (scalar or array)."""
        return (THREE_POINT_JUMP / self.alpha) * (np.asarray(n, dtype=float) + self.K) ** self.xi

    def firing_probability(self, n: Any) -> Any:
        """q_n = c (n + K)^(-xi p), the probability of each nonzero atom."""
        return self.c * (np.asarray(n, dtype=float) + self.K) ** (-self.xi * self.p)

    def innovation_block(self, start: int, size: int, rng: np.random.Generator) -> np.ndarray:
        steps = np.arange(start, start + size)
        u = rng.random(size)
        q = self.firing_probability(steps)
        s = self.magnitude(steps)
        return np.where(u < q, s, np.where(u < 2 * q, -s, 0.0))

    def innovation_atoms(self, n: int) -> Optional[List[Tuple[float, float]]]:
        q = float(self.firing_probability(n))
        s = float(self.magnitude(n))
        return [(q, s), (q, -s), (1.0 - 2.0 * q, 0.0)]

    def innovation_moment(self, n: int, q: float) -> Optional[float]:
        return 2.0 * float(self.firing_probability(n)) * float(self.magnitude(n)) ** q

    def declared_bound(self) -> MomentBound:
        return MomentBound(2.0 * self.c * (THREE_POINT_JUMP / self.alpha) ** self.p, 0.0, self.p)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family.value,
            "alpha": self.alpha,
            "K": self.K,
            "xi": self.xi,
            "p": self.p,
            "c": self.c,
        }


class IIDCentered(NoiseModel):
    """Centered i.i.d. innovations.

    Attributes:
        distribution: Innovation law
        sigma: Gaussian standard deviation
        tail: Pareto tail index a (E|w|^q < inf iff q < a)
        nu: Student-t degrees of freedom
        scale: Pareto minimum magnitude or Student-t scale
    """

    family = NoiseFamily.IID

    def __init__(
        self,
        distribution: IIDDistribution,
        p: float = 2.0,
        sigma: float = 1.0,
        tail: float = 3.0,
        nu: float = 3.0,
        scale: float = 1.0,
        dim: int = 1,
        direction: Optional[Sequence[float]] = None,
    ) -> None:
        self.distribution = IIDDistribution(distribution)
        if not p >= 1:
            raise NoiseConfigError(f"declared p must be >= 1, got {p}")
        if not sigma > 0 or not scale > 0:
            raise NoiseConfigError("sigma and scale must be > 0")
        if self.distribution == IIDDistribution.PARETO and not tail > p:
            raise NoiseConfigError(f"declared p={p} must be below the Pareto tail index {tail}")
        if self.distribution == IIDDistribution.STUDENT_T and not nu > p:
            raise NoiseConfigError(f"declared p={p} must be below the degrees of freedom {nu}")
        super().__init__(dim, direction, p)
        self.sigma = float(sigma)
        self.tail = float(tail)
        self.nu = float(nu)
        self.scale = float(scale)

    def innovation_block(self, start: int, size: int, rng: np.random.Generator) -> np.ndarray:
        if self.distribution == IIDDistribution.GAUSSIAN:
            return self.sigma * rng.standard_normal(size)
        if self.distribution == IIDDistribution.PARETO:
            u = rng.random((size, 2))
            magnitude = self.scale * (1.0 - u[:, 0]) ** (-1.0 / self.tail)
            return np.where(u[:, 1] < 0.5, magnitude, -magnitude)
        if self.distribution == IIDDistribution.STUDENT_T:
            return np.asarray(
                student_t.rvs(df=self.nu, scale=self.scale, size=size, random_state=rng),
                dtype=float,
            )
        u = rng.random(size)
        return np.where(u < 1.0 / 3.0, 2.0, -1.0)

    def innovation_atoms(self, n: int) -> Optional[List[Tuple[float, float]]]:
        if self.distribution == IIDDistribution.TWO_POINT:
            return [(1.0 / 3.0, 2.0), (2.0 / 3.0, -1.0)]
        return None

    def innovation_moment(self, n: int, q: float) -> Optional[float]:
        if self.distribution == IIDDistribution.GAUSSIAN:
            return float(
                self.sigma**q * 2 ** (q / 2) * gamma_fn((q + 1) / 2) / math.sqrt(math.pi)
            )
        if self.distribution == IIDDistribution.PARETO:
            if q >= self.tail:
                return None
            return self.tail * self.scale**q / (self.tail - q)
        if self.distribution == IIDDistribution.STUDENT_T:
            if q >= self.nu:
                return None
            return float(
                self.scale**q
                * self.nu ** (q / 2)
                * gamma_fn((q + 1) / 2)
                * gamma_fn((self.nu - q) / 2)
                / (math.sqrt(math.pi) * gamma_fn(self.nu / 2))
            )
        return (2.0**q + 2.0) / 3.0

    def declared_bound(self) -> MomentBound:
        moment = self.innovation_moment(0, self.p)
        assert moment is not None
        return MomentBound(moment, 0.0, self.p)

    def to_dict(self) -> Dict[str, Any]:
        fragment: Dict[str, Any] = {
            "family": self.family.value,
            "distribution": self.distribution.value,
            "p": self.p,
        }
        if self.distribution == IIDDistribution.GAUSSIAN:
            fragment["sigma"] = self.sigma
        elif self.distribution == IIDDistribution.PARETO:
            fragment.update({"tail": self.tail, "scale": self.scale})
        elif self.distribution == IIDDistribution.STUDENT_T:
            fragment.update({"nu": self.nu, "scale": self.scale})
        return fragment


class MultiplicativeWrap(NoiseModel):
    """w = (1 + lambda ||x - x*||) zeta with zeta drawn from a base model."""

    family = NoiseFamily.MULTIPLICATIVE

    def __init__(
        self, base: NoiseModel, lam: float, center: Optional[Sequence[float]] = None
    ) -> None:
        if not lam >= 0:
            raise NoiseConfigError(f"lambda must be >= 0, got {lam}")
        base_moment = base.innovation_moment(0, base.p)
        if base_moment is None:
            raise UnavailableMomentError(
                f"base noise has no finite moment of order {base.p}"
            )
        super().__init__(base.dim, base.direction, base.p)
        self.base = base
        self.lam = float(lam)
        self.base_moment = float(base_moment)
        self.center = np.zeros(self.dim) if center is None else np.asarray(center, dtype=float)

    def state_distance(self, x: np.ndarray) -> np.ndarray:
        return row_norms(x - self.center)

    def scale_factor(self, u: np.ndarray) -> np.ndarray:
        return 1.0 + self.lam * np.asarray(u, dtype=float)

    def innovation_block(self, start: int, size: int, rng: np.random.Generator) -> np.ndarray:
        return self.base.innovation_block(start, size, rng)

    def innovation_atoms(self, n: int) -> Optional[List[Tuple[float, float]]]:
        return self.base.innovation_atoms(n)

    def innovation_moment(self, n: int, q: float) -> Optional[float]:
        return self.base.innovation_moment(n, q)

    def declared_bound(self) -> MomentBound:
        factor = 2 ** (self.p - 1)
        return MomentBound(
            factor * self.base_moment, factor * self.lam**self.p * self.base_moment, self.p
        )

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family.value, "lambda": self.lam, "base": self.base.to_dict()}


def wrap_multiplicative(
    base: NoiseModel, lam: float, center: Optional[Sequence[float]] = None
) -> MultiplicativeWrap:
    """Scale a base model by (1 + lambda ||x - x*||); see MultiplicativeWrap."""
    return MultiplicativeWrap(base, lam, center)


def expected_jump_count(model: NoiseModel, N: int) -> float:
    """Expected number of nonzero three-point firings in steps 0, ..., N - 1.

    Args:
        model: Three-point noise (or a multiplicative wrap of one)
        N: Horizon, N >= 1

    Returns:
        sum of 2 q_n over n < N, exactly rounded

    Raises:
        UnsupportedNoiseError: For other noise families
        NoiseConfigError: If N < 1
    """
    if isinstance(model, MultiplicativeWrap):
        model = model.base
    if not isinstance(model, ThreePointMDS):
        raise UnsupportedNoiseError(
            f"expected jump count needs three-point noise, got {model.family.value}"
        )
    if N < 1:
        raise NoiseConfigError(f"N must be >= 1, got {N}")
    return compensated_sum(2.0 * model.firing_probability(np.arange(N)))
