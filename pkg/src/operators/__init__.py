"""Operator zoo for the stochastic approximation recursion."""

from .base import (
    AffineOperator,
    MissingFixedPointError,
    NotHurwitzError,
    Operator,
    OperatorError,
    OperatorFamily,
    SelectorControlOperator,
    SingularMatrixError,
    SubspaceSolutionOperator,
)
from .checks import (
    fixed_point_residual,
    has_valid_fixed_point,
    pl_inequality_gaps,
    sample_ball,
    sampled_lipschitz_ratio,
    sampling_center,
    satisfies_lipschitz,
)
from .zoo import (
    NonexpansiveKind,
    PLGradientOperator,
    PLKind,
    make_constant_mean,
    make_contractive_affine,
    make_hurwitz_linear,
    make_nonexpansive,
    make_pl_gradient,
    make_selector_control,
)

__all__ = [
    "AffineOperator",
    "MissingFixedPointError",
    "NonexpansiveKind",
    "NotHurwitzError",
    "Operator",
    "OperatorError",
    "OperatorFamily",
    "PLGradientOperator",
    "PLKind",
    "SelectorControlOperator",
    "SingularMatrixError",
    "SubspaceSolutionOperator",
    "fixed_point_residual",
    "has_valid_fixed_point",
    "make_constant_mean",
    "make_contractive_affine",
    "make_hurwitz_linear",
    "make_nonexpansive",
    "make_pl_gradient",
    "make_selector_control",
    "pl_inequality_gaps",
    "sample_ball",
    "sampled_lipschitz_ratio",
    "sampling_center",
    "satisfies_lipschitz",
]
