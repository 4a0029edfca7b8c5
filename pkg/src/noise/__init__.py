"""Noise models and reproducible random streams."""

from .models import (
    THREE_POINT_JUMP,
    DimensionMismatchError,
    IIDCentered,
    IIDDistribution,
    MomentBound,
    MultiplicativeWrap,
    NoiseConfigError,
    NoiseFamily,
    NoiseModel,
    ThreePointMDS,
    UnavailableMomentError,
    UnsupportedNoiseError,
    ZeroNoise,
    expected_jump_count,
    wrap_multiplicative,
)
from .streams import MAX_SEED, StreamPurpose, trajectory_stream

__all__ = [
    "MAX_SEED",
    "THREE_POINT_JUMP",
    "DimensionMismatchError",
    "IIDCentered",
    "IIDDistribution",
    "MomentBound",
    "MultiplicativeWrap",
    "NoiseConfigError",
    "NoiseFamily",
    "NoiseModel",
    "StreamPurpose",
    "ThreePointMDS",
    "UnavailableMomentError",
    "UnsupportedNoiseError",
    "ZeroNoise",
    "expected_jump_count",
    "trajectory_stream",
    "wrap_multiplicative",
]
