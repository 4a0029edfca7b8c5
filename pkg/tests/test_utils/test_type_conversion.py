"""Tests for JSON type conversion."""

import json
import math
from enum import Enum
from pathlib import Path

import numpy as np

from src.utils.type_conversion import to_serializable


class Colour(str, Enum):
    RED = "red"


def test_numpy_scalars_become_native():
    """numpy ints, floats and bools convert to Python types."""
    converted = to_serializable([np.int64(3), np.float64(0.5), np.bool_(True)])

    assert converted == [3, 0.5, True]
    assert [type(item) for item in converted] == [int, float, bool]


def test_non_finite_floats_become_null():
    """Strict JSON has no inf or nan."""
    converted = to_serializable({"u": [math.inf, -math.inf, math.nan, 1.0]})

    assert converted == {"u": [None, None, None, 1.0]}
    json.dumps(converted, allow_nan=False)


def test_arrays_tuples_enums_and_paths():
    """Containers recurse; enums and paths become strings."""
    document = {
        "x": np.array([[1.0, np.inf]]),
        "pair": (1, 2),
        "colour": Colour.RED,
        "path": Path("out") / "run.json",
        1: "key",
    }

    assert to_serializable(document) == {
        "x": [[1.0, None]],
        "pair": [1, 2],
        "colour": "red",
        "path": str(Path("out") / "run.json"),
        "1": "key",
    }
