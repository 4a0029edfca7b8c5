"""Type conversion utilities for JSON export.

Reports are assembled from numpy arrays and scalars, enums and dataclass
dictionaries. JSON needs Python-native values, and strict JSON has no
representation for infinities or NaN, so those become ``null``.
"""

import math
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np


def to_serializable(value: Any) -> Any:
    """Convert a nested structure to JSON-compatible Python types.

    This function handles:
    - numpy integers → int, numpy floats → float, numpy bools → bool
    - numpy arrays and tuples → lists
    - non-finite floats (inf, -inf, nan) → None
    - Enum members → their value, Path → str
    - nested lists and dicts → converted recursively

    Args:
        value: Any value that may contain numpy or enum types

    Returns:
        The same structure using only JSON-native types

    Examples:
        >>> to_serializable(np.float64(0.5))
        0.5
        >>> to_serializable({"u": [np.inf, 1.0]})
        {'u': [None, 1.0]}
    """
    if value is None:
        return None

    if isinstance(value, Enum):
        return to_serializable(value.value)

    if isinstance(value, (bool, np.bool_)):
        return bool(value)

    if isinstance(value, (int, np.integer)):
        return int(value)

    if isinstance(value, (float, np.floating)):
        as_float = float(value)
        return as_float if math.isfinite(as_float) else None

    if isinstance(value, np.ndarray):
        return [to_serializable(item) for item in value.tolist()]

    if isinstance(value, (list, tuple)):
        return [to_serializable(item) for item in value]

    if isinstance(value, dict):
        return {str(key): to_serializable(val) for key, val in value.items()}

    if isinstance(value, Path):
        return str(value)

    return value
