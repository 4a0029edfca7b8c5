"""Reproducible per-trajectory random streams.

Every trajectory owns a Philox counter-based generator keyed by
(base_seed, trajectory_id, purpose). Streams never share state, so an ensemble
produces the same draws whatever the order in which trajectories run.
"""

from enum import IntEnum

import numpy as np

MAX_SEED = 2**64


class StreamPurpose(IntEnum):
    """Independent uses of randomness within one trajectory."""

    NOISE = 0
    INITIAL_STATE = 1
    SAMPLING = 2


def trajectory_stream(
    base_seed: int, trajectory_id: int, purpose: StreamPurpose = StreamPurpose.NOISE
) -> np.random.Generator:
    """Generator for one (trajectory, purpose) pair.

    Args:
        base_seed: Unsigned 64-bit ensemble seed
        trajectory_id: Index of the trajectory within the ensemble
        purpose: What the stream is used for

    Returns:
        Philox-backed generator

    Raises:
        ValueError: If the seed or the trajectory id is out of range
    """
    if not 0 <= base_seed < MAX_SEED:
        raise ValueError(f"base_seed must be an unsigned 64-bit integer, got {base_seed}")
    if trajectory_id < 0:
        raise ValueError(f"trajectory_id must be >= 0, got {trajectory_id}")
    seed_seq = np.random.SeedSequence(
        entropy=int(base_seed), spawn_key=(int(trajectory_id), int(purpose))
    )
    return np.random.Generator(np.random.Philox(seed_seq))
