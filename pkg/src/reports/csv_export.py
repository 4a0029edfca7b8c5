"""CSV export of trajectory checkpoints and phase tables.

Floats are written with 17 significant digits, enough to round-trip an IEEE
double, and rows use "\\n" endings on every platform.
"""

import csv
import logging
import math
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from src.engine.scenarios import PhaseRow
from src.engine.trajectory import TrajectoryRecord

logger = logging.getLogger(__name__)

TRAJECTORY_COLUMNS = ("trajectory_id", "k", "u")
PHASE_COLUMNS = ("xi", "admissible", "converged_fraction", "mean_jumps", "analytic_jumps")


def format_float(value: Optional[float]) -> str:
    """17-significant-digit text; inf and nan are spelled out, None is empty."""
    if value is None:
        return ""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def _format_bool(value: Optional[bool]) -> str:
    if value is None:
        return ""
    return "true" if value else "false"


def write_trajectories_csv(
    records: Iterable[TrajectoryRecord], output_path: Union[str, Path]
) -> int:
    """Write one row per (trajectory, checkpoint).

    Args:
        records: Trajectory records in id order
        output_path: Destination file

    Returns:
        Number of data rows written
    """
    rows = 0
    with open(output_path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TRAJECTORY_COLUMNS)
        for record in records:
            for k, u in record.checkpoints:
                writer.writerow([record.trajectory_id, k, format_float(u)])
                rows += 1
    logger.info(f"Wrote {rows} checkpoint rows to {output_path}")
    return rows


def write_phase_csv(rows: Sequence[PhaseRow], output_path: Union[str, Path]) -> None:
    """Write the phase table, one row per xi."""
    with open(output_path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(PHASE_COLUMNS)
        for row in rows:
            writer.writerow(
                [
                    format_float(row.xi),
                    _format_bool(row.admissible),
                    format_float(row.converged_fraction),
                    format_float(row.mean_jumps),
                    format_float(row.analytic_jumps),
                ]
            )
    logger.info(f"Wrote {len(rows)} phase rows to {output_path}")
