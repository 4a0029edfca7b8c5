"""Deterministic SVG charts.

matplotlib runs on the Agg backend with a fixed hash salt and without a date
stamp, so the same data always yields the same SVG bytes.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from src.engine.scenarios import PhaseRow  # noqa: E402

logger = logging.getLogger(__name__)

FIGURE_SIZE = (8.0, 6.0)  # 800 x 600 at 100 dpi
DPI = 100
SVG_METADATA: Dict[str, Optional[str]] = {"Date": None, "Creator": None}
RC_PARAMS = {"svg.hashsalt": "sa-lab", "svg.fonttype": "none", "path.simplify": False}


def _save(fig: plt.Figure, output_path: Union[str, Path]) -> None:
    fig.savefig(output_path, format="svg", dpi=DPI, metadata=SVG_METADATA)
    plt.close(fig)
    logger.info(f"Chart written to {output_path}")


def _positive(values: Sequence[float]) -> np.ndarray:
    data = np.asarray(values, dtype=float)
    return np.where(np.isfinite(data) & (data > 0), data, np.nan)


def plot_u_vs_k(
    curve: List[Dict[str, float]], output_path: Union[str, Path], title: str = ""
) -> None:
    """Log-log chart of the median u_k with its interquartile band.

    Args:
        curve: Checkpoint curve rows {"k", "q25", "q50", "q75"}
        output_path: Destination SVG
        title: Chart title

    Points with u_k = 0 or u_k = inf have no place on a log axis and are left out.
    """
    k = np.asarray([row["k"] for row in curve], dtype=float) + 1.0
    median = _positive([row["q50"] for row in curve])
    lower = _positive([row["q25"] for row in curve])
    upper = _positive([row["q75"] for row in curve])

    with plt.rc_context(RC_PARAMS):
        fig, ax = plt.subplots(figsize=FIGURE_SIZE)
        ax.fill_between(k, lower, upper, color="tab:blue", alpha=0.25, label="interquartile range")
        ax.plot(k, median, color="tab:blue", linewidth=1.5, label="median")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("k + 1")
        ax.set_ylabel("u_k = ||x_k - x*||")
        ax.set_title(title)
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(loc="best")
        _save(fig, output_path)


def plot_phase(
    rows: Sequence[PhaseRow],
    output_path: Union[str, Path],
    p: Optional[float] = None,
    title: str = "",
) -> None:
    """Converged fraction against xi, with the threshold 1/p marked when p is known."""
    xi = [row.xi for row in rows]
    fraction = [row.converged_fraction for row in rows]

    with plt.rc_context(RC_PARAMS):
        fig, ax = plt.subplots(figsize=FIGURE_SIZE)
        ax.plot(xi, fraction, marker="o", color="tab:blue", label="converged fraction")
        if p is not None:
            ax.axvline(1.0 / p, color="tab:red", linestyle="--", label=f"1/p = {1.0 / p:.4g}")
        ax.set_xlim(0.0, 1.05)
        ax.set_ylim(-0.05, 1.05)
        ax.set_xlabel("xi")
        ax.set_ylabel("converged fraction")
        ax.set_title(title)
        ax.grid(True, alpha=0.3)
        ax.legend(loc="best")
        _save(fig, output_path)
