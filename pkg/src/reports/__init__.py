"""CSV, JSON and SVG artifacts."""

from .csv_export import (
    PHASE_COLUMNS,
    TRAJECTORY_COLUMNS,
    format_float,
    write_phase_csv,
    write_trajectories_csv,
)
from .json_export import FORMAT_VERSION, export_to_json, summary_document
from .svg_plot import plot_phase, plot_u_vs_k

__all__ = [
    "FORMAT_VERSION",
    "PHASE_COLUMNS",
    "TRAJECTORY_COLUMNS",
    "export_to_json",
    "format_float",
    "plot_phase",
    "plot_u_vs_k",
    "summary_document",
    "write_phase_csv",
    "write_trajectories_csv",
]
