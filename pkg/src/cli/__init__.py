"""Command-line front end."""

from .commands import (
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_OK,
    EXIT_VIOLATION,
    cmd_certify,
    cmd_oracle,
    cmd_phase_scan,
    cmd_run,
    parse_xi_list,
)

__all__ = [
    "EXIT_CONFIG",
    "EXIT_IO",
    "EXIT_OK",
    "EXIT_VIOLATION",
    "cmd_certify",
    "cmd_oracle",
    "cmd_phase_scan",
    "cmd_run",
    "parse_xi_list",
]
