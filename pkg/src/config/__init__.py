"""Scenario configuration."""

from .scenario import (
    CertificationConfig,
    ConfigError,
    DiagnosticsConfig,
    ScenarioConfig,
    build_lyapunov,
    build_noise,
    build_operator,
    build_schedule,
    load_scenario,
    parse_scenario,
)

__all__ = [
    "CertificationConfig",
    "ConfigError",
    "DiagnosticsConfig",
    "ScenarioConfig",
    "build_lyapunov",
    "build_noise",
    "build_operator",
    "build_schedule",
    "load_scenario",
    "parse_scenario",
]
