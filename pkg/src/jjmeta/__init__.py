"""Simulation and budgeting suite for space-time modulated junction lines."""

__version__ = "0.1.0"

from .constants import CONSTANTS, PHI0, PHI0_REDUCED, hz_to_angular, angular_to_hz
from .params import (
    ConfigError,
    GridSpec,
    JunctionParams,
    ModulationParams,
    ParseError,
    ProbeSpec,
    RunSpec,
    ScenarioConfig,
    SourceSpec,
    ValidationError,
    config_from_dict,
    derived_velocity,
    load_config,
)

__all__ = [
    "CONSTANTS",
    "PHI0",
    "PHI0_REDUCED",
    "hz_to_angular",
    "angular_to_hz",
    "ConfigError",
    "GridSpec",
    "JunctionParams",
    "ModulationParams",
    "ParseError",
    "ProbeSpec",
    "RunSpec",
    "ScenarioConfig",
    "SourceSpec",
    "ValidationError",
    "config_from_dict",
    "derived_velocity",
    "load_config",
    "__version__",
]
