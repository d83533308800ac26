"""Validated scenario parameters and configuration loading.

A scenario is described by a YAML file with nested sections (``junction``,
``modulation``, ``grid``, ``source``, ``probes``, ``run``).  Frequencies are
written in Hz in files and stored internally as angular frequencies (rad/s).
Defaults mirror the proposed-architecture parameter table: a 100-junction
line with 10 um pitch, 5 GHz carrier and 2 GHz modulation bandwidth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from pathlib import Path

import yaml

from .constants import PHI0, TWO_PI, hz_to_angular, angular_to_hz


class ConfigError(Exception):
    """Base class for configuration problems."""


class ParseError(ConfigError):
    """The file could not be parsed as structured text."""


class ValidationError(ConfigError):
    """A parsed value violates an invariant; the message names the field."""


def _require_positive(name: str, value: float) -> None:
    if not math.isfinite(value) or value <= 0.0:
        raise ValidationError(f"{name} must be strictly positive, got {value!r}")


@dataclass(frozen=True)
class JunctionParams:
    """Per-cell parameters of the shunted-junction transmission line.

    Attributes
    ----------
    i_c0 : float
        Maximum junction critical current (A).
    c_shunt : float
        Shunt capacitance per cell (F).
    c_j : float
        Junction capacitance per cell (F).
    a : float
        Cell pitch (m).
    r_n : float
        Normal-state resistance (ohm).
    n_cells : int
        Number of cells (per side for the 2D lattice).
    """

    i_c0: float = 10e-6
    c_shunt: float = 32.9e-15
    c_j: float = 50e-15
    a: float = 10e-6
    r_n: float = 100.0
    n_cells: int = 100

    def __post_init__(self):
        _require_positive("junction.i_c0", self.i_c0)
        _require_positive("junction.c_shunt", self.c_shunt)
        _require_positive("junction.c_j", self.c_j)
        _require_positive("junction.a", self.a)
        _require_positive("junction.r_n", self.r_n)
        if self.n_cells < 2:
            raise ValidationError(
                f"junction.n_cells must be >= 2, got {self.n_cells}"
            )

    @property
    def l_j0(self) -> float:
        """Unbiased Josephson inductance per cell, Phi0 / (2 pi I_c0) (H)."""
        return PHI0 / (TWO_PI * self.i_c0)

    @property
    def length(self) -> float:
        """Total line length n_cells * a (m)."""
        return self.n_cells * self.a


@dataclass(frozen=True)
class ModulationParams:
    """Modulation drive parameters.

    Two drive conventions exist and a scenario activates exactly one:

    * phase drive: static bias ``theta`` plus an RF phase excursion of depth
      ``delta_phi`` at ``omega_rf`` (inductance ripple appears at even
      multiples of ``omega_rf``);
    * traveling-wave drive: direct fractional modulation ``delta_i`` of the
      critical current (equivalently of the inverse inductance) with
      wavenumber ``k_m`` and frequency ``omega_m``.

    ``theta`` and ``delta_phi`` are radians; ``omega_rf`` / ``omega_m`` are
    rad/s; ``k_m`` is rad/m; ``delta_i`` is dimensionless in [0, 1).
    """

    theta: float = 0.0
    delta_phi: float = 0.0
    omega_rf: float = hz_to_angular(2.0e9)
    delta_i: float = 0.0
    omega_m: float = 0.0
    k_m: float = 0.0

    def __post_init__(self):
        if self.delta_phi < 0.0:
            raise ValidationError(
                f"modulation.delta_phi must be >= 0, got {self.delta_phi}"
            )
        if not 0.0 <= self.delta_i < 1.0:
            raise ValidationError(
                "modulation.delta_i depth out of range [0, 1), "
                f"got {self.delta_i}"
            )
        if self.delta_phi > 0.0 and self.delta_i > 0.0:
            raise ValidationError(
                "modulation uses exactly one drive convention: set either "
                "delta_phi (phase drive) or delta_i (traveling drive), not both"
            )

    @property
    def is_traveling(self) -> bool:
        return self.delta_i > 0.0


@dataclass(frozen=True)
class GridSpec:
    """Discretization of the solver domain.

    ``dt`` may be left as None, in which case it is derived from the Courant
    number at run time.  1D grids ignore ``dx`` and ``n_x``.
    """

    dimension: int = 1
    dz: float = 24e-6
    dx: float = 24e-6
    dt: float | None = None
    n_z: int = 2000
    n_x: int = 1
    courant: float = 0.9

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValidationError(f"grid.dimension must be 1 or 2, got {self.dimension}")
        _require_positive("grid.dz", self.dz)
        if self.dimension == 2:
            _require_positive("grid.dx", self.dx)
            if self.n_x < 3:
                raise ValidationError(f"grid.n_x must be >= 3 in 2D, got {self.n_x}")
        if self.dt is not None:
            _require_positive("grid.dt", self.dt)
        if self.n_z < 3:
            raise ValidationError(f"grid.n_z must be >= 3, got {self.n_z}")
        if not 0.0 < self.courant <= 1.0:
            raise ValidationError(
                f"grid.courant must lie in (0, 1], got {self.courant}"
            )


@dataclass(frozen=True)
class SourceSpec:
    """Gaussian-windowed sinusoidal drive injected into the field.

    ``omega0`` is the carrier (rad/s), ``t_center``/``t_width`` the envelope
    center and standard deviation (s), ``amplitude`` the injected phase
    amplitude (rad).  ``cells`` are interior injection indices (z index in
    1D, row-major (ix, iz) pairs in 2D).  ``hard`` replaces the field value
    instead of adding to it.
    """

    omega0: float = hz_to_angular(5.0e9)
    t_center: float = 2.0e-9
    t_width: float = 0.5e-9
    amplitude: float = 1e-3
    cells: tuple = (100,)
    hard: bool = False

    def __post_init__(self):
        _require_positive("source.t_width", self.t_width)
        if not self.cells:
            raise ValidationError("source.cells must list at least one cell")

    def waveform(self, t):
        """Evaluate the source signal at time(s) t."""
        import numpy as np

        envelope = np.exp(-0.5 * ((t - self.t_center) / self.t_width) ** 2)
        return self.amplitude * envelope * np.sin(self.omega0 * t)


@dataclass(frozen=True)
class ProbeSpec:
    """A recorded cell: an id plus a z index (and x index in 2D)."""

    probe_id: str
    iz: int
    ix: int = 0


@dataclass(frozen=True)
class RunSpec:
    """Run duration and output cadence."""

    n_steps: int = 2000
    snapshot_stride: int = 0
    boundary: str = "mur"

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValidationError(f"run.n_steps must be >= 1, got {self.n_steps}")
        if self.snapshot_stride < 0:
            raise ValidationError("run.snapshot_stride must be >= 0")
        if self.boundary not in ("mur", "fixed"):
            raise ValidationError(
                f"run.boundary must be 'mur' or 'fixed', got {self.boundary!r}"
            )


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully validated scenario: junction line, drive, grid, source, probes."""

    junction: JunctionParams = field(default_factory=JunctionParams)
    modulation: ModulationParams = field(default_factory=ModulationParams)
    grid: GridSpec = field(default_factory=GridSpec)
    source: SourceSpec = field(default_factory=SourceSpec)
    probes: tuple = (ProbeSpec("p0", 1500),)
    run: RunSpec = field(default_factory=RunSpec)
    include_gradient_terms: bool = False

    def to_dict(self) -> dict:
        """File-convention view of the config (frequencies in Hz)."""
        d = asdict(self)
        d["modulation"]["f_rf_hz"] = angular_to_hz(d["modulation"].pop("omega_rf"))
        d["modulation"]["f_m_hz"] = angular_to_hz(d["modulation"].pop("omega_m"))
        d["source"]["f0_hz"] = angular_to_hz(d["source"].pop("omega0"))
        d["probes"] = [asdict(p) for p in self.probes]
        return d


_FREQ_KEYS = {
    ("modulation", "f_rf_hz"): "omega_rf",
    ("modulation", "f_m_hz"): "omega_m",
    ("source", "f0_hz"): "omega0",
}


def _build_section(cls, section: str, data: dict, extra: dict | None = None):
    known = set(cls.__dataclass_fields__)
    kwargs = dict(extra or {})
    for key, value in data.items():
        target = _FREQ_KEYS.get((section, key))
        if target is not None:
            kwargs[target] = hz_to_angular(float(value))
            continue
        if key not in known:
            raise ValidationError(f"unknown field {section}.{key}")
        f = cls.__dataclass_fields__[key]
        if f.type in ("float", "float | None") and value is not None:
            value = float(value)
        kwargs[key] = value
    return cls(**kwargs)


def config_from_dict(raw: dict) -> ScenarioConfig:
    """Build and validate a ScenarioConfig from a nested dict (Hz units)."""
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ParseError(f"top level must be a mapping, got {type(raw).__name__}")
    unknown = set(raw) - {
        "junction", "modulation", "grid", "source", "probes", "run",
        "include_gradient_terms",
    }
    if unknown:
        raise ValidationError(f"unknown section(s): {sorted(unknown)}")

    junction = _build_section(JunctionParams, "junction", raw.get("junction", {}))
    modulation = _build_section(ModulationParams, "modulation", raw.get("modulation", {}))
    grid = _build_section(GridSpec, "grid", raw.get("grid", {}))
    source_raw = dict(raw.get("source", {}))
    if "cells" in source_raw:
        cells = source_raw["cells"]
        source_raw["cells"] = tuple(
            tuple(c) if isinstance(c, (list, tuple)) else int(c) for c in cells
        )
    source = _build_section(SourceSpec, "source", source_raw)
    run = _build_section(RunSpec, "run", raw.get("run", {}))

    probes = []
    for i, p in enumerate(raw.get("probes", [])):
        if not isinstance(p, dict) or "iz" not in p:
            raise ValidationError(f"probes[{i}] must be a mapping with an 'iz' index")
        probes.append(
            ProbeSpec(str(p.get("probe_id", f"p{i}")), int(p["iz"]), int(p.get("ix", 0)))
        )
    if not probes:
        probes = [ProbeSpec("p0", min(grid.n_z - 2, 1500))]

    return ScenarioConfig(
        junction=junction,
        modulation=modulation,
        grid=grid,
        source=source,
        probes=tuple(probes),
        run=run,
        include_gradient_terms=bool(raw.get("include_gradient_terms", False)),
    )


def load_config(path) -> ScenarioConfig:
    """Load, parse and validate a YAML scenario file.

    Raises ParseError on malformed or empty files (with the YAML line mark
    where available) and ValidationError naming the offending field.
    """
    text = Path(path).read_text()
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:  # pragma: no cover - message passthrough
        raise ParseError(f"cannot parse {path}: {exc}") from exc
    if raw is None:
        raise ParseError(f"empty config file: {path}")
    return config_from_dict(raw)


def derived_velocity(junction: JunctionParams) -> float:
    """Wave speed 1/sqrt(L' C') of the unmodulated line (m/s).

    L' = L_J0 / a and C' = C_shunt / a are the per-unit-length line
    parameters of the discrete lattice with pitch a.
    """
    l_per = junction.l_j0 / junction.a
    c_per = junction.c_shunt / junction.a
    return 1.0 / math.sqrt(l_per * c_per)
