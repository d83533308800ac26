"""Column-schema readers for the simulation suite's output files.

Every reader validates the exact header (and for the snapshot format, the
magic line) before touching the data, and raises SchemaError with the
offending file and expectation on any mismatch.  These readers never
recompute physics; they only load what the producing CLI documented.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

SNAPSHOT_MAGIC = "jjmeta-snapshot v1"

SCHEMAS = {
    "bands": ["k_rad_per_m", "omega_rad_per_s", "band_index"],
    "trajectory": ["t_s", "mode_index", "energy"],
    "probes": ["t_s", "probe_id", "phi_rad"],
    "spectrum": ["frequency_hz", "magnitude_db"],
    "spectrum_multi": ["frequency_hz", "magnitude_db", "carrier_hz"],
    "pattern": ["theta_deg", "intensity_db", "lobe_flag"],
    "zzmap": ["detuning_mhz", "strength_mhz", "zeta_mhz", "masked"],
}


class SchemaError(RuntimeError):
    """Input file does not match the documented column schema."""


def read_csv(path, schema: str) -> dict:
    """Load a CSV whose header must equal the named schema exactly.

    Returns a dict of column name -> float ndarray (``probe_id`` stays a
    string array).
    """
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"missing data file: {path}")
    expected = SCHEMAS[schema]
    with open(path) as fh:
        header = fh.readline().strip()
    if header.split(",") != expected:
        raise SchemaError(
            f"{path}: header {header!r} does not match schema {schema!r} "
            f"({','.join(expected)})"
        )
    try:
        raw = np.genfromtxt(path, delimiter=",", names=True, dtype=None,
                            encoding="utf-8")
    except ValueError as exc:
        raise SchemaError(f"{path}: cannot parse rows: {exc}") from exc
    if raw.size == 0:
        raise SchemaError(f"{path}: no data rows")
    raw = np.atleast_1d(raw)
    out = {}
    for name in expected:
        col = raw[name]
        if name == "probe_id":
            out[name] = col.astype(str)
        else:
            out[name] = col.astype(float)
    return out


def read_snapshot(path):
    """Read a field snapshot (ASCII header + raw little-endian float64)."""
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"missing snapshot file: {path}")
    raw = path.read_bytes()
    head_end = raw.find(b"\n\n")
    if head_end < 0:
        raise SchemaError(f"{path}: no header terminator")
    lines = raw[:head_end].decode("ascii", errors="replace").splitlines()
    if not lines or lines[0] != SNAPSHOT_MAGIC:
        raise SchemaError(f"{path}: bad magic line {lines[:1]!r}")
    try:
        dims = tuple(int(v) for v in lines[1].split()[1:])
        dx, dz = (float(v) for v in lines[2].split()[1:])
        t = float(lines[3].split()[1])
    except (IndexError, ValueError) as exc:
        raise SchemaError(f"{path}: malformed header: {exc}") from exc
    data = np.frombuffer(raw[head_end + 2:], dtype="<f8")
    if data.size != dims[0] * dims[1]:
        raise SchemaError(
            f"{path}: payload has {data.size} values, header says {dims}"
        )
    return data.reshape(dims), dx, dz, t


def read_budget(path) -> dict:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"missing report file: {path}")
    try:
        report = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    for key in ("power", "n_channels", "eps_total", "flags"):
        if key not in report:
            raise SchemaError(f"{path}: missing report key {key!r}")
    return report
