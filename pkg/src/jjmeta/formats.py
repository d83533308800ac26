"""On-disk formats emitted by the CLI; the contract consumed by plot tools.

Every CSV has an exact one-line header; columns are written with repr-level
precision so identical inputs produce byte-identical files.  Schemas:

* bands.csv                 k_rad_per_m,omega_rad_per_s,band_index
* trajectory.csv            t_s,mode_index,energy
* probes.csv                t_s,probe_id,phi_rad
* spectrum.csv              frequency_hz,magnitude_db[,carrier_hz]
* pattern.csv               theta_deg,intensity_db,lobe_flag
* zzmap.csv                 detuning_mhz,strength_mhz,zeta_mhz,masked
* inductance_series.csv     harmonic_index,amplitude,frequency_hz
* budget.json               full BudgetReport dictionary
* zzmap_summary.json        static ZZ, pole lines, extrema
* snapshot .field files     ASCII header then raw little-endian float64:

      jjmeta-snapshot v1
      dims <n_x> <n_z>
      spacing_m <dx> <dz>
      time_s <t>
      <blank line>
      <n_x * n_z float64 values, C order>
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

SNAPSHOT_MAGIC = "jjmeta-snapshot v1"


def _write_rows(path, header, rows):
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")


def write_bands_csv(path, scan) -> None:
    """bands.csv from a DispersionScan: one row per (band, k) point."""
    rows = []
    for band in scan.bands:
        for k, w in zip(band.k, band.omega):
            rows.append((float(k), float(w), band.label))
    _write_rows(path, "k_rad_per_m,omega_rad_per_s,band_index", rows)


def write_trajectory_csv(path, traj) -> None:
    """trajectory.csv from a ModeTrajectory: per-mode energy series."""
    rows = []
    for i, t in enumerate(traj.t):
        for m in range(traj.energies.shape[1]):
            rows.append((float(t), m + 1, float(traj.energies[i, m])))
    _write_rows(path, "t_s,mode_index,energy", rows)


def write_probes_csv(path, record) -> None:
    """probes.csv from a FieldRecord."""
    rows = []
    for pid, series in record.probes.items():
        for t, v in zip(record.t, series):
            rows.append((float(t), pid, float(v)))
    _write_rows(path, "t_s,probe_id,phi_rad", rows)


def write_spectrum_csv(path, spec, carrier_hz=None) -> None:
    """spectrum.csv from a Spectrum (optionally tagged with its carrier)."""
    db = spec.magnitude_db()
    if carrier_hz is None:
        _write_rows(
            path,
            "frequency_hz,magnitude_db",
            zip(map(float, spec.frequency_hz), map(float, db)),
        )
    else:
        rows = [
            (float(f), float(v), float(carrier_hz))
            for f, v in zip(spec.frequency_hz, db)
        ]
        _write_rows(path, "frequency_hz,magnitude_db,carrier_hz", rows)


def write_pattern_csv(path, pattern) -> None:
    """pattern.csv from a RadiationPattern; lobe_flag marks detected lobes."""
    lobe_idx = set()
    for lobe in pattern.lobes:
        lobe_idx.add(int(np.argmin(np.abs(pattern.theta_deg - lobe.angle_deg))))
    rows = [
        (float(th), float(db), 1 if i in lobe_idx else 0)
        for i, (th, db) in enumerate(zip(pattern.theta_deg, pattern.intensity_db))
    ]
    _write_rows(path, "theta_deg,intensity_db,lobe_flag", rows)


def write_zzmap_csv(path, zmap) -> None:
    """zzmap.csv: one row per grid cell; masked cells carry zeta = nan."""
    rows = []
    for i, om in enumerate(zmap.strength_mhz):
        for k, det in enumerate(zmap.detuning_mhz):
            rows.append(
                (
                    float(det),
                    float(om),
                    float(zmap.zeta_mhz[i, k]),
                    int(zmap.mask[i, k]),
                )
            )
    _write_rows(path, "detuning_mhz,strength_mhz,zeta_mhz,masked", rows)


def write_zzmap_summary(path, zmap) -> None:
    finite = zmap.zeta_mhz[~zmap.mask]
    payload = {
        "static_zz_mhz": zmap.static_zz_mhz,
        "pole_lines_mhz": zmap.metadata.get("pole_lines_mhz", []),
        "min_zeta_mhz": float(np.nanmin(finite)),
        "max_zeta_mhz": float(np.nanmax(finite)),
        "masked_cells": int(zmap.mask.sum()),
        "caption_note": zmap.metadata.get("caption_note", ""),
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True))


def write_inductance_series_csv(path, series) -> None:
    """inductance_series.csv from an InductanceSeries."""
    rows = [(t.index, float(t.amplitude), float(t.omega / (2.0 * np.pi)))
            for t in series.terms]
    _write_rows(path, "harmonic_index,amplitude,frequency_hz", rows)


def write_snapshot(path, field: np.ndarray, dx: float, dz: float, t: float) -> None:
    """Write one field snapshot in the documented header+raw format."""
    arr = np.atleast_2d(np.asarray(field, dtype="<f8"))
    header = (
        f"{SNAPSHOT_MAGIC}\n"
        f"dims {arr.shape[0]} {arr.shape[1]}\n"
        f"spacing_m {dx!r} {dz!r}\n"
        f"time_s {t!r}\n"
        "\n"
    )
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(arr.tobytes(order="C"))


def read_snapshot(path):
    """Read a snapshot file; returns (field, dx, dz, t)."""
    raw = Path(path).read_bytes()
    head_end = raw.index(b"\n\n") + 2
    lines = raw[:head_end].decode("ascii").strip().splitlines()
    if lines[0] != SNAPSHOT_MAGIC:
        raise ValueError(f"not a snapshot file: {lines[0]!r}")
    dims = tuple(int(v) for v in lines[1].split()[1:])
    dx, dz = (float(v) for v in lines[2].split()[1:])
    t = float(lines[3].split()[1])
    data = np.frombuffer(raw[head_end:], dtype="<f8").reshape(dims)
    return data, dx, dz, t
