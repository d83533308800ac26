"""Command-line front end: reproducible scenario runs with persisted outputs.

Every invocation creates (or reuses) an output directory, writes a
``manifest.json`` (subcommand, config path and hash, timestamps, version)
before any result file, then emits the module's documented CSV/JSON
formats.  Exit codes: 0 success, 2 configuration error, 3 numerical
failure, 4 I/O failure.  The suite draws no random numbers, so identical
inputs give byte-identical data files (the manifest timestamp aside).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .constants import hz_to_angular
from .params import (
    ConfigError,
    ScenarioConfig,
    ValidationError,
    config_from_dict,
    derived_velocity,
)
from . import analysis, budget, fdtd, formats, modes, modulation, sizzle

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4

FIGURE_IDS = ("fig2a", "fig2b", "fig2e", "fig4", "fig5", "fig3b", "table2")


def _parse_override(text):
    if "=" not in text:
        raise ValidationError(f"override must look like key.path=value, got {text!r}")
    key, value = text.split("=", 1)
    return key.strip(), yaml.safe_load(value)


def _apply_overrides(raw: dict, overrides) -> dict:
    for key, value in overrides:
        node = raw
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ValidationError(f"override path {key!r} crosses a scalar")
        node[parts[-1]] = value
    return raw


def _load_scenario(args) -> ScenarioConfig:
    raw = {}
    if args.config:
        text = Path(args.config).read_text()
        raw = yaml.safe_load(text)
        if raw is None:
            raise ConfigError(f"empty config file: {args.config}")
    raw = _apply_overrides(raw, [_parse_override(o) for o in args.override])
    return config_from_dict(raw)


def _write_manifest(args, outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    digest = ""
    if args.config:
        digest = hashlib.sha256(Path(args.config).read_bytes()).hexdigest()
    manifest = {
        "subcommand": args.command,
        "config": str(args.config) if args.config else None,
        "overrides": list(args.override),
        "out_dir": str(outdir),
        "started_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "version": __version__,
        "input_sha256": digest,
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))


# --- subcommand bodies -------------------------------------------------------


def cmd_dispersion(args, outdir: Path) -> None:
    cfg = _load_scenario(args)
    jp, mod = cfg.junction, cfg.modulation
    v = derived_velocity(jp)
    k0 = cfg.source.omega0 / v
    kmax = args.k_max_frac * k0
    half = np.linspace(kmax / args.k_points, kmax, args.k_points)
    k_grid = np.concatenate([-half[::-1], half])
    scan = modes.dispersion_scan(
        jp, mod, k_grid, n_harmonics=args.n_harmonics,
        omega_window=(0.02 * v * kmax, 1.35 * v * kmax),
    )
    formats.write_bands_csv(outdir / "bands.csv", scan)
    (outdir / "dispersion_summary.json").write_text(
        json.dumps(
            {
                "bands": sorted(b.label for b in scan.bands),
                "asymmetry_rad_per_s": scan.asymmetry(0),
                "diagnostics": list(scan.diagnostics),
            },
            indent=2,
            sort_keys=True,
        )
    )


def cmd_modes(args, outdir: Path) -> None:
    cfg = _load_scenario(args)
    jp = cfg.junction
    mod = modes.resonant_modulation(jp, args.depth)
    v = derived_velocity(jp)
    t1 = 2.0 * math.pi / (math.pi * v / jp.length)
    amps = [0.0] * args.n_modes
    amps[args.start_mode - 1] = 1.0
    traj = modes.evolve_modes(
        jp, mod, args.n_modes, amps, duration=args.periods * t1,
        samples_per_period=args.samples_per_period,
    )
    formats.write_trajectory_csv(outdir / "trajectory.csv", traj)
    series = modulation.expand_taylor(
        cfg.modulation.delta_phi, cfg.modulation.theta, order=4,
        i_c0=jp.i_c0, omega_rf=cfg.modulation.omega_rf,
    )
    formats.write_inductance_series_csv(outdir / "inductance_series.csv", series)


def cmd_fdtd(args, outdir: Path) -> None:
    cfg = _load_scenario(args)
    record = fdtd.run(cfg)
    formats.write_probes_csv(outdir / "probes.csv", record)
    for i, (snap, t_snap) in enumerate(zip(record.snapshots, record.snapshot_times)):
        formats.write_snapshot(
            outdir / f"snapshot_{i:04d}.field", snap, cfg.grid.dx, cfg.grid.dz, t_snap
        )


def cmd_spectrum(args, outdir: Path) -> None:
    rows = np.genfromtxt(
        args.input, delimiter=",", names=True, dtype=None, encoding="utf-8"
    )
    ids = np.unique(rows["probe_id"]).tolist()
    probe = args.probe or ids[0]
    sel = rows[rows["probe_id"] == probe]
    t, phi = sel["t_s"], sel["phi_rad"]
    if len(t) < 2:
        raise ValidationError(f"probe {probe!r} not found in {args.input}")
    dt = float(t[1] - t[0])
    steps = np.diff(t)
    if np.max(np.abs(steps - dt)) > 1e-6 * dt:
        raise ValidationError(
            f"probe {probe!r} is not uniformly sampled; spectra need a"
            " uniform grid"
        )
    spec = analysis.spectrum(
        phi, dt, window=args.window, f0_hz=args.f0_ghz and args.f0_ghz * 1e9,
        f_mod_hz=args.f_mod_ghz and args.f_mod_ghz * 1e9,
    )
    formats.write_spectrum_csv(outdir / "spectrum.csv", spec)
    (outdir / "peaks.json").write_text(
        json.dumps(
            [
                {"frequency_hz": p.frequency_hz, "magnitude_db": p.magnitude_db,
                 "label": p.label}
                for p in spec.peaks
            ],
            indent=2,
        )
    )


def _pattern_outputs(outdir, targets_deg, k0, pitch, n_elements):
    exc = analysis.beam_plan(targets_deg, k0, pitch, n_elements)
    pattern = analysis.far_field(exc, k0, pitch)
    formats.write_pattern_csv(outdir / "pattern.csv", pattern)
    (outdir / "lobes.json").write_text(
        json.dumps(
            {
                "targets_deg": list(map(float, targets_deg)),
                "lobes": [
                    {"angle_deg": l.angle_deg, "level_db": l.level_db,
                     "width_deg": l.width_deg}
                    for l in pattern.lobes
                ],
            },
            indent=2,
        )
    )


def cmd_pattern(args, outdir: Path) -> None:
    if args.targets:
        targets = [float(v) for v in args.targets.split(",")]
    else:
        span = math.sin(math.radians(args.span_deg))
        targets = np.degrees(np.arcsin(np.linspace(-span, span, args.n_beams)))
    pitch = 10e-6
    _pattern_outputs(outdir, targets, args.k0_pitch / pitch, pitch, args.n_elements)


def cmd_sizzle(args, outdir: Path) -> None:
    q1, q2, j = sizzle.fig3b_qubits()
    det = np.linspace(args.det_min_mhz, args.det_max_mhz, args.grid_points)
    om = np.linspace(0.0, args.strength_max_mhz, args.grid_points)
    zmap = sizzle.zz_map(q1, q2, j, det, om)
    formats.write_zzmap_csv(outdir / "zzmap.csv", zmap)
    formats.write_zzmap_summary(outdir / "zzmap_summary.json", zmap)


def cmd_budget(args, outdir: Path) -> None:
    report = budget.full_report()
    (outdir / "budget.json").write_text(report.to_json())
    (outdir / "budget.txt").write_text(report.to_text() + "\n")
    if args.sweep:
        name, _, grid_spec = args.sweep.partition("=")
        try:
            start, stop, count = grid_spec.split(":")
            values = np.linspace(float(start), float(stop), int(count))
        except ValueError as exc:
            raise ValidationError(
                f"sweep must look like name=start:stop:count, got {args.sweep!r}"
            ) from exc
        rows = budget.sweep(name.strip(), values)
        with open(outdir / "sweep.csv", "w") as fh:
            fh.write(f"{name.strip()},power_total_w,eps_total,fidelity\n")
            for value, rep in rows:
                fh.write(
                    f"{value},{rep.power.total},{rep.eps_total},{rep.fidelity}\n"
                )


def cmd_modulation(args, outdir: Path) -> None:
    cfg = _load_scenario(args)
    mod = cfg.modulation
    taylor = modulation.expand_taylor(
        mod.delta_phi, mod.theta, order=4, i_c0=cfg.junction.i_c0,
        omega_rf=mod.omega_rf,
    )
    bessel = modulation.expand_jacobi_anger(
        mod.delta_phi, n_max=2, theta=mod.theta, i_c0=cfg.junction.i_c0,
        omega_rf=mod.omega_rf,
    )
    formats.write_inductance_series_csv(outdir / "inductance_taylor.csv", taylor)
    formats.write_inductance_series_csv(outdir / "inductance_bessel.csv", bessel)


# --- canned figure scenarios -------------------------------------------------


def _reference_junction() -> dict:
    # 1 uA junction line: v ~ 3.04e6 m/s, 5 GHz carrier ~ 0.61 mm wavelength
    return {"junction": {"i_c0": 1e-6, "c_j": 1e-15}}


def reproduce_fig2a(outdir: Path) -> None:
    cfg = config_from_dict(_reference_junction())
    jp = cfg.junction
    v = derived_velocity(jp)
    k0 = hz_to_angular(5e9) / v
    mod_raw = {"delta_i": 0.35, "k_m": 0.5 * k0, "f_m_hz": 1.0e9}
    cfg = config_from_dict({**_reference_junction(), "modulation": mod_raw})
    half = np.linspace(0.012 * k0, 1.2 * k0, 100)
    k_grid = np.concatenate([-half[::-1], half])
    scan = modes.dispersion_scan(
        jp, cfg.modulation, k_grid, n_harmonics=5,
        omega_window=(0.02 * v * k0, 1.6 * v * k0),
    )
    formats.write_bands_csv(outdir / "bands.csv", scan)


def reproduce_fig2b(outdir: Path) -> None:
    cfg = config_from_dict(_reference_junction())
    jp = cfg.junction
    mod = modes.resonant_modulation(jp, 0.05)
    v = derived_velocity(jp)
    t1 = 2.0 * math.pi / (math.pi * v / jp.length)
    traj = modes.evolve_modes(jp, mod, 10, [1.0], duration=20 * t1,
                              samples_per_period=60, record_stride=20)
    formats.write_trajectory_csv(outdir / "trajectory.csv", traj)


def reproduce_fig2e(outdir: Path) -> None:
    pitch = 10e-6
    targets = np.degrees(np.arcsin(np.linspace(-0.95, 0.95, 40)))
    _pattern_outputs(outdir, targets, 2.4 / pitch, pitch, 100)


def _fdtd_1d_scenario(f0_hz: float, n_steps: int = 8000) -> ScenarioConfig:
    raw = _reference_junction()
    jp = config_from_dict(raw).junction
    v = derived_velocity(jp)
    dz = v / 5e9 / 25.0
    raw.update(
        {
            "modulation": {"delta_phi": 0.3, "f_rf_hz": 250e6},
            "grid": {"dimension": 1, "dz": dz, "n_z": 1600, "courant": 0.5},
            "source": {
                "f0_hz": f0_hz, "t_center": 0.0, "t_width": 1.0,
                "amplitude": 1e-3, "cells": [200],
            },
            "probes": [{"probe_id": "p", "iz": 1200}],
            "run": {"n_steps": n_steps, "boundary": "mur"},
        }
    )
    return config_from_dict(raw)


def reproduce_fig5(outdir: Path) -> None:
    carriers = [4.6e9, 4.8e9, 5.0e9, 5.2e9, 5.4e9]
    all_rows = []
    for f0 in carriers:
        cfg = _fdtd_1d_scenario(f0)
        rec = fdtd.run(cfg)
        dt = rec.metadata["dt"]
        sig = rec.probes["p"][3000:]
        spec = analysis.spectrum(sig, dt, window="hann", f0_hz=f0, f_mod_hz=500e6)
        db = spec.magnitude_db()
        keep = (spec.frequency_hz > 3e9) & (spec.frequency_hz < 7e9)
        for f, v_db in zip(spec.frequency_hz[keep], db[keep]):
            all_rows.append((float(f), float(v_db), float(f0)))
    with open(outdir / "spectrum.csv", "w") as fh:
        fh.write("frequency_hz,magnitude_db,carrier_hz\n")
        for row in all_rows:
            fh.write(",".join(str(v) for v in row) + "\n")


def reproduce_fig4(outdir: Path) -> None:
    raw = _reference_junction()
    jp = config_from_dict(raw).junction
    v = derived_velocity(jp)
    h = v / 5e9 / 25.0
    k0 = hz_to_angular(5e9) / v
    raw.update(
        {
            "modulation": {"delta_i": 0.35, "k_m": 0.5 * k0, "f_m_hz": 1.0e9},
            "grid": {
                "dimension": 2, "dz": h, "dx": h, "n_z": 300, "n_x": 300,
                "courant": 0.6,
            },
            "source": {
                "f0_hz": 5e9, "t_center": 0.0, "t_width": 1.0,
                "amplitude": 1e-3, "cells": [[150, 40]],
            },
            "probes": [{"probe_id": "p", "iz": 250, "ix": 150}],
            "run": {"n_steps": 5000, "boundary": "mur", "snapshot_stride": 2500},
        }
    )
    cfg = config_from_dict(raw)
    rec = fdtd.run(cfg)
    formats.write_probes_csv(outdir / "probes.csv", rec)
    snap, t_snap = rec.snapshots[-1], rec.snapshot_times[-1]
    formats.write_snapshot(outdir / "snapshot.field", snap, h, h, t_snap)


def reproduce_fig3b(outdir: Path) -> None:
    q1, q2, j = sizzle.fig3b_qubits()
    det = np.linspace(-400.0, 200.0, 100)
    om = np.linspace(0.0, 50.0, 100)
    zmap = sizzle.zz_map(q1, q2, j, det, om)
    formats.write_zzmap_csv(outdir / "zzmap.csv", zmap)
    formats.write_zzmap_summary(outdir / "zzmap_summary.json", zmap)


def reproduce_table2(outdir: Path) -> None:
    report = budget.full_report()
    (outdir / "budget.json").write_text(report.to_json())
    (outdir / "budget.txt").write_text(report.to_text() + "\n")


def cmd_reproduce(args, outdir: Path) -> None:
    if args.figure not in FIGURE_IDS:
        raise ValidationError(
            f"unknown figure id {args.figure!r}; expected one of {FIGURE_IDS}"
        )
    {
        "fig2a": reproduce_fig2a,
        "fig2b": reproduce_fig2b,
        "fig2e": reproduce_fig2e,
        "fig4": reproduce_fig4,
        "fig5": reproduce_fig5,
        "fig3b": reproduce_fig3b,
        "table2": reproduce_table2,
    }[args.figure](outdir)


# --- wiring ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jjmeta",
        description="modulated junction-line simulation and budgeting suite",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="YAML scenario file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument(
            "--override", action="append", default=[], metavar="KEY.PATH=VALUE",
            help="dot-path config override (repeatable)",
        )
        p.add_argument("--format", choices=("csv", "json"), default="csv",
                       help="preferred tabular format (csv files are always written)")

    p = sub.add_parser("dispersion", help="Bloch-Floquet band scan")
    common(p)
    p.add_argument("--k-points", type=int, default=100)
    p.add_argument("--k-max-frac", type=float, default=1.2)
    p.add_argument("--n-harmonics", type=int, default=5)
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("modes", help="coupled-mode energy evolution")
    common(p)
    p.add_argument("--n-modes", type=int, default=10)
    p.add_argument("--depth", type=float, default=0.05)
    p.add_argument("--periods", type=float, default=20.0)
    p.add_argument("--start-mode", type=int, default=1)
    p.add_argument("--samples-per-period", type=int, default=60)
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("fdtd", help="time-domain field run")
    common(p)
    p.set_defaults(func=cmd_fdtd)

    p = sub.add_parser("spectrum", help="probe-series spectrum")
    common(p)
    p.add_argument("--input", required=True, help="probes.csv from an fdtd run")
    p.add_argument("--probe", default=None)
    p.add_argument("--window", default="hann", choices=("hann", "rect"))
    p.add_argument("--f0-ghz", type=float, default=None)
    p.add_argument("--f-mod-ghz", type=float, default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("pattern", help="beam-steering radiation pattern")
    common(p)
    p.add_argument("--targets", help="comma-separated target angles (deg)")
    p.add_argument("--n-beams", type=int, default=40)
    p.add_argument("--span-deg", type=float, default=71.8)
    p.add_argument("--n-elements", type=int, default=100)
    p.add_argument("--k0-pitch", type=float, default=2.4,
                   help="effective k0 * pitch (array-factor demonstration)")
    p.set_defaults(func=cmd_pattern)

    p = sub.add_parser("sizzle", help="drive-modulated ZZ map")
    common(p)
    p.add_argument("--det-min-mhz", type=float, default=-400.0)
    p.add_argument("--det-max-mhz", type=float, default=200.0)
    p.add_argument("--strength-max-mhz", type=float, default=50.0)
    p.add_argument("--grid-points", type=int, default=100)
    p.set_defaults(func=cmd_sizzle)

    p = sub.add_parser("budget", help="multiplexing and thermal budget")
    common(p)
    p.add_argument("--sweep", metavar="NAME=START:STOP:COUNT",
                   help="also sweep one input over a grid into sweep.csv")
    p.set_defaults(func=cmd_budget)

    p = sub.add_parser("modulation", help="export inductance harmonic series")
    common(p)
    p.set_defaults(func=cmd_modulation)

    p = sub.add_parser("reproduce", help="canned figure scenarios")
    common(p)
    p.add_argument("figure", choices=FIGURE_IDS)
    p.set_defaults(func=cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    outdir = Path(args.out)
    try:
        _write_manifest(args, outdir)
        args.func(args, outdir)
    except (ConfigError, ValidationError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (
        fdtd.FieldStabilityError,
        modes.ModeInstabilityError,
        modes.RootFindingError,
        sizzle.CommutatorError,
        sizzle.LevelTrackingError,
        np.linalg.LinAlgError,
        FloatingPointError,
    ) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
