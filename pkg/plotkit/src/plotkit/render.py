"""One render function per figure id, all display-only.

Axis ranges come from the data extents; nothing here hard-codes physics
constants or recomputes results.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .schema import SchemaError, read_budget, read_csv, read_snapshot

FIGURE_IDS = ("fig2a", "fig2b", "fig2e", "fig4", "fig5", "fig3b", "table2")


def render_fig2a(data_dir: Path, out_path: Path) -> None:
    """Dispersion diagram: one point cloud per band."""
    cols = read_csv(data_dir / "bands.csv", "bands")
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for label in np.unique(cols["band_index"]):
        sel = cols["band_index"] == label
        ax.plot(cols["k_rad_per_m"][sel], cols["omega_rad_per_s"][sel] / (2 * np.pi * 1e9),
                ".", ms=3, label=f"band {int(label)}")
    ax.set_xlabel("k (rad/m)")
    ax.set_ylabel("frequency (GHz)")
    ax.set_title("dispersion bands")
    if len(np.unique(cols["band_index"])) <= 11:
        ax.legend(fontsize=6, ncol=2)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_fig2b(data_dir: Path, out_path: Path) -> None:
    """Per-mode energy traces against time."""
    cols = read_csv(data_dir / "trajectory.csv", "trajectory")
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    scale = cols["energy"].max() or 1.0
    for mode in np.unique(cols["mode_index"]):
        sel = cols["mode_index"] == mode
        ax.plot(cols["t_s"][sel] * 1e9, cols["energy"][sel] / scale,
                label=f"mode {int(mode)}")
    ax.set_xlabel("time (ns)")
    ax.set_ylabel("energy (normalized)")
    ax.set_title("mode-energy evolution")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_fig2e(data_dir: Path, out_path: Path) -> None:
    """Radiation pattern with detected lobes highlighted."""
    cols = read_csv(data_dir / "pattern.csv", "pattern")
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(cols["theta_deg"], cols["intensity_db"], lw=0.8)
    lobes = cols["lobe_flag"] > 0.5
    ax.plot(cols["theta_deg"][lobes], cols["intensity_db"][lobes], "r.", ms=6)
    ax.set_xlabel("angle (deg)")
    ax.set_ylabel("intensity (dB)")
    ax.set_ylim(max(-60.0, cols["intensity_db"].min()), 2.0)
    ax.set_title(f"radiation pattern ({int(lobes.sum())} lobes)")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_fig4(data_dir: Path, out_path: Path) -> None:
    """2D field snapshot heatmap."""
    candidates = sorted(data_dir.glob("*.field"))
    if not candidates:
        raise SchemaError(f"no .field snapshot in {data_dir}")
    field, dx, dz, t = read_snapshot(candidates[-1])
    fig, ax = plt.subplots(figsize=(6, 5))
    extent = [0, field.shape[1] * dz * 1e3, 0, field.shape[0] * dx * 1e3]
    mesh = ax.imshow(field, origin="lower", extent=extent, aspect="auto",
                     cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="phase (rad)")
    ax.set_xlabel("z (mm)")
    ax.set_ylabel("x (mm)")
    ax.set_title(f"field snapshot at t = {t * 1e9:.2f} ns")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_fig5(data_dir: Path, out_path: Path) -> None:
    """Overlaid probe spectra, one trace per carrier."""
    cols = read_csv(data_dir / "spectrum.csv", "spectrum_multi")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for carrier in np.unique(cols["carrier_hz"]):
        sel = cols["carrier_hz"] == carrier
        ax.plot(cols["frequency_hz"][sel] / 1e9, cols["magnitude_db"][sel],
                lw=0.8, label=f"{carrier / 1e9:.1f} GHz")
    ax.set_xlabel("frequency (GHz)")
    ax.set_ylabel("magnitude (dB)")
    ax.set_ylim(-110, 5)
    ax.legend(fontsize=7, title="carrier")
    ax.set_title("probe spectra across carriers")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_fig3b(data_dir: Path, out_path: Path) -> None:
    """ZZ-strength heatmap over detuning x drive strength."""
    cols = read_csv(data_dir / "zzmap.csv", "zzmap")
    det = np.unique(cols["detuning_mhz"])
    om = np.unique(cols["strength_mhz"])
    grid = np.full((om.size, det.size), np.nan)
    d_idx = np.searchsorted(det, cols["detuning_mhz"])
    o_idx = np.searchsorted(om, cols["strength_mhz"])
    grid[o_idx, d_idx] = np.abs(cols["zeta_mhz"])
    fig, ax = plt.subplots(figsize=(7, 4.5))
    with np.errstate(divide="ignore", invalid="ignore"):
        mesh = ax.pcolormesh(det, om, np.log10(grid), shading="auto",
                             cmap="magma_r")
    fig.colorbar(mesh, ax=ax, label="log10 |ZZ| (MHz)")
    ax.set_xlabel("drive detuning (MHz)")
    ax.set_ylabel("drive strength (MHz)")
    ax.set_title("drive-modulated ZZ map")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_table2(data_dir: Path, out_path: Path) -> None:
    """Budget summary: power bars plus the headline numbers."""
    report = read_budget(data_dir / "budget.json")
    power = report["power"]
    labels = ["static", "dynamic", "delivered", "total", "cooling"]
    values = [
        power["static"] * 1e6,
        power["dynamic"] * 1e6,
        power["n_qubit"] * power["per_qubit"] * 1e6,
        power["total"] * 1e6,
        power["p_cool"] * 1e6,
    ]
    fig, ax = plt.subplots(figsize=(6.5, 4))
    bars = ax.bar(labels, values, color=["C0", "C0", "C0", "C1", "C2"])
    ax.bar_label(bars, fmt="%.1f")
    ax.set_ylabel("power (uW)")
    flags = ", ".join(f"{k}:{'ok' if v else 'FAIL'}" for k, v in report["flags"].items())
    ax.set_title(
        f"{report['n_channels']} channels, 1-F = {report['eps_total']:.2e}\n{flags}",
        fontsize=8,
    )
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


RENDERERS = {
    "fig2a": render_fig2a,
    "fig2b": render_fig2b,
    "fig2e": render_fig2e,
    "fig4": render_fig4,
    "fig5": render_fig5,
    "fig3b": render_fig3b,
    "table2": render_table2,
}


def render(figure_id: str, data_dir, out_path) -> Path:
    """Render one figure id from its data directory; returns the image path."""
    if figure_id not in RENDERERS:
        raise SchemaError(
            f"unknown figure id {figure_id!r}; expected one of {FIGURE_IDS}"
        )
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    RENDERERS[figure_id](Path(data_dir), out_path)
    return out_path
