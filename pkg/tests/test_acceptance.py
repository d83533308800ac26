"""Acceptance suite: every exit criterion at its stated tolerance.

Each test prints one `[acceptance] <criterion>: PASS` line on success (run
with `pytest -s tests/test_acceptance.py` to see them); a failed assertion
is the FAIL line.  Tolerances are fixed here, not calibrated elsewhere.
"""

import math
import time

import numpy as np
import pytest

from jjmeta import (
    GridSpec,
    JunctionParams,
    ModulationParams,
    ProbeSpec,
    RunSpec,
    ScenarioConfig,
    SourceSpec,
    derived_velocity,
)
from jjmeta.constants import HBAR, TWO_PI, hz_to_angular
from jjmeta import analysis, budget, fdtd, modes, modulation, sizzle

JP = JunctionParams(i_c0=1e-6, c_j=1e-15)
V = derived_velocity(JP)
DZ = V / 5e9 / 25.0
K0 = TWO_PI * 5e9 / V


def ok(name):
    print(f"\n[acceptance] {name}: PASS")


# --- budget golden numbers ----------------------------------------------------


def test_budget_golden_numbers():
    assert budget.channel_count(hz_to_angular(2e9), 50e6) == 40

    power = budget.power_totals(budget.ThermalInputs())
    assert power.static == pytest.approx(1e-6, rel=1e-12)
    assert power.dynamic == pytest.approx(3e-6, rel=1e-12)
    assert power.n_qubit * power.per_qubit == pytest.approx(4.5e-6, rel=1e-12)
    assert power.total == pytest.approx(8.5e-6, rel=1e-12)

    eps = budget.crosstalk_error(0.022, hz_to_angular(50e6), 100e6, 40,
                                 c_nl=5e-4)
    assert abs((1.0 - eps) - 0.9999998) <= 1e-8

    assert budget.crosstalk_total(1e-6) == pytest.approx(3.9e-5, rel=1e-12)
    assert budget.crosstalk_total(1e-5) == pytest.approx(3.9e-4, rel=1e-12)
    ok("budget golden numbers")


def test_gate_time_table():
    for f_mhz, t_ns in ((20.0, 25.0), (10.0, 50.0)):
        mu = HBAR * hz_to_angular(f_mhz * 1e6) / (2 * 0.1)
        gt = budget.rabi_and_gatetimes(mu, 0.1, hz_to_angular(20e6),
                                       hz_to_angular(100e6))
        assert gt.t_pi == pytest.approx(t_ns * 1e-9, rel=1e-12)

    gt = budget.rabi_and_gatetimes(3.3e-26, 0.1, hz_to_angular(20e6),
                                   hz_to_angular(100e6))
    # both conventions reported; the convention ambiguity is documented and
    # the 50-200 ns band is flagged where met (cyclic at g/2pi = 20 MHz)
    assert gt.t_cz_cyclic == pytest.approx(TWO_PI * gt.t_cz_angular, rel=1e-12)
    assert gt.cz_band_cyclic and not gt.cz_band_angular
    ok("gate-time table")


# --- modulation expansions ----------------------------------------------------


def test_modulation_expansions():
    t = np.linspace(0.0, TWO_PI, 4001)
    for dphi in (0.1, 0.2, 0.3):
        taylor = modulation.expand_taylor(dphi, 0.0, order=4, omega_rf=1.0)
        bessel = modulation.expand_jacobi_anger(dphi, 2, omega_rf=1.0)
        gap = np.max(np.abs(taylor.delta_l(t) - bessel.delta_l(t)))
        assert gap <= 1e-4

    # odd harmonics < 1e-12 of the fundamental ripple (FFT oracle on the
    # exact inductance series over integer pump periods)
    w_rf = TWO_PI * 2e9
    n_per, n_samp = 16, 64
    tt = np.arange(n_per * n_samp) * (TWO_PI / w_rf) / n_samp
    mod = ModulationParams(delta_phi=0.3, omega_rf=w_rf)
    ls = modulation.inductance_timeseries(mod, JP, tt)
    spec = np.abs(np.fft.rfft(ls - ls.mean()))
    even = spec[2 * n_per]
    odd = max(spec[n_per], spec[3 * n_per], spec[5 * n_per])
    assert odd < 1e-12 * even
    ok("modulation expansions")


# --- dispersion nonreciprocity --------------------------------------------------


def test_dispersion_nonreciprocity():
    t_start = time.time()
    half = np.linspace(0.012 * K0, 1.2 * K0, 100)
    k_grid = np.concatenate([-half[::-1], half])  # 200 points
    window = (0.02 * V * K0, 1.6 * V * K0)
    mod = ModulationParams(delta_i=0.35, k_m=0.4 * K0,
                           omega_m=0.2837 * V * 0.4 * K0)

    scan5 = modes.dispersion_scan(JP, mod, k_grid, n_harmonics=5,
                                  omega_window=window, scan_points=350,
                                  rel_tol=1e-10)
    band5 = scan5.band(0)
    assert band5.k.size >= 0.95 * k_grid.size
    asym = scan5.asymmetry(0)
    assert asym > 1e-4 * np.max(band5.omega)  # nonreciprocal splitting

    scan7 = modes.dispersion_scan(JP, mod, k_grid, n_harmonics=7,
                                  omega_window=window, scan_points=350,
                                  rel_tol=1e-10)
    matched = rel_changes = 0
    lookup = {k: w for k, w in zip(scan7.band(0).k, scan7.band(0).omega)}
    worst = 0.0
    for k, w in zip(band5.k, band5.omega):
        if k in lookup:
            matched += 1
            worst = max(worst, abs(lookup[k] - w) / w)
    assert matched >= 0.9 * band5.k.size
    assert worst < 1e-6

    static = ModulationParams(delta_i=0.35, k_m=0.4 * K0, omega_m=0.0)
    scan0 = modes.dispersion_scan(JP, static, k_grid, n_harmonics=5,
                                  omega_window=window, scan_points=350,
                                  rel_tol=1e-12)
    band0 = scan0.band(0)
    assert scan0.asymmetry(0) < 1e-9 * np.max(band0.omega)

    elapsed = time.time() - t_start
    assert elapsed < 30.0
    ok(f"dispersion nonreciprocity ({elapsed:.1f} s)")


# --- mode-energy transfer -------------------------------------------------------


def test_mode_energy_transfer():
    t_start = time.time()
    t1 = 2.0 * math.pi / (math.pi * V / JP.length)

    # depth 0: each modal energy constant to 1e-6 over 1e3 fundamental periods
    still = modes.evolve_modes(JP, modes.resonant_modulation(JP, 0.0), 3,
                               [1.0, 0.5, 0.25], duration=1000 * t1,
                               samples_per_period=400)
    e = still.energies
    assert np.max(np.abs(e - e[0]) / e[0]) < 1e-6

    # depth 0.05, 10 modes: period-averaged fundamental drains monotonically
    # while the higher-mode sum rises over the first transfer period
    traj = modes.evolve_modes(JP, modes.resonant_modulation(JP, 0.05), 10,
                              [1.0], duration=20 * t1, samples_per_period=60,
                              record_stride=5)
    energies = traj.energies
    n_bins = 20
    edges = np.linspace(traj.t[0], traj.t[-1], n_bins + 1)
    which = np.digitize(traj.t, edges[1:-1])
    e1 = np.array([energies[which == b, 0].mean() for b in range(n_bins)])
    rest = np.array(
        [energies[which == b, 1:].sum(axis=1).mean() for b in range(n_bins)]
    )
    assert np.all(np.diff(e1) < 0)
    assert np.all(np.diff(rest) > 0)

    # nearest-neighbor cascade order from mode 5 (1e-9 threshold crossings)
    tr5 = modes.evolve_modes(JP, modes.resonant_modulation(JP, 0.05), 10,
                             [0, 0, 0, 0, 1.0], duration=1.0 * t1,
                             samples_per_period=80, record_stride=1)
    thr = 1e-9 * tr5.energies[0, 4]

    def first_cross(m):
        hits = np.nonzero(tr5.energies[:, m] > thr)[0]
        return tr5.t[hits[0]] if hits.size else math.inf

    assert first_cross(3) < first_cross(2) < first_cross(1)
    assert first_cross(5) < first_cross(6) < first_cross(7)
    assert max(first_cross(3), first_cross(5)) < min(first_cross(2),
                                                     first_cross(6))

    elapsed = time.time() - t_start
    assert elapsed < 30.0
    ok(f"mode-energy transfer ({elapsed:.1f} s)")


# --- FDTD validation ------------------------------------------------------------


def gaussian(n, center, sigma, amp=1e-3):
    z = np.arange(n)
    return amp * np.exp(-0.5 * ((z - center) / sigma) ** 2)


def test_fdtd_validation():
    t_start = time.time()

    # (1) unmodulated small-amplitude pulse speed within 1% of 1/sqrt(L'C')
    n = 2000
    cfg = ScenarioConfig(
        junction=JP, modulation=ModulationParams(),
        grid=GridSpec(dimension=1, dz=DZ, n_z=n, courant=0.5),
        source=SourceSpec(amplitude=0.0, cells=(2,)),
        probes=(ProbeSpec("p", 10),),
        run=RunSpec(n_steps=1000, boundary="fixed", snapshot_stride=250),
    )
    rec = fdtd.run(cfg, initial_phi=gaussian(n, 500, 15))

    def peak(snap, lo):
        i = np.argmax(snap[lo:]) + lo
        y0, y1, y2 = snap[i - 1], snap[i], snap[i + 1]
        return (i + 0.5 * (y0 - y2) / (y0 - 2 * y1 + y2)) * DZ

    p1, t1 = peak(rec.snapshots[1], 560), rec.snapshot_times[1]
    p2, t2 = peak(rec.snapshots[-1], 560), rec.snapshot_times[-1]
    assert abs((p2 - p1) / (t2 - t1) - V) / V < 0.01

    # (2) Mur reflection below -30 dB by two-run subtraction
    def probe_series(n_z):
        c = ScenarioConfig(
            junction=JP, modulation=ModulationParams(),
            grid=GridSpec(dimension=1, dz=DZ, n_z=n_z, courant=0.5),
            source=SourceSpec(amplitude=0.0, cells=(2,)),
            probes=(ProbeSpec("p", 1100),),
            run=RunSpec(n_steps=2600, boundary="mur"),
        )
        return fdtd.run(c, initial_phi=gaussian(n_z, 700, 12)).probes["p"]

    short, long = probe_series(1200), probe_series(3200)
    refl_db = 10 * math.log10(np.sum((short - long) ** 2) / np.sum(long**2))
    assert refl_db < -30.0

    # (3) sidebands at w0 +- 2 w_rf at least 20 dB above any odd sideband,
    # at desk scale (2000 cells x 2e4 steps, < 5 min)
    f0, f_rf = 5e9, 5e9 / 20.0
    cfg = ScenarioConfig(
        junction=JP,
        modulation=ModulationParams(delta_phi=0.3, omega_rf=hz_to_angular(f_rf)),
        grid=GridSpec(dimension=1, dz=DZ, n_z=2000, courant=0.5),
        source=SourceSpec(omega0=hz_to_angular(f0), t_center=0.0, t_width=1.0,
                          amplitude=1e-3, cells=(200,)),
        probes=(ProbeSpec("p", 1500),),
        run=RunSpec(n_steps=20000, boundary="mur"),
    )
    rec = fdtd.run(cfg)
    dt = rec.metadata["dt"]
    sig = rec.probes["p"][4000:19000]  # steady 15 pump periods
    spec = np.abs(np.fft.rfft(sig))
    freqs = np.fft.rfftfreq(sig.size, dt)

    def level(f):
        return spec[int(round(f / freqs[1]))]

    even = min(level(f0 + 2 * f_rf), level(f0 - 2 * f_rf))
    odd = max(level(f0 + f_rf), level(f0 - f_rf),
              level(f0 + 3 * f_rf), level(f0 - 3 * f_rf))
    assert 20 * math.log10(even / odd) >= 20.0

    # (4) 2D CFL S > 1/sqrt(2) rejected before stepping
    bad = ScenarioConfig(
        junction=JP, modulation=ModulationParams(),
        grid=GridSpec(dimension=2, dz=DZ, dx=DZ, n_z=40, n_x=40,
                      dt=0.8 * math.hypot(DZ, DZ) / V),
        source=SourceSpec(amplitude=0.0, cells=((5, 5),)),
        probes=(ProbeSpec("p", 10, 10),),
        run=RunSpec(n_steps=5),
    )
    with pytest.raises(fdtd.CFLError):
        fdtd.run(bad)

    # (5) 2D desk scale: 300 x 300 x 5e3 steps completes under 5 minutes
    # with finite fields and beamed off-axis energy
    mod2d = ModulationParams(delta_i=0.35, k_m=0.5 * K0,
                             omega_m=hz_to_angular(1e9))
    cfg2d = ScenarioConfig(
        junction=JP, modulation=mod2d,
        grid=GridSpec(dimension=2, dz=DZ, dx=DZ, n_z=300, n_x=300,
                      courant=0.6),
        source=SourceSpec(omega0=hz_to_angular(f0), t_center=0.0, t_width=1.0,
                          amplitude=1e-3, cells=((150, 40),)),
        probes=(ProbeSpec("p", 250, 150),),
        run=RunSpec(n_steps=5000, boundary="mur", snapshot_stride=5000),
    )
    t2d = time.time()
    rec2d = fdtd.run(cfg2d)
    t2d = time.time() - t2d
    assert t2d < 300.0
    snap = rec2d.snapshots[-1]
    assert np.all(np.isfinite(snap))
    row_energy = (snap**2).sum(axis=1)
    off_axis = row_energy[:100].sum() + row_energy[200:].sum()
    assert off_axis / row_energy.sum() > 0.05

    elapsed = time.time() - t_start
    assert elapsed < 300.0
    ok(f"fdtd validation ({elapsed:.1f} s)")


# --- beam steering --------------------------------------------------------------


def test_beam_steering():
    pitch = 10e-6
    k0 = 2.4 / pitch  # effective array-factor wavenumber

    pat = analysis.far_field(np.ones(100), k0, pitch, lobe_threshold_db=-14)
    side = max((l for l in pat.lobes if abs(l.angle_deg) > 1.0),
               key=lambda l: l.level_db)
    assert abs(side.level_db - (-13.3)) <= 0.3

    grad = np.exp(-1j * 0.5 * k0 * pitch * np.arange(100))
    main = max(analysis.far_field(grad, k0, pitch).lobes,
               key=lambda l: l.level_db)
    assert abs(main.angle_deg - 30.0) <= 0.05  # one grid step

    targets = np.degrees(np.arcsin(np.linspace(-0.95, 0.95, 40)))
    exc = analysis.beam_plan(targets, k0, pitch, 100)
    pattern = analysis.far_field(exc, k0, pitch, lobe_threshold_db=-13)
    assert len(pattern.lobes) == 40
    beamwidth_sin = 0.886 * TWO_PI / (k0 * pitch * 100)
    lobe_sins = np.sort(np.sin(np.radians([l.angle_deg for l in pattern.lobes])))
    for s in np.sin(np.radians(targets)):
        assert np.min(np.abs(lobe_sins - s)) < beamwidth_sin / 2
    ok("beam steering")


# --- sizzle physics -------------------------------------------------------------


def test_sizzle_physics():
    t_start = time.time()
    q1, q2, j = sizzle.fig3b_qubits()

    # commutator identity to 1e-10
    ms = sizzle.build_quantized_modes(JP, 1, cutoff=10)
    phi, q = ms.phi_ops[0], ms.q_ops[0]
    ident = (phi @ q - q @ phi) / (1j * HBAR)
    assert np.max(np.abs(ident[:8, :8] - np.eye(10)[:8, :8])) < 1e-10

    # perturbative ZZ within 10% of the exact oracle at J/Delta <= 0.01
    for j_mhz in (0.2, 0.7, 1.4):
        jj = TWO_PI * j_mhz * 1e6
        exact = sizzle.static_zz_oracle(q1, q2, jj)
        pert = sizzle.perturbative_zz(q1, q2, jj)
        assert abs(exact - pert) / abs(pert) < 0.10

    # zeta -> 0 monotonically as alpha halves from 8 MHz to 1 MHz
    mags = []
    for alpha_mhz in (8.0, 4.0, 2.0, 1.0):
        qa = sizzle.TransmonParams(q1.omega01, TWO_PI * alpha_mhz * 1e6)
        qb = sizzle.TransmonParams(q2.omega01, TWO_PI * alpha_mhz * 1e6)
        mags.append(abs(sizzle.static_zz_oracle(qa, qb, j)))
    assert all(b < a for a, b in zip(mags, mags[1:]))

    # 100 x 100 map: drive-off column equals static ZZ to 1e-10; pole line
    # of the modulated formula at Delta_d = -alpha (the written formula's
    # 1->2 feature; the -300 MHz caption discrepancy is recorded in the
    # map metadata, not resolved)
    det = np.linspace(-400.0, 200.0, 100)
    om = np.linspace(0.0, 50.0, 100)
    zmap = sizzle.zz_map(q1, q2, j, det, om)
    off = zmap.zeta_mhz[0][~zmap.mask[0]]
    assert np.max(np.abs(off - zmap.static_zz_mhz)) <= 1e-10 * abs(
        zmap.static_zz_mhz
    )
    target = -q1.alpha / TWO_PI / 1e6
    assert any(math.isclose(p, target, abs_tol=1e-9)
               for p in zmap.metadata["pole_lines_mhz"])
    col = np.argmin(np.abs(det - target))
    assert zmap.mask[:, col].all()
    assert "discrepancy" in zmap.metadata["caption_note"]

    elapsed = time.time() - t_start
    assert elapsed < 60.0
    ok(f"sizzle physics ({elapsed:.1f} s)")


def test_paper_scale_note():
    # every quantitative result here is formula-level or small-simulation:
    # nothing is excluded for being beyond desk scale, and the large-figure
    # visual comparisons are covered at the property level above
    ok("paper-scale results (none excluded; property-level coverage)")
