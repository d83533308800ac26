"""Coupled-harmonic machinery: coupling matrix, dispersion, mode dynamics.

Three views of the same physics:

* ``assemble_coupling_matrix`` builds the truncated harmonic-basis matrix
  diag(k_n^2) + M for a uniform phase-drive pump, where the inductance
  ripple at 2*omega_rf couples harmonics n and n +/- 2.
* ``dispersion_scan`` solves det A(omega; k) = 0 for a traveling-wave
  modulated line, where the Floquet harmonics (k + n k_m, omega + n omega_m)
  couple at |n - m| = 1.  Forward and backward branches differ when
  omega_m != 0, the signature of nonreciprocity.
* ``evolve_modes`` integrates the time-domain coupled-mode equations of a
  fixed-end line whose mode spacing matches the modulation frequency,
  showing the energy cascade from the fundamental into higher modes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .params import JunctionParams, ModulationParams, derived_velocity, ValidationError
from .modulation import expand_taylor

try:  # pragma: no cover - exercised implicitly
    import numba

    _HAVE_NUMBA = True
except Exception:  # pragma: no cover
    _HAVE_NUMBA = False


class ModeInstabilityError(RuntimeError):
    """Mode energies grew beyond the instability guard during integration."""


class RootFindingError(RuntimeError):
    """Bisection failed to converge on a dispersion root."""


@dataclass(frozen=True)
class HarmonicBasis:
    """Truncated set of harmonics omega + n * step for n in [-n_h, n_h]."""

    omega: float
    step: float
    n_h: int

    def __post_init__(self):
        if self.n_h < 1:
            raise ValidationError(f"harmonic basis needs n_h >= 1, got {self.n_h}")

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.n_h, self.n_h + 1)

    @property
    def frequencies(self) -> np.ndarray:
        return self.omega + self.indices * self.step

    @property
    def dimension(self) -> int:
        return 2 * self.n_h + 1


@dataclass(frozen=True)
class CouplingMatrix:
    """diag(k_n^2) + M over a harmonic basis; entries in rad^2/m^2."""

    matrix: np.ndarray
    basis: HarmonicBasis

    def __post_init__(self):
        n = self.basis.dimension
        if self.matrix.shape != (n, n):
            raise ValidationError(
                f"coupling matrix shape {self.matrix.shape} does not match "
                f"basis dimension {n}"
            )


@dataclass(frozen=True)
class DispersionBand:
    """(k, omega) points of one band, labeled by its dominant harmonic."""

    label: int
    k: np.ndarray
    omega: np.ndarray

    def omega_at(self, k_value: float) -> float:
        """Band frequency at an exact grid wavenumber; nan when absent."""
        hits = np.nonzero(self.k == k_value)[0]
        return float(self.omega[hits[0]]) if hits.size else float("nan")


@dataclass(frozen=True)
class DispersionScan:
    """All bands found on a k-grid plus per-k diagnostics."""

    bands: tuple
    diagnostics: tuple
    k_grid: np.ndarray
    metadata: dict = field(default_factory=dict)

    def band(self, label: int) -> DispersionBand:
        for b in self.bands:
            if b.label == label:
                return b
        raise KeyError(f"no band with dominant harmonic {label}")

    def asymmetry(self, label: int = 0) -> float:
        """max over k of |omega(k) - omega(-k)| for one band (rad/s)."""
        b = self.band(label)
        worst = 0.0
        for k_value, w in zip(b.k, b.omega):
            if k_value <= 0:
                continue
            w_back = b.omega_at(-k_value)
            if not math.isnan(w_back):
                worst = max(worst, abs(w - w_back))
        return worst


def assemble_coupling_matrix(
    jp: JunctionParams,
    mod: ModulationParams,
    basis: HarmonicBasis,
    omega: float,
) -> CouplingMatrix:
    """Harmonic coupling matrix for the uniform phase-drive pump.

    The diagonal carries k_n^2 = L' C' (omega + n w_rf)^2 with L', C' the
    per-unit-length line parameters.  Off-diagonal entries couple n to
    n +/- 2 through the inductance ripple delta_L at 2 w_rf:

        M[n, n+s] = -C' w_n [ w_{n+s} dL_s + i (dL/dt)_s ],   s = +/-2,

    where dL_s = L'_J0 A / 2 is the e^{i s w_rf t} Fourier component of the
    per-unit-length inductance ripple (A from the order-2 Taylor expansion)
    and (dL/dt)_s = i s w_rf dL_s its time derivative, in the convention
    that pairs e^{+2 i w_rf t} with the coupling from harmonic n+2 into n.
    """
    if basis.n_h < 1:
        raise ValidationError("harmonic basis too small: n_h must be >= 1")
    if mod.delta_phi**2 > 0.25:
        warnings.warn(
            f"modulation depth delta_phi={mod.delta_phi} is outside the"
            " small-depth regime (delta_phi^2 > 0.25)",
            RuntimeWarning,
            stacklevel=2,
        )
    w_rf = mod.omega_rf
    series = expand_taylor(mod.delta_phi, mod.theta, order=2, i_c0=jp.i_c0)
    ripple = series.terms[0].amplitude if series.terms else 0.0

    c_per = jp.c_shunt / jp.a
    l_per = series.l_j0 / jp.a if series.l_j0 is not None else jp.l_j0 / jp.a
    dl_component = l_per * ripple / 2.0

    dim = basis.dimension
    matrix = np.zeros((dim, dim), dtype=complex)
    w_n = basis.omega + basis.indices * w_rf
    matrix[np.diag_indices(dim)] = l_per * c_per * w_n**2

    for row, n in enumerate(basis.indices):
        for s in (+2, -2):
            col = row + s
            if not 0 <= col < dim:
                continue
            w_col = basis.omega + (n + s) * w_rf
            ddt = 1j * s * w_rf * dl_component
            matrix[row, col] = -c_per * w_n[row] * (w_col * dl_component + 1j * ddt)
    return CouplingMatrix(matrix=matrix, basis=basis)


# ---------------------------------------------------------------------------
# Dispersion of the traveling-wave modulated line
# ---------------------------------------------------------------------------


def _floquet_matrices(omega, k, v, depth, k_m, omega_m, n_h):
    """Stacked dimensionless Floquet matrices A(omega_j; k).

    Row n of A couples the harmonic (k + n k_m, omega + n omega_m); the
    diagonal is (W_n^2 - K_n^2) and neighbors carry -(depth/2) K_n K_{n+1},
    everything scaled by a common wavenumber so entries are O(1).
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    n = np.arange(-n_h, n_h + 1)
    kap = k + n * k_m
    scale = max(np.max(np.abs(kap)), np.max(np.abs(omega + n_h * omega_m)) / v, 1e-300)
    kap_s = kap / scale
    w_s = (omega[:, None] + n[None, :] * omega_m) / (v * scale)

    dim = n.size
    mats = np.zeros((omega.size, dim, dim))
    idx = np.arange(dim)
    mats[:, idx, idx] = w_s**2 - kap_s[None, :] ** 2
    off = -(depth / 2.0) * kap_s[:-1] * kap_s[1:]
    mats[:, idx[:-1], idx[1:]] = off[None, :]
    mats[:, idx[1:], idx[:-1]] = off[None, :]
    return mats


def _det_signs(mats):
    signs, _ = np.linalg.slogdet(mats)
    return signs


def _near_null_labels(matrix, n_h):
    """Dominant Floquet indices of every near-null eigenvector.

    A root at an exact branch crossing has a degenerate null space; each
    near-null direction labels its own band, so the root is registered for
    all of them.  Returns a list of (label, weight) pairs.
    """
    vals, vecs = np.linalg.eigh(matrix)
    absvals = np.abs(vals)
    tol = max(3.0 * absvals.min(), 1e-9 * absvals.max())
    labels = []
    for idx in np.nonzero(absvals <= tol)[0]:
        weights = np.abs(vecs[:, idx]) ** 2
        j = int(np.argmax(weights))
        labels.append((j - n_h, float(weights[j] / weights.sum())))
    return labels


def dispersion_scan(
    jp: JunctionParams,
    mod: ModulationParams,
    k_grid,
    n_harmonics: int = 5,
    omega_window=None,
    *,
    scan_points: int = 400,
    rel_tol: float = 1e-8,
) -> DispersionScan:
    """Bloch-Floquet dispersion omega(k) of the traveling-modulated line.

    For each fixed real k the roots of det A(omega; k) = 0 are located by a
    sign scan over ``omega_window`` followed by bisection to ``rel_tol``
    relative accuracy.  Roots are grouped into bands by the dominant
    harmonic of the near-null eigenvector, so ``band(0)`` is the branch that
    reduces to omega = v |k| when the modulation depth vanishes.
    """
    k_grid = np.sort(np.asarray(k_grid, dtype=float))
    if k_grid.size < 2:
        raise ValidationError("k-grid needs at least two points")
    if not np.allclose(np.sort(-k_grid), k_grid, rtol=0, atol=1e-9 * np.max(np.abs(k_grid))):
        raise ValidationError("k-grid must be symmetric about 0")
    if n_harmonics < 3:
        raise ValidationError(f"dispersion scan needs N_h >= 3, got {n_harmonics}")

    v = derived_velocity(jp)
    depth, k_m, omega_m = mod.delta_i, mod.k_m, mod.omega_m
    k_max = float(np.max(np.abs(k_grid)))
    if omega_window is None:
        omega_window = (0.05 * v * k_max, 1.3 * v * k_max)
    w_lo, w_hi = map(float, omega_window)
    if not 0 <= w_lo < w_hi:
        raise ValidationError("omega window must satisfy 0 <= lo < hi")

    omegas = np.linspace(w_lo, w_hi, scan_points)
    points = {}
    diagnostics = []
    for k in k_grid:
        mats = _floquet_matrices(omegas, k, v, depth, k_m, omega_m, n_harmonics)
        signs = _det_signs(mats)
        roots = []
        for j in range(scan_points - 1):
            s1, s2 = signs[j], signs[j + 1]
            if s1 == 0.0:
                roots.append(omegas[j])
                continue
            if s1 * s2 >= 0.0:
                continue
            lo, hi = omegas[j], omegas[j + 1]
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                s_mid = _det_signs(
                    _floquet_matrices(mid, k, v, depth, k_m, omega_m, n_harmonics)
                )[0]
                if s_mid == 0.0 or (hi - lo) <= rel_tol * max(abs(mid), w_lo + 1e-300):
                    break
                if s_mid == s1:
                    lo = mid
                else:
                    hi = mid
            else:
                raise RootFindingError(
                    f"bisection stalled at k={k:g}, omega~{0.5 * (lo + hi):g}"
                )
            roots.append(0.5 * (lo + hi))
        if not roots:
            diagnostics.append(f"no root in window for k={k:g}")
            continue
        best = {}
        for w in roots:
            m = _floquet_matrices(w, k, v, depth, k_m, omega_m, n_harmonics)[0]
            for label, weight in _near_null_labels(m, n_harmonics):
                if label not in best or weight > best[label][1]:
                    best[label] = (w, weight)
                else:
                    diagnostics.append(
                        f"duplicate band-{label} root at k={k:g} dropped"
                    )
        for label, (w, _) in best.items():
            points.setdefault(label, []).append((k, w))

    bands = []
    for label, pts in sorted(points.items()):
        pts.sort()
        arr = np.array(pts)
        bands.append(DispersionBand(label=label, k=arr[:, 0], omega=arr[:, 1]))
    return DispersionScan(
        bands=tuple(bands),
        diagnostics=tuple(diagnostics),
        k_grid=k_grid,
        metadata={
            "velocity": v,
            "depth": depth,
            "k_m": k_m,
            "omega_m": omega_m,
            "n_harmonics": n_harmonics,
            "omega_window": (w_lo, w_hi),
        },
    )


# ---------------------------------------------------------------------------
# Time-domain coupled-mode evolution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModeTrajectory:
    """Recorded complex mode amplitudes and per-mode energies.

    Energies use the unit-mass oscillator convention
    E_n = 0.5 |dPhi_n/dt|^2 + 0.5 omega_n^2 |Phi_n|^2.
    """

    t: np.ndarray
    amplitudes: np.ndarray
    energies: np.ndarray
    mode_omegas: np.ndarray
    metadata: dict = field(default_factory=dict)


def resonant_modulation(jp: JunctionParams, delta_l: float) -> ModulationParams:
    """Traveling modulation matched to the fixed-end line's mode spacing.

    The mode ladder of a length-l line with fixed ends is omega_n = n pi v/l,
    so the resonance condition omega_m = omega_{n+1} - omega_n fixes
    omega_m = pi v / l and k_m = pi / l.
    """
    v = derived_velocity(jp)
    ell = jp.length
    return ModulationParams(
        delta_i=delta_l, omega_m=math.pi * v / ell, k_m=math.pi / ell
    )


def _rk4_modes_numpy(phi, psi, omega2, coup, depth, omega_m, dt, n_steps,
                     record_stride, guard):
    n_modes = phi.size
    n_rec = n_steps // record_stride + 1
    t_rec = np.empty(n_rec)
    phi_rec = np.empty((n_rec, n_modes), dtype=complex)
    psi_rec = np.empty((n_rec, n_modes), dtype=complex)

    def accel(t, p):
        if depth == 0.0:
            return -omega2 * p
        em = np.exp(-1j * omega_m * t)
        ep = np.conj(em)
        m = np.eye(n_modes, dtype=complex)
        kmat = np.diag(omega2.astype(complex))
        for i in range(n_modes - 1):
            m[i, i + 1] = 0.5 * depth * em
            kmat[i, i + 1] = depth * coup[i + 1] * em
        for i in range(1, n_modes):
            m[i, i - 1] = 0.5 * depth * ep
            kmat[i, i - 1] = -depth * coup[i - 1] * ep
        return -np.linalg.solve(m, kmat @ p)

    rec = 0
    t = 0.0
    e0 = None
    for step in range(n_steps + 1):
        if step % record_stride == 0:
            t_rec[rec] = t
            phi_rec[rec] = phi
            psi_rec[rec] = psi
            total = 0.5 * np.sum(np.abs(psi) ** 2 + omega2 * np.abs(phi) ** 2)
            if e0 is None:
                e0 = total
            elif e0 > 0 and total > guard * e0:
                raise ModeInstabilityError(
                    f"energy grew {total / e0:.3g}x by t={t:.3g}s"
                )
            rec += 1
        if step == n_steps:
            break
        k1p, k1v = psi, accel(t, phi)
        k2p = psi + 0.5 * dt * k1v
        k2v = accel(t + 0.5 * dt, phi + 0.5 * dt * k1p)
        k3p = psi + 0.5 * dt * k2v
        k3v = accel(t + 0.5 * dt, phi + 0.5 * dt * k2p)
        k4p = psi + dt * k3v
        k4v = accel(t + dt, phi + dt * k3p)
        phi = phi + (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        psi = psi + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        t += dt
    return t_rec[:rec], phi_rec[:rec], psi_rec[:rec]


if _HAVE_NUMBA:

    @numba.njit(cache=True)
    def _accel_nb(t, p, omega2, coup, depth, omega_m):  # pragma: no cover
        n = p.size
        if depth == 0.0:
            return -omega2 * p
        em = np.exp(-1j * omega_m * t)
        ep = np.conj(em)
        m = np.eye(n, dtype=np.complex128)
        kmat = np.zeros((n, n), dtype=np.complex128)
        for i in range(n):
            kmat[i, i] = omega2[i]
        for i in range(n - 1):
            m[i, i + 1] = 0.5 * depth * em
            kmat[i, i + 1] = depth * coup[i + 1] * em
        for i in range(1, n):
            m[i, i - 1] = 0.5 * depth * ep
            kmat[i, i - 1] = -depth * coup[i - 1] * ep
        return -np.linalg.solve(m, kmat @ p)

    @numba.njit(cache=True)
    def _rk4_modes_nb(phi, psi, omega2, coup, depth, omega_m, dt, n_steps,
                      record_stride, guard):  # pragma: no cover
        n_modes = phi.size
        n_rec = n_steps // record_stride + 1
        t_rec = np.empty(n_rec)
        phi_rec = np.empty((n_rec, n_modes), dtype=np.complex128)
        psi_rec = np.empty((n_rec, n_modes), dtype=np.complex128)
        rec = 0
        t = 0.0
        e0 = -1.0
        status = 0
        stop_t = 0.0
        for step in range(n_steps + 1):
            if step % record_stride == 0:
                t_rec[rec] = t
                phi_rec[rec] = phi
                psi_rec[rec] = psi
                total = 0.0
                for i in range(n_modes):
                    total += 0.5 * (abs(psi[i]) ** 2 + omega2[i] * abs(phi[i]) ** 2)
                if e0 < 0.0:
                    e0 = total
                elif e0 > 0.0 and total > guard * e0:
                    status = 1
                    stop_t = t
                    rec += 1
                    break
                rec += 1
            if step == n_steps:
                break
            k1p = psi
            k1v = _accel_nb(t, phi, omega2, coup, depth, omega_m)
            k2p = psi + 0.5 * dt * k1v
            k2v = _accel_nb(t + 0.5 * dt, phi + 0.5 * dt * k1p, omega2, coup,
                            depth, omega_m)
            k3p = psi + 0.5 * dt * k2v
            k3v = _accel_nb(t + 0.5 * dt, phi + 0.5 * dt * k2p, omega2, coup,
                            depth, omega_m)
            k4p = psi + dt * k3v
            k4v = _accel_nb(t + dt, phi + dt * k3p, omega2, coup, depth,
                            omega_m)
            phi = phi + (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
            psi = psi + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
            t += dt
        return t_rec[:rec], phi_rec[:rec], psi_rec[:rec], status, stop_t


def evolve_modes(
    jp: JunctionParams,
    mod: ModulationParams,
    n_modes: int,
    initial_amplitudes,
    duration: float,
    dt: float | None = None,
    *,
    samples_per_period: int = 40,
    record_stride: int | None = None,
    instability_guard: float = 1e6,
) -> ModeTrajectory:
    """Integrate the lab-frame coupled-mode equations of the modulated line.

    The mode ladder is omega_n = n pi v / l (fixed-end line of length
    l = n_cells * a), and the traveling modulation must match the ladder:
    omega_m = pi v / l and k_m = pi / l (see ``resonant_modulation``).  The
    second-order system

        d2Phi_n + w_n^2 Phi_n
          + D [ 0.5 d2Phi_{n+1} + (k_m k_{n+1} v^2 / 2) Phi_{n+1} ] e^{-i w_m t}
          + D [ 0.5 d2Phi_{n-1} - (k_m k_{n-1} v^2 / 2) Phi_{n-1} ] e^{+i w_m t} = 0

    is integrated with fixed-step classical RK4; no rotating-wave
    approximation is applied.  ``dt`` defaults to the fastest mode's period
    divided by ``samples_per_period`` (at least 40).
    """
    if n_modes < 1:
        raise ValidationError(f"n_modes must be >= 1, got {n_modes}")
    v = derived_velocity(jp)
    ell = jp.length
    omega_1 = math.pi * v / ell
    k_1 = math.pi / ell
    if mod.delta_i > 0.0:
        if abs(mod.omega_m - omega_1) > 1e-9 * omega_1:
            raise ValidationError(
                f"omega_m={mod.omega_m:g} must equal the mode spacing "
                f"{omega_1:g} (use resonant_modulation)"
            )
        if abs(mod.k_m - k_1) > 1e-9 * k_1:
            raise ValidationError(
                f"k_m={mod.k_m:g} must equal the mode wavenumber spacing {k_1:g}"
            )

    ns = np.arange(1, n_modes + 1)
    omega_n = ns * omega_1
    omega2 = omega_n**2
    coup = 0.5 * k_1 * (ns * k_1) * v**2  # k_m * k_n * v^2 / 2 per mode

    if dt is None:
        if samples_per_period < 40:
            raise ValidationError("need at least 40 samples per fastest period")
        dt = (2.0 * math.pi / omega_n[-1]) / samples_per_period
    n_steps = max(1, int(round(duration / dt)))
    if record_stride is None:
        record_stride = max(1, n_steps // 4000)

    # Standing-wave start: modes begin at rest so both rotating components
    # are populated, which the resonance condition omega_m = omega_{n+1} -
    # omega_n relies on.
    phi0 = np.zeros(n_modes, dtype=complex)
    amp = np.asarray(initial_amplitudes, dtype=complex)
    phi0[: amp.size] = amp
    psi0 = np.zeros(n_modes, dtype=complex)

    args = (phi0, psi0, omega2.astype(float), coup.astype(float),
            float(mod.delta_i), float(mod.omega_m), float(dt), n_steps,
            int(record_stride), float(instability_guard))
    if _HAVE_NUMBA:
        t_rec, phi_rec, psi_rec, status, stop_t = _rk4_modes_nb(*args)
        if status == 1:
            raise ModeInstabilityError(
                f"energy grew beyond {instability_guard:g}x by t={stop_t:.3g}s"
            )
    else:
        t_rec, phi_rec, psi_rec = _rk4_modes_numpy(*args)

    energies = 0.5 * (np.abs(psi_rec) ** 2 + omega2[None, :] * np.abs(phi_rec) ** 2)
    return ModeTrajectory(
        t=t_rec,
        amplitudes=phi_rec,
        energies=energies,
        mode_omegas=omega_n,
        metadata={
            "depth": mod.delta_i,
            "omega_m": mod.omega_m,
            "dt": dt,
            "n_steps": n_steps,
            "velocity": v,
            "length": ell,
        },
    )
