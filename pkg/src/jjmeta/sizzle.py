"""Qubit-layer physics: quantized line modes, exchange, ZZ maps, gates.

Internally every frequency-like quantity is angular (rad/s); map axes and
reports display cyclic MHz.  The anharmonicity magnitude alpha is stored
positive with transmon levels E_k = k w01 - alpha k(k-1)/2, so the
|1>->|2> transition sits alpha below the |0>->|1> transition.  The
drive-detuning formulas below follow the modulated-ZZ expression whose pole
factors are (Delta_{i,d} + alpha_i): the pole line therefore sits at
Delta_{i,d} = -alpha_i, which is where the |1>->|2> feature appears when
the detuning is measured drive-relative; callers passing
Delta = omega_q - omega_d conventions must negate accordingly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .constants import HBAR, TWO_PI
from .params import JunctionParams, ValidationError, derived_velocity


@dataclass(frozen=True)
class TransmonParams:
    """Transmon qubit with at least three retained levels.

    ``omega01`` and ``alpha`` are angular (rad/s); ``alpha`` is the positive
    anharmonicity magnitude (omega12 = omega01 - alpha).  ``z_q`` is the
    qubit position along the line (m).
    """

    omega01: float
    alpha: float
    levels: int = 3
    z_q: float = 0.0

    def __post_init__(self):
        if self.levels < 3:
            raise ValidationError(
                f"transmon model retains at least 3 levels, got {self.levels}"
            )
        if self.alpha <= 0:
            raise ValidationError("alpha is a positive magnitude")

    def level_energies(self) -> np.ndarray:
        """E_k = k w01 - alpha k(k-1)/2 for k = 0..levels-1 (rad/s units)."""
        k = np.arange(self.levels)
        return k * self.omega01 - 0.5 * self.alpha * k * (k - 1)


@dataclass(frozen=True)
class DriveParams:
    """Off-resonant (Stark) drive tones applied to the two qubits.

    Amplitudes are angular (rad/s); ``nu_d`` is the drive frequency in Hz
    (cyclic, as configured); phases in radians.
    """

    omega_0: float
    omega_1: float
    nu_d: float
    phi_0: float = 0.0
    phi_1: float = 0.0

    def detuning(self, qubit_omega01: float) -> float:
        """Delta_{i,d} = omega_qi - 2 pi nu_d (rad/s)."""
        return qubit_omega01 - TWO_PI * self.nu_d


class CommutatorError(RuntimeError):
    """Canonical commutator check failed: mode normalization is broken."""


@dataclass(frozen=True)
class QuantizedModeSet:
    """Flux and charge operators of the quantized line modes.

    ``phi_ops[n]``/``q_ops[n]`` are single-mode matrices on the Fock cutoff;
    ``zero_point_flux[n]`` is sqrt(hbar / (2 w_n C_total)) with C_total the
    total line capacitance.  The canonical commutator [Phi, Q] = i hbar is
    verified on construction (relative error < 1e-10 at least two levels
    below the cutoff).
    """

    omegas: np.ndarray
    zero_point_flux: np.ndarray
    phi_ops: tuple
    q_ops: tuple
    cutoff: int
    c_total: float


def _ladder(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff)), 1)


def build_quantized_modes(
    jp: JunctionParams, n_modes: int, cutoff: int = 10
) -> QuantizedModeSet:
    """Quantize the fixed-end line's modes on a truncated Fock space.

    Mode frequencies follow the ladder w_n = n pi v / l; each flux operator
    is Phi_n = phi_zp (a + a^dagger) with phi_zp = sqrt(hbar/(2 w_n C_tot)),
    and Q_n = C_tot dPhi_n/dt = -i sqrt(hbar w_n C_tot / 2)(a - a^dagger).
    Doubling w_n shrinks the zero-point flux by sqrt(2).
    """
    if cutoff < 6:
        raise ValidationError(f"Fock cutoff must be >= 6, got {cutoff}")
    if n_modes < 1:
        raise ValidationError("need at least one mode")
    v = derived_velocity(jp)
    ell = jp.length
    omegas = np.arange(1, n_modes + 1) * math.pi * v / ell
    c_total = jp.c_shunt * jp.n_cells

    a = _ladder(cutoff)
    ad = a.T.conj()
    phi_ops, q_ops, zpf = [], [], []
    for w in omegas:
        p = math.sqrt(HBAR / (2.0 * w * c_total))
        phi = p * (a + ad)
        q = -1j * math.sqrt(HBAR * w * c_total / 2.0) * (a - ad)
        comm = phi @ q - q @ phi
        ident = comm / (1j * HBAR)
        keep = cutoff - 2
        err = np.max(np.abs(ident[:keep, :keep] - np.eye(cutoff)[:keep, :keep]))
        if err > 1e-10:
            raise CommutatorError(
                f"[Phi, Q] != i hbar below the cutoff (rel err {err:.2e})"
            )
        phi_ops.append(phi)
        q_ops.append(q)
        zpf.append(p)
    return QuantizedModeSet(
        omegas=omegas,
        zero_point_flux=np.array(zpf),
        phi_ops=tuple(phi_ops),
        q_ops=tuple(q_ops),
        cutoff=cutoff,
        c_total=c_total,
    )


def coupling_timeseries(
    alpha0: float,
    delta_l: float,
    omega_m: float,
    t,
    *,
    omega_n: float,
    c_line: float,
    l_j0: float,
) -> np.ndarray:
    """Modulated qubit-line coupling g(t) = g0 [1 + Delta_L cos(w_m t)].

    g0 = alpha0 sqrt(1 / (2 hbar w_n C L_J0)) with the line's mode
    frequency, capacitance and mean inductance.  Delta_L must lie in [0,1).
    """
    if not 0.0 <= delta_l < 1.0:
        raise ValidationError(f"delta_l must lie in [0, 1), got {delta_l}")
    g0 = alpha0 * math.sqrt(1.0 / (2.0 * HBAR * omega_n * c_line * l_j0))
    t = np.asarray(t, dtype=float)
    return g0 * (1.0 + delta_l * np.cos(omega_m * t))


def j_eff(
    g1: float,
    g2: float,
    sideband_table,
    k_m: float,
    z1: float,
    z2: float,
    *,
    dispersive_warning_ratio: float = 0.1,
) -> float:
    """Effective exchange J_eff = sum g1 g2 delta_nk cos(k_m (z1-z2)) / Delta_nk.

    ``sideband_table`` is an iterable of (delta_nk, Delta_nk) pairs: the
    modulation-induced coupling factor and the detuning of qubit 1 from the
    k-th sideband of mode n.  A single pair reproduces the dominant-term
    shortcut.  Zero detunings are errors (resonant term); |g/Delta| above
    0.1 triggers a dispersive-validity warning.
    """
    total = 0.0
    spatial = math.cos(k_m * (z1 - z2))
    for delta_nk, det_nk in sideband_table:
        if det_nk == 0.0:
            raise ValidationError("zero detuning in J_eff sum (resonant term)")
        if max(abs(g1), abs(g2)) / abs(det_nk) > dispersive_warning_ratio:
            warnings.warn(
                "dispersive validity questionable: |g/Delta| > "
                f"{dispersive_warning_ratio}",
                RuntimeWarning,
                stacklevel=2,
            )
        total += g1 * g2 * delta_nk * spatial / det_nk
    return total


def gate_time(j: float, delta_12: float, theta: float) -> float:
    """Entangling time t_g = theta Delta_12 / J_eff^2 (angular convention).

    theta = pi gives the maximally entangling point.  The exact two-level
    exchange propagator accumulates ZZ phase at rate 2 J^2/Delta_12, so this
    expression corresponds to twice the exact pi-phase time; the prefactor
    convention is recorded with the validation suite.
    """
    if j == 0.0:
        raise ValidationError("J_eff must be nonzero")
    if abs(j / delta_12) > 0.1:
        warnings.warn(
            "gate-time formula used outside the dispersive regime "
            f"(|J/Delta| = {abs(j / delta_12):.3f} > 0.1)",
            RuntimeWarning,
            stacklevel=2,
        )
    return theta * delta_12 / j**2


def dispersive_shift(g01: float, alpha_signed: float, delta: float) -> float:
    """Single-qubit dispersive shift chi = g01^2 alpha / [Delta (Delta + alpha)].

    ``alpha_signed`` is the signed level asymmetry of the three-level ladder
    E = (0, w01, 2 w01 + alpha_signed): physical transmons carry a negative
    value here.  Poles at Delta = 0 and Delta = -alpha are errors.
    """
    if delta == 0.0:
        raise ValidationError("dispersive shift pole at Delta = 0")
    if delta + alpha_signed == 0.0:
        raise ValidationError("dispersive shift pole at Delta = -alpha")
    return g01**2 * alpha_signed / (delta * (delta + alpha_signed))


def leakage_bound(omega_12: float, alpha: float, t_g: float):
    """Leakage bound (Omega_12/alpha)^2 sin^2(alpha t_g / 2) and its envelope.

    Returns (bound, envelope_max); the envelope maximum is (Omega_12/alpha)^2.
    """
    if alpha <= 0:
        raise ValidationError("alpha must be positive")
    ratio2 = (omega_12 / alpha) ** 2
    return ratio2 * math.sin(0.5 * alpha * t_g) ** 2, ratio2


# ---------------------------------------------------------------------------
# Exact two-transmon diagonalization and the modulated ZZ map
# ---------------------------------------------------------------------------


class LevelTrackingError(RuntimeError):
    """Dressed-state overlap fell below the trustworthy threshold."""


def _two_transmon_hamiltonian(q1: TransmonParams, q2: TransmonParams, j: float):
    n1, n2 = q1.levels, q2.levels
    e1 = q1.level_energies()
    e2 = q2.level_energies()
    h = np.zeros((n1 * n2, n1 * n2))
    h += np.kron(np.diag(e1), np.eye(n2))
    h += np.kron(np.eye(n1), np.diag(e2))
    b1 = _ladder(n1)
    b2 = _ladder(n2)
    exchange = np.kron(b1.T, b2) + np.kron(b1, b2.T)
    h += j * exchange
    return h


def _dressed_energy(evals, evecs, bare_index, min_overlap=0.7):
    weights = np.abs(evecs[bare_index, :]) ** 2
    k = int(np.argmax(weights))
    if weights[k] < min_overlap:
        raise LevelTrackingError(
            f"dressed-state overlap {weights[k]:.2f} < {min_overlap} for bare "
            f"index {bare_index}: non-dispersive regime"
        )
    return evals[k]


def static_zz_oracle(q1: TransmonParams, q2: TransmonParams, j: float) -> float:
    """Exact static ZZ: zeta = E11 - E10 - E01 + E00 (rad/s).

    Builds the two-transmon Duffing + exchange Hamiltonian on the product
    space (>= 9 levels), diagonalizes it exactly, and tracks the four
    computational dressed states by maximal overlap with the bare product
    states.  J = 0 returns exactly zero.
    """
    if j == 0.0:
        return 0.0
    h = _two_transmon_hamiltonian(q1, q2, j)
    evals, evecs = np.linalg.eigh(h)
    n2 = q2.levels

    def idx(i, k):
        return i * n2 + k

    e00 = _dressed_energy(evals, evecs, idx(0, 0))
    e10 = _dressed_energy(evals, evecs, idx(1, 0))
    e01 = _dressed_energy(evals, evecs, idx(0, 1))
    e11 = _dressed_energy(evals, evecs, idx(1, 1))
    return float(e11 - e10 - e01 + e00)


def perturbative_zz(q1: TransmonParams, q2: TransmonParams, j: float) -> float:
    """Second-order static ZZ: 2 J^2 (a1 + a2) / [(a1 - D)(a2 + D)], D = w1 - w2."""
    delta = q1.omega01 - q2.omega01
    return 2.0 * j**2 * (q1.alpha + q2.alpha) / (
        (q1.alpha - delta) * (q2.alpha + delta)
    )


@dataclass(frozen=True)
class ZZMap:
    """Modulated ZZ strength over (drive detuning) x (drive strength).

    Axes are cyclic MHz; ``zeta_mhz`` is masked (nan + mask flag) on the
    pole lines where any |Delta_{i,d}| or |Delta_{i,d} + alpha_i| falls
    below the pole window.  The Omega = 0 column equals the static ZZ.
    """

    detuning_mhz: np.ndarray
    strength_mhz: np.ndarray
    zeta_mhz: np.ndarray
    mask: np.ndarray
    static_zz_mhz: float
    metadata: dict = field(default_factory=dict)


def zz_map(
    q1: TransmonParams,
    q2: TransmonParams,
    j: float,
    detuning_grid_mhz,
    strength_grid_mhz,
    *,
    phi_0: float = 0.0,
    phi_1: float = 0.0,
    pole_window_factor: float = 1.0,
) -> ZZMap:
    """Evaluate the drive-modulated ZZ over a detuning/strength grid.

    The modulated term 2 J a0 a1 W0 W1 cos(phi0 - phi1) /
    [(D0+a0)(D1+a1) D0 D1] is added to the exact static ZZ from the
    diagonalization oracle.  The x axis is the drive detuning D0 of qubit 1
    (cyclic MHz); qubit 2's detuning follows as D1 = D0 - (w1 - w2).  Cells
    within ``pole_window_factor`` grid steps of any pole line are masked.
    """
    det = np.asarray(detuning_grid_mhz, dtype=float)
    om = np.asarray(strength_grid_mhz, dtype=float)
    if det.ndim != 1 or om.ndim != 1 or det.size < 2 or om.size < 2:
        raise ValidationError("detuning and strength grids must be 1D with >= 2 points")

    a0 = q1.alpha / TWO_PI / 1e6
    a1 = q2.alpha / TWO_PI / 1e6
    delta_12 = (q1.omega01 - q2.omega01) / TWO_PI / 1e6
    j_mhz = j / TWO_PI / 1e6
    zeta0 = static_zz_oracle(q1, q2, j) / TWO_PI / 1e6

    d0 = det[None, :]
    d1 = d0 - delta_12
    w = om[:, None]
    denom = (d0 + a0) * (d1 + a1) * d0 * d1
    with np.errstate(divide="ignore", invalid="ignore"):
        modulated = (
            2.0 * j_mhz * a0 * a1 * w**2 * math.cos(phi_0 - phi_1) / denom
        )
    zeta = zeta0 + modulated

    step = abs(det[1] - det[0])
    window = pole_window_factor * step
    pole_dist = np.minimum.reduce(
        [np.abs(d0), np.abs(d0 + a0), np.abs(d1), np.abs(d1 + a1)]
    )
    mask = np.broadcast_to(pole_dist < window, zeta.shape).copy()
    zeta = np.where(mask, np.nan, zeta)

    return ZZMap(
        detuning_mhz=det,
        strength_mhz=om,
        zeta_mhz=zeta,
        mask=mask,
        static_zz_mhz=zeta0,
        metadata={
            "alpha0_mhz": a0,
            "alpha1_mhz": a1,
            "j_mhz": j_mhz,
            "delta_12_mhz": delta_12,
            "pole_lines_mhz": sorted([0.0, -a0, delta_12, delta_12 - a1]),
            "phase_difference": phi_0 - phi_1,
            # the formula's pole factor (Delta_d + alpha) sits at -alpha
            # (about -197 MHz here); the original figure caption quotes the
            # |1>->|2> feature "near -300 MHz", which does not match the
            # written formula and is recorded without resolution.
            "caption_note": "pole at -alpha_i per formula; -300 MHz caption "
            "discrepancy recorded",
        },
    )


def fig3b_qubits() -> tuple:
    """The reference two-qubit operating point used by the ZZ-map scenario.

    alpha1/2pi = 197 MHz, alpha2/2pi = 195 MHz, detuning Delta/2pi = 133 MHz
    around a 5 GHz qubit, J/2pi = 0.7 MHz.
    """
    w1 = TWO_PI * 5.0e9
    q1 = TransmonParams(omega01=w1, alpha=TWO_PI * 197e6)
    q2 = TransmonParams(omega01=w1 - TWO_PI * 133e6, alpha=TWO_PI * 195e6)
    return q1, q2, TWO_PI * 0.7e6
