"""Physical constants and the internal unit policy.

All internal frequencies are angular (rad/s); configuration files and
human-facing reports use Hz (or GHz/MHz).  Lengths, capacitances,
inductances, currents and powers are SI base units throughout.
"""

from dataclasses import dataclass

import scipy.constants as _sc

TWO_PI = 2.0 * _sc.pi


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA constants used by the superconducting-circuit model.

    Attributes
    ----------
    h : float
        Planck constant (J s).
    hbar : float
        Reduced Planck constant (J s).
    flux_quantum : float
        Magnetic flux quantum Phi_0 = h / (2 e) (Wb).
    reduced_flux_quantum : float
        phi_0 = Phi_0 / (2 pi) (Wb).
    """

    h: float = _sc.h
    hbar: float = _sc.hbar
    flux_quantum: float = _sc.h / (2.0 * _sc.e)
    reduced_flux_quantum: float = _sc.h / (2.0 * _sc.e) / TWO_PI


CONSTANTS = PhysicalConstants()

PHI0 = CONSTANTS.flux_quantum
PHI0_REDUCED = CONSTANTS.reduced_flux_quantum
HBAR = CONSTANTS.hbar
H_PLANCK = CONSTANTS.h


def hz_to_angular(f_hz: float) -> float:
    """Convert a cyclic frequency in Hz to rad/s."""
    return TWO_PI * f_hz


def angular_to_hz(omega: float) -> float:
    """Convert an angular frequency in rad/s to Hz."""
    return omega / TWO_PI
