"""Closed-form model of the RF-modulated critical current and inductance.

The junction critical current under a static flux bias ``theta`` and an RF
phase excursion of depth ``delta_phi`` is

    I_c(t) = I_c0 cos(theta + delta_phi cos(omega_rf t)),

so the inductance L_J = Phi0 / (2 pi I_c) ripples at even multiples of the
pump frequency.  Two series representations of that ripple are provided and
cross-checked: a Taylor expansion of the cosine denominator (orders 2 and 4)
and the Bessel-weighted harmonic expansion of cos(x cos wt).  Both store the
ripple relative to the mean inductance L_J0 = Phi0 / (2 pi I_c0 D0).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import PHI0, TWO_PI
from .params import ModulationParams, JunctionParams, ValidationError


class SingularInductanceError(ValueError):
    """cos(theta + delta_phi cos(w t)) crosses zero on the requested grid."""


def bessel_j(order: int, x: float) -> float:
    """Integer-order Bessel function J_n(x) by its ascending power series.

    Accurate to better than 1e-12 relative for |x| <= 5, which covers every
    phase depth the modulation model accepts (delta_phi < 1).
    """
    if order < 0:
        return ((-1) ** (-order)) * bessel_j(-order, x)
    if abs(x) > 5.0:
        raise ValueError(f"power-series Bessel evaluator limited to |x| <= 5, got {x}")
    half = 0.5 * x
    term = half**order / math.factorial(order)
    total = term
    k = 0
    while True:
        k += 1
        term *= -(half * half) / (k * (k + order))
        total += term
        if abs(term) <= 1e-17 * max(abs(total), 1e-300) or k > 60:
            return total


@dataclass(frozen=True)
class HarmonicTerm:
    """One even-harmonic component of the inductance ripple.

    ``index`` is the multiple of omega_rf (2, 4, ...), ``amplitude`` the
    dimensionless coefficient in delta_L(t), ``denominator_coeff`` the
    matching cosine coefficient of the expanded denominator, and ``omega``
    the absolute angular frequency (nan when omega_rf was not supplied).
    """

    index: int
    amplitude: float
    denominator_coeff: float
    omega: float


@dataclass(frozen=True)
class InductanceSeries:
    """Truncated harmonic series L_J(t) = L_J0 (1 + sum_k a_k cos(k w t)).

    ``d0`` is the mean denominator (includes cos theta); ``l_j0`` is the
    physical baseline inductance when a critical current was supplied,
    otherwise None and only the dimensionless content is meaningful.
    """

    d0: float
    terms: tuple[HarmonicTerm, ...]
    l_j0: float | None = None
    omega_rf: float = float("nan")

    def delta_l(self, t) -> np.ndarray:
        """Dimensionless ripple sum_k a_k cos(k omega_rf t)."""
        self._require_omega()
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for term in self.terms:
            out += term.amplitude * np.cos(term.index * self.omega_rf * t)
        return out

    def denominator(self, t) -> np.ndarray:
        """Reconstructed denominator D0 + sum_k c_k cos(k omega_rf t)."""
        self._require_omega()
        t = np.asarray(t, dtype=float)
        out = np.full_like(t, self.d0)
        for term in self.terms:
            out += term.denominator_coeff * np.cos(term.index * self.omega_rf * t)
        return out

    def inductance(self, t) -> np.ndarray:
        """L_J(t) = L_J0 (1 + delta_l(t)); requires l_j0."""
        if self.l_j0 is None:
            raise ValueError("series was built without a critical current")
        return self.l_j0 * (1.0 + self.delta_l(t))

    def dl_dt(self, t) -> np.ndarray:
        """Analytic time derivative of L_J(t); requires l_j0."""
        if self.l_j0 is None:
            raise ValueError("series was built without a critical current")
        self._require_omega()
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for term in self.terms:
            w = term.index * self.omega_rf
            out -= self.l_j0 * term.amplitude * w * np.sin(w * t)
        return out

    def _require_omega(self):
        if math.isnan(self.omega_rf):
            raise ValueError("series has no omega_rf; pass one when expanding")


def critical_current(mod: ModulationParams, i_c0: float, t) -> np.ndarray:
    """Modulated critical current I_c0 cos(theta + delta_phi cos(w t)).

    The full expression is evaluated with no small-angle assumption.  A
    warning is emitted if the result is non-positive anywhere (junction
    effectively suppressed).
    """
    t = np.asarray(t, dtype=float)
    value = i_c0 * np.cos(mod.theta + mod.delta_phi * np.cos(mod.omega_rf * t))
    if np.any(value <= 0.0):
        warnings.warn(
            "critical current reaches zero or negative values: junction"
            " effectively suppressed at this bias/depth",
            RuntimeWarning,
            stacklevel=2,
        )
    return value


def inductance_timeseries(
    mod: ModulationParams,
    jp: JunctionParams,
    t,
    path: str = "exact",
) -> np.ndarray:
    """Sampled Josephson inductance L_J(t) = Phi0 / (2 pi I_c(t)).

    ``path='simplified'`` uses the factorized cos(theta)cos(dphi cos wt)
    form, valid only when sin(theta) = 0; the exact path works for any bias.
    Raises SingularInductanceError if the cosine denominator crosses or
    touches zero within the grid.
    """
    t = np.asarray(t, dtype=float)
    if path == "simplified":
        if abs(math.sin(mod.theta)) > 1e-12:
            raise ValidationError(
                "simplified inductance path requires theta = n*pi "
                f"(sin theta = 0); got theta = {mod.theta}"
            )
        denom = math.cos(mod.theta) * np.cos(
            mod.delta_phi * np.cos(mod.omega_rf * t)
        )
    elif path == "exact":
        denom = np.cos(mod.theta + mod.delta_phi * np.cos(mod.omega_rf * t))
    else:
        raise ValueError(f"unknown path {path!r}")

    if np.any(denom == 0.0) or np.min(denom) < 0.0 < np.max(denom):
        raise SingularInductanceError(
            "cos(theta + delta_phi cos(w t)) crosses zero on the grid; "
            "inductance is singular"
        )
    return PHI0 / (TWO_PI * jp.i_c0 * denom)


def _taylor_denominator_coeffs(delta_phi: float, order: int):
    """Cosine coefficients of cos(dphi cos wt) expanded to the given order.

    Returns (static, c2, c4): the constant part and the cos(2wt)/cos(4wt)
    coefficients.  The static part always keeps the fourth-order correction,
    matching the definition of the mean denominator D0.
    """
    d2 = delta_phi * delta_phi
    d4 = d2 * d2
    static = 1.0 - d2 / 4.0 + d4 / 64.0
    if order == 2:
        return static, -d2 / 4.0, 0.0
    return static, -d2 / 4.0 + d4 / 48.0, d4 / 192.0


def expand_taylor(
    delta_phi: float,
    theta: float = 0.0,
    order: int = 2,
    *,
    i_c0: float | None = None,
    omega_rf: float = float("nan"),
) -> InductanceSeries:
    """Taylor-expansion path for the inductance ripple.

    Expands the denominator cos(dphi cos wt) in powers of dphi and converts
    it to a ripple of the inductance by one reciprocal step, so the 2w
    amplitude at order 2 is (dphi^2/4) / D0 with D0 the mean denominator.
    Valid for |delta_phi| < 1; ``order`` selects 2 or 4.
    """
    if not abs(delta_phi) < 1.0:
        raise ValueError(f"Taylor expansion requires |delta_phi| < 1, got {delta_phi}")
    if order not in (2, 4):
        raise ValueError(f"order must be 2 or 4, got {order}")
    static, c2, c4 = _taylor_denominator_coeffs(delta_phi, order)
    cos_t = math.cos(theta)
    d0 = cos_t * static
    terms = []
    for index, coeff in ((2, c2), (4, c4)):
        if coeff == 0.0:
            continue
        terms.append(
            HarmonicTerm(
                index=index,
                amplitude=-coeff / static,
                denominator_coeff=cos_t * coeff,
                omega=index * omega_rf,
            )
        )
    l_j0 = None if i_c0 is None else PHI0 / (TWO_PI * i_c0 * d0)
    return InductanceSeries(d0=d0, terms=tuple(terms), l_j0=l_j0, omega_rf=omega_rf)


def expand_jacobi_anger(
    delta_phi: float,
    n_max: int = 2,
    *,
    theta: float = 0.0,
    i_c0: float | None = None,
    omega_rf: float = float("nan"),
) -> InductanceSeries:
    """Bessel-harmonic path for the inductance ripple.

    Uses cos(x cos wt) = J0(x) + 2 sum_n (-1)^n J_{2n}(x) cos(2n wt),
    truncated at 2*n_max.  The alternating sign is required for the series
    to reconstruct the cosine (checked against dense-grid evaluation in the
    test suite); the coefficient magnitudes are J0, 2 J2, 2 J4, ...
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    j0 = bessel_j(0, delta_phi)
    cos_t = math.cos(theta)
    d0 = cos_t * j0
    terms = []
    for n in range(1, n_max + 1):
        coeff = 2.0 * ((-1) ** n) * bessel_j(2 * n, delta_phi)
        if coeff == 0.0:
            continue
        terms.append(
            HarmonicTerm(
                index=2 * n,
                amplitude=-coeff / j0,
                denominator_coeff=cos_t * coeff,
                omega=2 * n * omega_rf,
            )
        )
    l_j0 = None if i_c0 is None else PHI0 / (TWO_PI * i_c0 * d0)
    return InductanceSeries(d0=d0, terms=tuple(terms), l_j0=l_j0, omega_rf=omega_rf)


def modulation_power(dl_dt, current, t=None):
    """Instantaneous pump power 0.5 * dL/dt * I^2 and its time average.

    ``dl_dt`` is either an InductanceSeries (then ``t`` is required and the
    derivative is evaluated analytically) or an array of sampled dL/dt
    values aligned with ``current``.  Returns (samples, time_average).
    """
    current = np.asarray(current, dtype=float)
    if isinstance(dl_dt, InductanceSeries):
        if t is None:
            raise ValueError("a time grid is required with an InductanceSeries")
        dl = dl_dt.dl_dt(t)
    else:
        dl = np.asarray(dl_dt, dtype=float)
    if dl.shape != current.shape:
        raise ValueError(
            f"time-grid mismatch: dL/dt has shape {dl.shape}, "
            f"current has shape {current.shape}"
        )
    samples = 0.5 * dl * current**2
    return samples, float(np.mean(samples))
