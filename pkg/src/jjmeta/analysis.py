"""Spectral and angular post-processing of recorded fields.

``spectrum`` turns probe time series into labeled harmonic spectra;
``far_field`` evaluates the array-factor radiation pattern of a discrete
aperture and reports its lobes; ``beam_plan`` synthesizes the multi-target
excitation that steers one beam per requested angle.

The physical aperture here is sub-wavelength at the carrier (a 1 mm array
vs a 60 mm free-space wavelength), where far-field diffraction formulas do
not directly apply; the pattern functions therefore take the wavenumber as
an explicit argument (equivalently an effective wavelength/index), and the
beam demonstrations are array-factor constructions, not near-field solves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import ValidationError


@dataclass(frozen=True)
class SpectralPeak:
    frequency_hz: float
    magnitude_db: float
    label: str


@dataclass(frozen=True)
class Spectrum:
    """One-sided spectrum of a uniformly sampled series.

    Magnitudes are normalized to the strongest peak (the carrier).  The
    complex amplitudes of the windowed series are kept so Parseval's
    identity sum |x|^2 = (1/N) sum |X|^2 stays checkable.
    """

    frequency_hz: np.ndarray
    amplitude: np.ndarray
    peaks: tuple
    window: str
    metadata: dict = field(default_factory=dict)

    def magnitude_db(self) -> np.ndarray:
        mag = np.abs(self.amplitude)
        ref = mag.max() if mag.max() > 0 else 1.0
        return 20.0 * np.log10(np.maximum(mag, 1e-300) / ref)

    def level_at(self, f_hz: float, search_bins: int = 2) -> float:
        """Normalized dB level near a frequency (local max within a few bins)."""
        df = self.frequency_hz[1] - self.frequency_hz[0]
        i = int(round(f_hz / df))
        lo, hi = max(0, i - search_bins), min(len(self.amplitude), i + search_bins + 1)
        mag = np.abs(self.amplitude)
        ref = mag.max() if mag.max() > 0 else 1.0
        return float(20.0 * np.log10(max(mag[lo:hi].max(), 1e-300) / ref))


def _parabolic_refine(mag, i):
    if 0 < i < len(mag) - 1:
        y0, y1, y2 = mag[i - 1], mag[i], mag[i + 1]
        denom = y0 - 2.0 * y1 + y2
        if denom != 0.0:
            return i + 0.5 * (y0 - y2) / denom
    return float(i)


def spectrum(
    series,
    dt: float,
    window: str = "hann",
    *,
    f0_hz: float | None = None,
    f_mod_hz: float | None = None,
    peak_floor_db: float = -60.0,
) -> Spectrum:
    """Discrete Fourier spectrum of a probe series with labeled peaks.

    Peaks are local maxima above ``peak_floor_db`` (relative to the carrier)
    with parabolic sub-bin interpolation.  When ``f0_hz``/``f_mod_hz`` are
    given, peaks are labeled ``fundamental`` or ``sideband+n``/``sideband-n``
    by their offset in units of the modulation frequency.
    """
    series = np.asarray(series, dtype=float)
    if series.ndim != 1:
        raise ValidationError("spectrum expects a 1D series")
    if series.size < 256:
        raise ValidationError(f"series too short ({series.size} < 256 samples)")
    if dt <= 0:
        raise ValidationError("dt must be positive (uniform sampling)")

    n = series.size
    if window == "hann":
        w = np.hanning(n)
    elif window in ("rect", "rectangular", "boxcar"):
        w = np.ones(n)
    else:
        raise ValidationError(f"unknown window {window!r}")

    amp = np.fft.rfft(series * w)
    freq = np.fft.rfftfreq(n, dt)
    mag = np.abs(amp)
    ref = mag.max() if mag.max() > 0 else 1.0
    df = freq[1]

    peaks = []
    floor = ref * 10.0 ** (peak_floor_db / 20.0)
    for i in range(1, len(mag) - 1):
        if mag[i] < floor or mag[i] < mag[i - 1] or mag[i] <= mag[i + 1]:
            continue
        f_pk = _parabolic_refine(mag, i) * df
        level = 20.0 * math.log10(mag[i] / ref)
        label = ""
        if f0_hz is not None:
            offset = f_pk - f0_hz
            if f_mod_hz:
                n_side = round(offset / f_mod_hz)
                if abs(offset - n_side * f_mod_hz) < 0.5 * df + 0.02 * f_mod_hz:
                    label = (
                        "fundamental"
                        if n_side == 0
                        else f"sideband{n_side:+d}"
                    )
            elif abs(offset) < 0.5 * df:
                label = "fundamental"
        peaks.append(SpectralPeak(f_pk, level, label))

    return Spectrum(
        frequency_hz=freq,
        amplitude=amp,
        peaks=tuple(peaks),
        window=window,
        metadata={"dt": dt, "n_samples": n, "f0_hz": f0_hz, "f_mod_hz": f_mod_hz},
    )


def parseval_mismatch(spec: Spectrum, series, dt: float) -> float:
    """Relative Parseval error between a spectrum and its (windowed) series."""
    series = np.asarray(series, dtype=float)
    n = series.size
    w = np.hanning(n) if spec.window == "hann" else np.ones(n)
    x = series * w
    t_sum = float(np.sum(x**2))
    full = np.fft.fft(x)
    f_sum = float(np.sum(np.abs(full) ** 2) / n)
    return abs(t_sum - f_sum) / max(t_sum, 1e-300)


@dataclass(frozen=True)
class Lobe:
    angle_deg: float
    level_db: float
    width_deg: float


@dataclass(frozen=True)
class RadiationPattern:
    """Normalized angular intensity (max = 0 dB) and detected lobes."""

    theta_deg: np.ndarray
    intensity_db: np.ndarray
    lobes: tuple
    metadata: dict = field(default_factory=dict)

    def level_at(self, angle_deg: float) -> float:
        i = int(np.argmin(np.abs(self.theta_deg - angle_deg)))
        return float(self.intensity_db[i])


def far_field(
    aperture,
    k0: float,
    pitch: float,
    *,
    theta_step_deg: float = 0.05,
    lobe_threshold_db: float = -13.0,
) -> RadiationPattern:
    """Fraunhofer array-factor pattern of a discrete aperture.

    P(theta) ~ |sum_j f_j exp(i k0 pitch j sin theta)|^2 over
    theta in [-90, 90] degrees, normalized to its maximum.  Lobes are local
    maxima above ``lobe_threshold_db`` (default -13 dB separates main lobes
    from the uniform-aperture sidelobes at -13.26 dB) reported with their
    angles and -3 dB widths.
    """
    f = np.asarray(aperture, dtype=complex)
    if f.size < 8:
        raise ValidationError(f"aperture needs >= 8 elements, got {f.size}")
    theta = np.arange(-90.0, 90.0 + theta_step_deg / 2, theta_step_deg)
    sin_t = np.sin(np.radians(theta))
    j = np.arange(f.size)
    phases = np.exp(1j * k0 * pitch * np.outer(sin_t, j))
    power = np.abs(phases @ f) ** 2
    p_max = power.max()
    intensity_db = 10.0 * np.log10(np.maximum(power, 1e-300) / p_max)

    lobes = []
    thr = lobe_threshold_db
    for i in range(1, len(theta) - 1):
        if intensity_db[i] < thr:
            continue
        if intensity_db[i] >= intensity_db[i - 1] and intensity_db[i] > intensity_db[i + 1]:
            angle = float(
                theta[i]
                + theta_step_deg
                * _parabolic_offset(intensity_db[i - 1], intensity_db[i], intensity_db[i + 1])
            )
            width = _lobe_width(theta, intensity_db, i)
            lobes.append(Lobe(angle, float(intensity_db[i]), width))
    return RadiationPattern(
        theta_deg=theta,
        intensity_db=intensity_db,
        lobes=tuple(lobes),
        metadata={"k0": k0, "pitch": pitch, "n_elements": int(f.size),
                  "threshold_db": thr},
    )


def _parabolic_offset(y0, y1, y2):
    denom = y0 - 2.0 * y1 + y2
    return 0.5 * (y0 - y2) / denom if denom != 0.0 else 0.0


def _lobe_width(theta, db, i_peak):
    """-3 dB width around a local maximum, by linear interpolation."""
    target = db[i_peak] - 3.0
    left = right = None
    j = i_peak
    while j > 0 and db[j] > target:
        j -= 1
    if db[j] <= target:
        left = np.interp(target, [db[j], db[j + 1]], [theta[j], theta[j + 1]])
    j = i_peak
    while j < len(db) - 1 and db[j] > target:
        j += 1
    if db[j] <= target:
        right = np.interp(target, [db[j], db[j - 1]], [theta[j], theta[j - 1]])
    if left is None or right is None:
        return float("nan")
    return float(right - left)


def beam_plan(
    targets_deg,
    k0: float,
    pitch: float,
    n_elements: int,
    *,
    warn_unresolvable: bool = True,
) -> np.ndarray:
    """Aperture excitation steering one beam at each target angle.

    Sums equal-weight linear-phase profiles exp(-i k0 pitch j sin theta_t),
    one per target; a deterministic golden-ratio quadratic phase per target
    decorrelates the beam-to-beam interference so the summed pattern keeps
    one clean lobe per target.  Raises for unreachable angles (|sin| > 1)
    and warns when targets sit closer than one beamwidth.
    """
    import warnings

    targets = np.atleast_1d(np.asarray(targets_deg, dtype=float))
    sin_t = np.sin(np.radians(targets))
    if np.any(np.abs(sin_t) > 1.0) or np.any(np.abs(targets) > 90.0):
        raise ValidationError("unreachable steering angle: |theta| must be <= 90 deg")

    if warn_unresolvable and targets.size > 1:
        beamwidth_sin = 0.886 * 2.0 * math.pi / (k0 * pitch * n_elements)
        gaps = np.diff(np.sort(sin_t))
        if np.any(gaps < beamwidth_sin):
            warnings.warn(
                "target spacing below one beamwidth; lobes may merge",
                RuntimeWarning,
                stacklevel=2,
            )

    golden = 0.5 * (math.sqrt(5.0) - 1.0)
    j = np.arange(n_elements)
    excitation = np.zeros(n_elements, dtype=complex)
    m = targets.size
    for t_idx, s in enumerate(sin_t):
        # decorrelation only matters for crowded multi-beam fans; a single
        # beam or a symmetric pair keeps its plain (real) profile
        decorr = 2.0 * math.pi * golden * t_idx * t_idx if m > 2 else 0.0
        excitation += np.exp(-1j * (k0 * pitch * j * s - decorr))
    return excitation / m
