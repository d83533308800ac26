"""Spectra, radiation patterns, beam planning."""

import math

import numpy as np
import pytest

from jjmeta import ValidationError
from jjmeta.analysis import (
    beam_plan,
    far_field,
    parseval_mismatch,
    spectrum,
)

FS = 50e9
DT = 1.0 / FS


def tone(f_hz, n=4096, amp=1.0, phase=0.0):
    t = np.arange(n) * DT
    return amp * np.sin(2 * math.pi * f_hz * t + phase)


class TestSpectrum:
    def test_single_tone_integer_periods(self):
        f_tone = FS * 256 / 4096  # bin-centered
        spec = spectrum(tone(f_tone), DT, window="rect", f0_hz=f_tone)
        assert len(spec.peaks) == 1
        assert spec.peaks[0].label == "fundamental"
        assert spec.peaks[0].frequency_hz == pytest.approx(f_tone, rel=1e-9)
        db = spec.magnitude_db()
        off = np.abs(np.arange(db.size) - 256) > 2
        assert db[off].max() < -100.0

    def test_two_equal_tones(self):
        x = tone(FS * 230 / 4096) + tone(FS * 270 / 4096)
        spec = spectrum(x, DT, window="rect")
        top = sorted(spec.peaks, key=lambda p: -p.magnitude_db)[:2]
        assert abs(top[0].magnitude_db - top[1].magnitude_db) < 0.1

    def test_sideband_labels(self):
        f0, fm = FS * 256 / 4096, FS * 32 / 4096
        x = tone(f0) + 0.05 * tone(f0 + 2 * fm) + 0.05 * tone(f0 - 2 * fm)
        spec = spectrum(x, DT, window="rect", f0_hz=f0, f_mod_hz=fm)
        labels = {p.label for p in spec.peaks}
        assert {"fundamental", "sideband+2", "sideband-2"} <= labels

    def test_parseval_every_window(self):
        x = tone(FS * 100 / 4096) + 0.3 * tone(FS * 300 / 4096)
        for window in ("rect", "hann"):
            spec = spectrum(x, DT, window=window)
            assert parseval_mismatch(spec, x, DT) < 1e-9

    def test_short_series_rejected(self):
        with pytest.raises(ValidationError, match="256"):
            spectrum(np.zeros(100), DT)

    def test_nonuniform_rejected(self):
        with pytest.raises(ValidationError):
            spectrum(np.zeros(512), -1.0)


K0 = 2 * math.pi / 0.012  # effective wavelength 12 mm
PITCH = 1e-3


class TestFarField:
    def test_uniform_aperture_sidelobe(self):
        # analytic uniform-array factor: broadside main lobe, first
        # sidelobe -13.26 dB
        pat = far_field(np.ones(100), K0, PITCH, lobe_threshold_db=-14)
        main = max(pat.lobes, key=lambda l: l.level_db)
        assert abs(main.angle_deg) < 0.05
        assert main.level_db == 0.0
        side = max(
            (l for l in pat.lobes if abs(l.angle_deg) > 1.0),
            key=lambda l: l.level_db,
        )
        assert side.level_db == pytest.approx(-13.26, abs=0.3)

    def test_linear_gradient_steers_to_30_degrees(self):
        grad = np.exp(-1j * 0.5 * K0 * PITCH * np.arange(100))
        pat = far_field(grad, K0, PITCH)
        main = max(pat.lobes, key=lambda l: l.level_db)
        assert main.angle_deg == pytest.approx(30.0, abs=0.05)

    def test_shift_theorem(self):
        # multiplying by a phase ramp translates the pattern in sin space
        rng = np.random.default_rng(5)
        aper = rng.normal(size=64) + 1j * rng.normal(size=64)
        sin_shift = 0.3
        base = far_field(aper, K0, PITCH, theta_step_deg=0.02)
        shifted = far_field(
            aper * np.exp(1j * K0 * PITCH * sin_shift * np.arange(64)),
            K0, PITCH, theta_step_deg=0.02,
        )
        # P'(u) = P(u + s): base at u corresponds to shifted at u - s
        sin_base = np.sin(np.radians(base.theta_deg))
        keep = np.abs(sin_base - sin_shift) <= math.sin(math.radians(89.0))
        target = np.degrees(np.arcsin(sin_base[keep] - sin_shift))
        vals = np.interp(target, shifted.theta_deg, shifted.intensity_db)
        ref = base.intensity_db[keep]
        sel = ref > -40.0
        assert np.max(np.abs(vals[sel] - ref[sel])) < 0.5

    def test_real_aperture_symmetric_pattern(self):
        aper = np.cos(0.4 * np.arange(32))
        pat = far_field(aper, K0, PITCH)
        half = (pat.theta_deg.size - 1) // 2
        left = pat.intensity_db[:half]
        right = pat.intensity_db[-1: -half - 1: -1]
        power_l = 10 ** (left / 10.0)
        power_r = 10 ** (right / 10.0)
        assert np.max(np.abs(power_l - power_r)) < 1e-9

    def test_minimum_aperture(self):
        with pytest.raises(ValidationError):
            far_field(np.ones(4), K0, PITCH)


class TestBeamPlan:
    def test_single_broadside_target_uniform_phase(self):
        exc = beam_plan([0.0], K0, PITCH, 32)
        assert np.allclose(exc, exc[0])

    def test_symmetric_pair_is_real(self):
        # conjugate symmetry: ramp(-s) + ramp(+s) = 2 cos(k0 a j s)
        exc = beam_plan([-25.0, 25.0], K0, PITCH, 32)
        assert np.max(np.abs(exc.imag)) < 1e-12
        s = math.sin(math.radians(25.0))
        expected = np.cos(K0 * PITCH * np.arange(32) * s)
        assert np.allclose(exc.real, expected, atol=1e-12)

    def test_unreachable_angle(self):
        with pytest.raises(ValidationError, match="unreachable"):
            beam_plan([95.0], K0, PITCH, 32)

    def test_crowded_targets_warn(self):
        with pytest.warns(RuntimeWarning, match="beamwidth"):
            beam_plan([0.0, 0.05], K0, PITCH, 16)

    def test_forty_beam_round_trip(self):
        # oracle: full round trip through far_field, the acceptance scenario
        pitch = 10e-6
        k0 = 2.4 / pitch
        targets = np.degrees(np.arcsin(np.linspace(-0.95, 0.95, 40)))
        exc = beam_plan(targets, k0, pitch, 100)
        pat = far_field(exc, k0, pitch, lobe_threshold_db=-13)
        assert len(pat.lobes) == 40
        bw_sin = 0.886 * 2 * math.pi / (k0 * pitch * 100)
        det_sin = np.sort(np.sin(np.radians([l.angle_deg for l in pat.lobes])))
        for s_t in np.sin(np.radians(targets)):
            assert np.min(np.abs(det_sin - s_t)) < bw_sin / 2
