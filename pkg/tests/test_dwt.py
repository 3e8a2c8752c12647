from __future__ import annotations

import numpy as np
import pytest

from src.errors import WaveletLayoutError
from src.records.signal import Signal
from src.wavelet.dwt import WaveletCoeffs, analyze, band_layout, forward, inverse, pad_to_multiple, synthesize
from src.wavelet.lifting import CDF97, get_wavelet


def _round_trip_error(x: np.ndarray, levels: int) -> float:
    back = inverse(forward(Signal(samples=x), levels)).samples
    return float(np.max(np.abs(back - x)))


class TestPerfectReconstruction:
    @pytest.mark.parametrize(
        "n, levels",
        [(16, lv) for lv in (1, 2, 3, 4)] + [(n, lv) for n in (256, 4096) for lv in (1, 2, 3, 4, 5)],
    )
    def test_random_signals(self, n, levels, rng):
        for _ in range(72):
            x = rng.standard_normal(n) * rng.uniform(0.1, 1e3)
            assert _round_trip_error(x, levels) <= 1e-9 * np.max(np.abs(x))

    def test_mitbih_length(self, rng):
        x = np.round(rng.standard_normal(650000) * 100 + 1024)
        assert _round_trip_error(x, 4) <= 1e-9 * np.max(np.abs(x))

    def test_ecg(self, ecg):
        back = inverse(forward(ecg, 4), like=ecg)
        np.testing.assert_allclose(back.samples, ecg.samples, rtol=0, atol=1e-9 * np.max(np.abs(ecg.samples)))
        assert back.record_id == ecg.record_id


class TestLayout:
    def test_band_lengths_for_mitbih_record(self):
        bounds = band_layout(650000, 4)
        assert [length for _, length in bounds] == [40625, 40625, 81250, 162500, 325000]
        assert [offset for offset, _ in bounds] == [0, 40625, 81250, 162500, 325000]

    def test_length_must_divide(self):
        with pytest.raises(WaveletLayoutError):
            band_layout(100, 3)

    def test_forward_rejects_unpadded_signal(self):
        with pytest.raises(WaveletLayoutError):
            forward(Signal(samples=np.zeros(100)), 3)

    def test_coeff_views(self, ecg):
        w = forward(ecg, 3)
        assert w.approximation.size == len(ecg) // 8
        assert w.detail(3).size == len(ecg) // 8
        assert w.detail(1).size == len(ecg) // 2
        np.testing.assert_array_equal(w.detail(1), w.coeffs[len(ecg) // 2:])
        with pytest.raises(WaveletLayoutError):
            w.detail(4)

    def test_from_layout_checks_bounds(self):
        with pytest.raises(WaveletLayoutError):
            WaveletCoeffs(coeffs=np.zeros(8), levels=1, band_bounds=((0, 4), (4, 3)))
        w = WaveletCoeffs.from_layout(np.arange(8.0), 2)
        assert w.band_bounds == ((0, 2), (2, 2), (4, 4))


class TestTransformProperties:
    def test_constant_signal_has_no_detail(self):
        w = forward(Signal(samples=np.full(64, 7.0)), 3)
        for level in (1, 2, 3):
            assert np.max(np.abs(w.detail(level))) < 1e-9

    def test_linear_ramp_details_vanish_away_from_edges(self):
        x = np.arange(256, dtype=np.float64)
        s, d = CDF97().analyze_level(x)
        assert np.max(np.abs(d[2:-2])) < 1e-9

    @pytest.mark.parametrize("levels", [1, 2, 3, 4])
    @pytest.mark.parametrize("degree", [0, 1, 2, 3])
    def test_details_annihilate_cubics(self, levels, degree):
        t = np.arange(1024, dtype=np.float64) - 400.0
        x = t ** degree + 3.0 * t
        w = forward(Signal(samples=x), levels)
        for level in range(1, levels + 1):
            band = w.detail(level)
            interior = band[8:-8]
            assert np.max(np.abs(interior)) <= 1e-6 * np.linalg.norm(band)

    def test_approximation_gain_per_level(self):
        w = forward(Signal(samples=np.ones(64)), 2)
        np.testing.assert_allclose(w.approximation, 2.0, atol=1e-12)

    def test_linearity(self, rng):
        a, b = rng.standard_normal(128), rng.standard_normal(128)
        lhs = analyze(2.5 * a - 3.0 * b, 3)
        rhs = 2.5 * analyze(a, 3) - 3.0 * analyze(b, 3)
        np.testing.assert_allclose(lhs, rhs, atol=1e-10)

    def test_synthesize_inverts_analyze(self, rng):
        x = rng.standard_normal(64)
        np.testing.assert_allclose(synthesize(analyze(x, 4), 4), x, atol=1e-12)

    def test_single_level_rejects_odd_length(self):
        with pytest.raises(ValueError):
            CDF97().analyze_level(np.zeros(5))

    def test_unknown_wavelet(self):
        with pytest.raises(ValueError, match="cdf97"):
            get_wavelet("db5")


class TestPadding:
    def test_aligned_signal_untouched(self):
        s = Signal(samples=np.arange(32.0))
        padded, n = pad_to_multiple(s, 4)
        assert padded is s and n == 32

    def test_reflect_tail(self):
        s = Signal(samples=np.arange(1.0, 6.0))
        padded, n = pad_to_multiple(s, 3)
        assert n == 5
        np.testing.assert_array_equal(padded.samples, [1, 2, 3, 4, 5, 4, 3, 2])

    def test_single_sample(self):
        padded, n = pad_to_multiple(Signal(samples=[3.0]), 2)
        np.testing.assert_array_equal(padded.samples, [3, 3, 3, 3])
        assert n == 1
