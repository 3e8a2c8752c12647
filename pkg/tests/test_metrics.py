from __future__ import annotations

import math

import numpy as np
import pytest

from src.errors import MetricError
from src.metrics import (
    CSV_COLUMNS,
    QualityReport,
    compression_ratio,
    gain,
    local_prd,
    prd,
    prdn,
    quality_score,
    summarize,
    uncompressed_bytes,
    worst_segment,
)
from src.records.signal import Signal


class TestPrd:
    def test_identical(self, ecg):
        assert prd(ecg, ecg) == 0.0
        assert prdn(ecg, ecg) == 0.0

    def test_hand_values(self):
        assert prd([3.0, 4.0], [3.0, 3.0]) == pytest.approx(20.0)
        assert prdn([0.0, 2.0], [0.0, 0.0]) == pytest.approx(100 * 2 / math.sqrt(2))

    def test_scale_invariant(self, ecg, rng):
        fr = ecg.samples + rng.standard_normal(len(ecg))
        base = prd(ecg, fr)
        for a in (-3.0, 1e-3, 250.0):
            assert prd(a * ecg.samples, a * fr) == pytest.approx(base, rel=1e-12)

    def test_prdn_ratio(self, ecg, rng):
        f = ecg.samples
        fr = f + rng.standard_normal(f.size)
        ratio = np.linalg.norm(f) / np.linalg.norm(f - f.mean())
        assert prdn(f, fr) / prd(f, fr) == pytest.approx(ratio, rel=1e-12)
        assert prdn(f, fr) > prd(f, fr)

    def test_zero_reference(self):
        with pytest.raises(MetricError):
            prd([0.0, 0.0], [1.0, 0.0])

    def test_constant_reference(self):
        with pytest.raises(MetricError):
            prdn([2.0, 2.0], [1.0, 0.0])

    def test_length_mismatch(self):
        with pytest.raises(MetricError):
            prd([1.0, 2.0], [1.0])


class TestRates:
    def test_uncompressed_size(self):
        assert uncompressed_bytes(650000, 11) == 893750
        assert uncompressed_bytes(3, 11) == 5

    @pytest.mark.parametrize("archive, expected", [(893750, 1.0), (446875, 2.0)])
    def test_compression_ratio(self, archive, expected):
        assert compression_ratio(650000, 11, archive) == pytest.approx(expected)

    def test_non_positive_archive(self):
        with pytest.raises(MetricError):
            compression_ratio(10, 11, 0)

    @pytest.mark.parametrize(
        "cr, prd_value, expected",
        [(28.65, 0.52, 55.096), (7.0, 1.0, 7.0), (0.0, 0.5, 0.0)],
    )
    def test_quality_score(self, cr, prd_value, expected):
        assert quality_score(cr, prd_value) == pytest.approx(expected, abs=1e-3)

    def test_quality_score_needs_positive_prd(self):
        with pytest.raises(MetricError):
            quality_score(1.0, 0.0)

    @pytest.mark.parametrize("cr1, cr2, expected", [(20.0, 20.0, 0.0), (24.64, 20.0, 23.2), (62.48, 38.46, 62.45)])
    def test_gain(self, cr1, cr2, expected):
        assert gain(cr1, cr2) == pytest.approx(expected, abs=0.01)


class TestLocalPrd:
    def test_hand_example(self):
        local = local_prd([3.0, 4.0, 3.0, 4.0], [3.0, 3.0, 3.0, 4.0], 2)
        np.testing.assert_allclose(local.values, [20.0, 0.0])
        assert local.mean == pytest.approx(10.0)
        assert local.std == pytest.approx(math.sqrt(200.0))
        assert local.q_star == 1

    def test_identical_signals(self, ecg):
        local = local_prd(ecg, ecg, 2000)
        assert local.mean == 0.0 and local.std == 0.0
        assert local.q_star == 1

    def test_segment_count_ignores_tail(self):
        f = np.ones(650000)
        assert local_prd(f, f, 2000).values.size == 325
        assert local_prd(f[:4500], f[:4500], 2000).values.size == 2

    def test_ties_pick_first_segment(self):
        local = local_prd([1.0, 1.0, 1.0], [0.0, 0.0, 0.0], 1)
        assert local.q_star == 1

    def test_zero_norm_segments_are_excluded(self, caplog):
        local = local_prd([0.0, 0.0, 3.0, 4.0, 1.0, 1.0], [0.0, 1.0, 3.0, 3.0, 1.0, 1.0], 2)
        assert math.isnan(local.values[0])
        assert local.excluded == (1,)
        assert local.q_star == 2
        assert local.mean == pytest.approx(10.0)
        assert "excludes" in caplog.text

    def test_single_segment_std_is_nan(self):
        local = local_prd([1.0, 2.0], [1.0, 1.0], 2)
        assert math.isnan(local.std)

    def test_worst_segment(self):
        assert worst_segment([3.0, 4.0, 3.0, 4.0], [3.0, 4.0, 3.0, 3.0], 2) == (2, pytest.approx(20.0))

    def test_short_signal(self):
        assert worst_segment([1.0], [1.0], 5)[0] == 0

    def test_summarize(self):
        mean, std = summarize([1.0, 2.0, 3.0])
        assert (mean, std) == (2.0, 1.0)
        assert all(math.isnan(v) for v in summarize([]))


class TestQualityReport:
    def test_from_signals(self, ecg, rng):
        fr = ecg.samples + rng.standard_normal(len(ecg))
        report = QualityReport.from_signals(ecg, fr, archive_bytes=1000, segment_length=2000)
        assert report.segment_count == len(ecg) // 2000
        assert report.qs * report.prd == pytest.approx(report.cr, rel=1e-9)
        assert report.worst_segment_prd >= np.nanmax(local_prd(ecg, fr, 2000).values) - 1e-12
        assert 1 <= report.worst_segment_index <= report.segment_count
        assert report.prd_baseline is None
        assert report.record_id == ecg.record_id

    def test_baseline_prd(self, ecg, rng):
        fr = ecg.samples + rng.standard_normal(len(ecg))
        report = QualityReport.from_signals(ecg, fr, archive_bytes=1000, baseline=1024.0)
        assert report.prd_baseline == pytest.approx(prd(ecg.samples - 1024.0, fr - 1024.0))
        assert report.prd_baseline > report.prd

    def test_lossless_report(self, ecg):
        report = QualityReport.from_signals(ecg, ecg.samples, archive_bytes=500)
        assert report.prd == 0.0
        assert math.isinf(report.qs)

    def test_output_formats(self):
        f = Signal(samples=[3.0, 4.0, 3.0, 4.0], record_id="100")
        report = QualityReport.from_signals(f, [3.0, 3.0, 3.0, 4.0], archive_bytes=2, segment_length=2)
        row = report.csv_row()
        assert len(row) == len(CSV_COLUMNS)
        assert row[0] == "100" and row[-1] == "1"
        lines = dict(line.split("=", 1) for line in report.to_key_value().splitlines())
        assert lines["qstar"] == "1"
        assert float(lines["cr"]) == pytest.approx(uncompressed_bytes(4, 11) / 2)
