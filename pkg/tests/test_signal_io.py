from __future__ import annotations

import io

import numpy as np
import pytest

from src.errors import ShortReadError, SignalFormatError
from src.records.signal import Signal, segment, subtract_baseline
from src.records.signal_io import read_format212, read_record, read_text, write_format212, write_text


class TestFormat212:
    @pytest.mark.parametrize(
        "data, expected",
        [
            (bytes([0xE8, 0x03, 0x00]), 1000.0),
            (bytes([0x00, 0x00, 0x00]), 0.0),
            (bytes([0xFF, 0x0F, 0xFF]), -1.0),
        ],
    )
    def test_first_sample(self, data, expected):
        s = read_format212(data, channel=0, n_samples=1)
        assert s.samples[0] == expected

    def test_second_value_uses_high_nibble(self):
        # s0 = 0x123, s1 = 0x456
        data = bytes([0x23, 0x41, 0x56])
        s = read_format212(data, channel=1, n_samples=1)
        assert s.samples[0] == 0x456

    def test_channels_are_deinterleaved(self):
        values = np.array([1, -1, 2, -2, 3, -3, 2047, -2048])
        data = write_format212(values)
        ch0 = read_format212(data, channel=0)
        ch1 = read_format212(data, channel=1)
        np.testing.assert_array_equal(ch0.samples, [1, 2, 3, 2047])
        np.testing.assert_array_equal(ch1.samples, [-1, -2, -3, -2048])

    def test_repack_is_identity(self, rng):
        values = rng.integers(-2048, 2048, size=2 * 501)
        data = write_format212(values)
        assert len(data) == values.size * 3 // 2
        interleaved = np.empty(values.size)
        interleaved[0::2] = read_format212(data, channel=0).samples
        interleaved[1::2] = read_format212(data, channel=1).samples
        np.testing.assert_array_equal(interleaved, values)
        assert write_format212(interleaved.astype(np.int64)) == data

    def test_single_channel_layout(self):
        data = write_format212(np.array([5, 6, 7]))
        s = read_format212(data, channel=0, n_channels=1)
        np.testing.assert_array_equal(s.samples, [5, 6, 7])

    def test_short_read(self):
        with pytest.raises(ShortReadError, match="short read"):
            read_format212(bytes(5), channel=0, n_samples=2)

    def test_channel_out_of_range(self):
        with pytest.raises(SignalFormatError):
            read_format212(bytes(3), channel=2, n_samples=1)

    def test_write_rejects_13_bit_values(self):
        with pytest.raises(SignalFormatError):
            write_format212(np.array([4000]))


class TestText:
    def test_plain_samples(self):
        s = read_text("1\n2\n3\n")
        np.testing.assert_array_equal(s.samples, [1, 2, 3])
        assert s.sample_rate_hz == 360.0
        assert s.adc_bits == 11

    def test_header(self):
        s = read_text("# fs=250\n# adc_bits=12\n# record=abc\n0\n")
        np.testing.assert_array_equal(s.samples, [0])
        assert (s.sample_rate_hz, s.adc_bits, s.record_id) == (250.0, 12, "abc")

    def test_bad_line_reports_line_number(self):
        with pytest.raises(SignalFormatError, match="line 1") as info:
            read_text("abc\n")
        assert info.value.line == 1

    def test_bad_line_after_header(self):
        with pytest.raises(SignalFormatError) as info:
            read_text("# fs=360\n1\nx\n")
        assert info.value.line == 3

    @pytest.mark.parametrize("text, line", [("1\nnan\n3\n", 2), ("1\n2\n-inf\n", 3), ("# fs=360\ninf\n", 2)])
    def test_rejects_non_finite(self, text, line):
        with pytest.raises(SignalFormatError, match="non-finite") as info:
            read_text(text)
        assert info.value.line == line

    def test_empty_input(self):
        with pytest.raises(SignalFormatError):
            read_text("# only a comment\n")

    def test_stream_input(self):
        s = read_text(io.StringIO("4\n5\n"))
        np.testing.assert_array_equal(s.samples, [4, 5])

    def test_write_then_read_is_exact(self, rng):
        original = Signal(samples=rng.standard_normal(50) * 1e3, sample_rate_hz=500.0, adc_bits=16, record_id="r1")
        back = read_text(write_text(original))
        np.testing.assert_array_equal(back.samples, original.samples)
        assert (back.sample_rate_hz, back.adc_bits, back.record_id) == (500.0, 16, "r1")


class TestReadRecord:
    def test_dat_suffix_reads_format212(self, tmp_path):
        path = tmp_path / "100.dat"
        path.write_bytes(write_format212(np.array([10, 20, 30, 40])))
        s = read_record(path, channel=1)
        np.testing.assert_array_equal(s.samples, [20, 40])
        assert s.record_id == "100"

    def test_text_with_sample_limit(self, tmp_path):
        path = tmp_path / "rec.txt"
        path.write_text("1\n2\n3\n", encoding="utf-8")
        s = read_record(path, n_samples=2)
        np.testing.assert_array_equal(s.samples, [1, 2])
        assert s.record_id == "rec"

    def test_missing_file(self, tmp_path):
        with pytest.raises(SignalFormatError):
            read_record(tmp_path / "nope.txt")


class TestSignal:
    def test_rejects_empty(self):
        with pytest.raises(SignalFormatError):
            Signal(samples=np.zeros(0))

    @pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(SignalFormatError, match="sample 1 is not finite"):
            Signal(samples=[1.0, bad, 2.0])

    @pytest.mark.parametrize("bits", [7, 33])
    def test_rejects_adc_bits(self, bits):
        with pytest.raises(SignalFormatError):
            Signal(samples=np.zeros(3), adc_bits=bits)

    def test_samples_are_read_only(self):
        s = Signal(samples=[1.0, 2.0])
        with pytest.raises(ValueError):
            s.samples[0] = 3.0

    @pytest.mark.parametrize(
        "samples, baseline, expected",
        [
            ([1024, 1025], 1024, [0, 1]),
            ([995], 1024, [-29]),
            ([3, 4], 0, [3, 4]),
        ],
    )
    def test_subtract_baseline(self, samples, baseline, expected):
        s = Signal(samples=samples, record_id="x")
        out = subtract_baseline(s, baseline)
        np.testing.assert_array_equal(out.samples, expected)
        assert out.record_id == "x"

    def test_baseline_round_trip_is_exact(self, ecg):
        back = subtract_baseline(subtract_baseline(ecg, 1024.0), -1024.0)
        np.testing.assert_array_equal(back.samples, ecg.samples)

    def test_segment(self, ecg):
        part = segment(ecg, 100, 50)
        np.testing.assert_array_equal(part.samples, ecg.samples[100:150])
        with pytest.raises(SignalFormatError):
            segment(ecg, len(ecg) - 10, 20)
