from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import SignalFormatError

DEFAULT_SAMPLE_RATE_HZ = 360.0
DEFAULT_ADC_BITS = 11


@dataclass(slots=True, frozen=True, eq=False)
class Signal:
    """A sampled record held as float64 ADC units plus its acquisition metadata."""

    samples: np.ndarray
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ
    adc_bits: int = DEFAULT_ADC_BITS
    record_id: str = ""

    def __post_init__(self) -> None:
        samples = np.array(self.samples, dtype=np.float64).reshape(-1)
        if samples.size == 0:
            raise SignalFormatError("signal has no samples")
        if not np.isfinite(samples).all():
            bad = int(np.flatnonzero(~np.isfinite(samples))[0])
            raise SignalFormatError(f"sample {bad} is not finite: {samples[bad]}")
        if not 8 <= int(self.adc_bits) <= 32:
            raise SignalFormatError(f"adc_bits must be in [8, 32], got {self.adc_bits}")
        if not self.sample_rate_hz > 0:
            raise SignalFormatError(f"sample rate must be positive, got {self.sample_rate_hz}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "adc_bits", int(self.adc_bits))
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))

    def __len__(self) -> int:
        return int(self.samples.size)

    def with_samples(self, samples: np.ndarray) -> "Signal":
        return replace(self, samples=samples)


def subtract_baseline(s: Signal, baseline: float) -> Signal:
    if baseline == 0:
        return s
    return s.with_samples(s.samples - float(baseline))


def segment(s: Signal, start: int, length: int) -> Signal:
    if start < 0 or length < 1 or start + length > len(s):
        raise SignalFormatError(
            f"segment [{start}, {start + length}) outside record of {len(s)} samples"
        )
    return s.with_samples(s.samples[start:start + length])
