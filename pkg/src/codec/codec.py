from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from ..errors import CorruptArchiveError, UsageError
from ..records.signal import DEFAULT_ADC_BITS, DEFAULT_SAMPLE_RATE_HZ, Signal
from ..wavelet.dwt import analyze, forward, pad_to_multiple, synthesize
from .indices import delta_decode_indices, delta_encode_indices, drop_zeros
from .quantizer import quantize
from .selection import select_largest

logger = logging.getLogger(__name__)


class CodecMode(str, Enum):
    A = "a"
    B = "b"


@dataclass(slots=True, frozen=True)
class CodecParams:
    mode: CodecMode = CodecMode.A
    delta: float = 35.0
    prd0_percent: float = 0.0
    levels: int = 4

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", CodecMode(self.mode))
        if not self.delta > 0:
            raise UsageError(f"delta must be > 0, got {self.delta}")
        if self.levels < 1:
            raise UsageError(f"levels must be >= 1, got {self.levels}")
        if not self.prd0_percent >= 0:
            raise UsageError(f"prd0 must be >= 0, got {self.prd0_percent}")

    def tolerance(self, signal_norm: float) -> float:
        """Energy threshold radius used by the selection step."""
        return self.prd0_percent * signal_norm / 100.0


def _frozen(values: np.ndarray, dtype: type) -> np.ndarray:
    arr = np.array(values, dtype=dtype).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(slots=True, frozen=True, eq=False)
class QuantizedSet:
    """Everything the decoder needs: sizes, step, and the three reordered arrays."""

    n: int
    levels: int
    delta: float
    magnitudes: np.ndarray
    signs: np.ndarray
    index_deltas: np.ndarray
    original_length: int
    mode: CodecMode = CodecMode.B

    def __post_init__(self) -> None:
        object.__setattr__(self, "magnitudes", _frozen(self.magnitudes, np.int64))
        object.__setattr__(self, "signs", _frozen(self.signs, np.uint8))
        object.__setattr__(self, "index_deltas", _frozen(self.index_deltas, np.int64))
        object.__setattr__(self, "mode", CodecMode(self.mode))
        self.validate()

    def validate(self) -> None:
        k = self.magnitudes.size
        if self.n < 1:
            raise CorruptArchiveError(f"signal length must be >= 1, got {self.n}")
        if self.levels < 1 or self.n % (1 << self.levels):
            raise CorruptArchiveError(f"length {self.n} does not fit {self.levels} decomposition levels")
        if not (np.isfinite(self.delta) and self.delta > 0):
            raise CorruptArchiveError(f"quantization step must be > 0, got {self.delta}")
        if not 1 <= self.original_length <= self.n:
            raise CorruptArchiveError(f"original length {self.original_length} outside 1..{self.n}")
        if self.signs.size != k or self.index_deltas.size != k:
            raise CorruptArchiveError(
                f"array lengths differ: {k} magnitudes, {self.signs.size} signs, {self.index_deltas.size} gaps"
            )
        if k == 0:
            return
        if self.magnitudes.min() < 1:
            raise CorruptArchiveError("stored magnitudes must be >= 1")
        if self.signs.max() > 1:
            raise CorruptArchiveError("sign flags must be 0 or 1")
        if self.index_deltas.min() < 1:
            raise CorruptArchiveError("index gaps must be >= 1")
        if int(self.index_deltas.sum()) > self.n:
            raise CorruptArchiveError(f"recovered indices run past n={self.n}")

    @property
    def k(self) -> int:
        return int(self.magnitudes.size)

    def indices(self) -> np.ndarray:
        return delta_decode_indices(self.index_deltas)

    def coefficients(self) -> np.ndarray:
        idx = self.indices()
        if idx.size and idx[-1] > self.n:
            raise CorruptArchiveError(f"recovered index {idx[-1]} exceeds n={self.n}")
        w = np.zeros(self.n, dtype=np.float64)
        signs = 2.0 * self.signs.astype(np.float64) - 1.0
        w[idx - 1] = signs * (self.delta * self.magnitudes.astype(np.float64))
        return w

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuantizedSet):
            return NotImplemented
        return (
            self.n == other.n
            and self.levels == other.levels
            and self.delta == other.delta
            and self.original_length == other.original_length
            and np.array_equal(self.magnitudes, other.magnitudes)
            and np.array_equal(self.signs, other.signs)
            and np.array_equal(self.index_deltas, other.index_deltas)
        )

    __hash__ = None  # type: ignore[assignment]


def encode(s: Signal, p: CodecParams, wavelet: str = "cdf97") -> QuantizedSet:
    padded, original_length = pad_to_multiple(s, p.levels)
    w = forward(padded, p.levels, wavelet)

    if p.mode is CodecMode.A:
        tol = p.tolerance(float(np.linalg.norm(padded.samples)))
        selected = select_largest(w, tol)
        values, indices = selected.values, selected.indices
    else:
        values, indices = w.coeffs, np.arange(1, w.n + 1, dtype=np.int64)

    q, indices = drop_zeros(quantize(values, p.delta), indices)
    deltas, order = delta_encode_indices(indices)
    q = q[order]

    if q.size == 0:
        logger.warning(
            "Every coefficient of %s quantized to zero (delta=%s); archive decodes to silence",
            s.record_id or "signal",
            p.delta,
        )
    return QuantizedSet(
        n=w.n,
        levels=p.levels,
        delta=float(p.delta),
        magnitudes=np.abs(q),
        signs=(np.sign(q) + 1) // 2,
        index_deltas=deltas,
        original_length=original_length,
        mode=p.mode,
    )


def decode(
    q: QuantizedSet,
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ,
    adc_bits: int = DEFAULT_ADC_BITS,
    record_id: str = "",
    like: Optional[Signal] = None,
    wavelet: str = "cdf97",
) -> Signal:
    samples = synthesize(q.coefficients(), q.levels, wavelet)[:q.original_length]
    if not np.isfinite(samples).all():
        raise CorruptArchiveError(f"reconstruction overflows float64 (delta={q.delta})")
    if like is not None:
        return like.with_samples(samples)
    return Signal(samples=samples, sample_rate_hz=sample_rate_hz, adc_bits=adc_bits, record_id=record_id)


def coefficient_error(s: Signal, q: QuantizedSet, wavelet: str = "cdf97") -> np.ndarray:
    """Per-coefficient difference between the analysis of `s` and what `q` restores."""
    padded, _ = pad_to_multiple(s, q.levels)
    return analyze(padded.samples, q.levels, wavelet) - q.coefficients()
