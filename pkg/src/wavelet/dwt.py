from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import WaveletLayoutError
from ..records.signal import Signal
from .lifting import get_wavelet

Band = tuple[int, int]


def band_layout(n: int, levels: int) -> tuple[Band, ...]:
    """(offset, length) per band, coarse first: approx_lv, detail_lv, ..., detail_1."""
    if levels < 1:
        raise WaveletLayoutError(f"levels must be >= 1, got {levels}")
    if n < 1 or n % (1 << levels):
        raise WaveletLayoutError(
            f"length {n} is not divisible by 2**{levels}; pad the signal with pad_to_multiple first"
        )
    coarse = n >> levels
    bounds = [(0, coarse), (coarse, coarse)]
    for level in range(levels - 1, 0, -1):
        length = n >> level
        bounds.append((length, length))
    return tuple(bounds)


@dataclass(slots=True, frozen=True, eq=False)
class WaveletCoeffs:
    coeffs: np.ndarray
    levels: int
    band_bounds: tuple[Band, ...]

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "coeffs", coeffs)
        bounds = tuple((int(o), int(length)) for o, length in self.band_bounds)
        object.__setattr__(self, "band_bounds", bounds)
        if self.levels < 1:
            raise WaveletLayoutError(f"levels must be >= 1, got {self.levels}")
        if len(bounds) != self.levels + 1:
            raise WaveletLayoutError(f"expected {self.levels + 1} bands, got {len(bounds)}")
        cursor = 0
        for offset, length in bounds:
            if offset != cursor or length < 1:
                raise WaveletLayoutError(f"band ({offset}, {length}) breaks the contiguous layout")
            cursor += length
        if cursor != coeffs.size:
            raise WaveletLayoutError(f"band lengths sum to {cursor}, coefficient vector has {coeffs.size}")

    @classmethod
    def from_layout(cls, coeffs: np.ndarray, levels: int) -> "WaveletCoeffs":
        coeffs = np.asarray(coeffs, dtype=np.float64).reshape(-1)
        return cls(coeffs=coeffs, levels=levels, band_bounds=band_layout(coeffs.size, levels))

    @property
    def n(self) -> int:
        return int(self.coeffs.size)

    def band(self, i: int) -> np.ndarray:
        offset, length = self.band_bounds[i]
        return self.coeffs[offset:offset + length]

    @property
    def approximation(self) -> np.ndarray:
        return self.band(0)

    def detail(self, level: int) -> np.ndarray:
        """Detail band at `level`, 1 being the finest."""
        if not 1 <= level <= self.levels:
            raise WaveletLayoutError(f"detail level {level} outside 1..{self.levels}")
        return self.band(self.levels - level + 1)


def analyze(x: np.ndarray, levels: int, wavelet: str = "cdf97") -> np.ndarray:
    """Flat multi-level analysis of an array whose length is divisible by 2**levels."""
    kernel = get_wavelet(wavelet)
    out = np.array(x, dtype=np.float64).reshape(-1)
    band_layout(out.size, levels)
    length = out.size
    for _ in range(levels):
        s, d = kernel.analyze_level(out[:length])
        half = length // 2
        out[:half] = s
        out[half:length] = d
        length = half
    return out


def synthesize(coeffs: np.ndarray, levels: int, wavelet: str = "cdf97") -> np.ndarray:
    kernel = get_wavelet(wavelet)
    out = np.array(coeffs, dtype=np.float64).reshape(-1)
    band_layout(out.size, levels)
    length = out.size >> levels
    for _ in range(levels):
        out[:2 * length] = kernel.synthesize_level(out[:length], out[length:2 * length])
        length *= 2
    return out


def forward(s: Signal, lv: int, wavelet: str = "cdf97") -> WaveletCoeffs:
    return WaveletCoeffs(
        coeffs=analyze(s.samples, lv, wavelet),
        levels=lv,
        band_bounds=band_layout(len(s), lv),
    )


def inverse(w: WaveletCoeffs, like: Optional[Signal] = None, wavelet: str = "cdf97") -> Signal:
    if w.band_bounds != band_layout(w.n, w.levels):
        raise WaveletLayoutError(f"band layout {w.band_bounds} does not match {w.n} samples at {w.levels} levels")
    samples = synthesize(w.coeffs, w.levels, wavelet)
    if like is None:
        return Signal(samples=samples)
    return like.with_samples(samples)


def pad_to_multiple(s: Signal, lv: int) -> tuple[Signal, int]:
    """Tail-pad by whole-point reflection so the length divides 2**lv."""
    n = len(s)
    block = 1 << lv
    extra = (-n) % block
    if extra == 0:
        return s, n
    mode = "edge" if n == 1 else "reflect"
    return s.with_samples(np.pad(s.samples, (0, extra), mode=mode)), n
