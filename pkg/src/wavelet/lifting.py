from __future__ import annotations

from typing import Protocol

import numpy as np

# CDF 9/7 lifting factorization (predict, update, predict, update, scale).
ALPHA = -1.5861343420693648
BETA = -0.0529801185718856
GAMMA = 0.8829110755411875
DELTA = 0.4435068520511142
ZETA = 1.1496043988602418


class Wavelet(Protocol):
    name: str

    def analyze_level(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        ...

    def synthesize_level(self, approx: np.ndarray, detail: np.ndarray) -> np.ndarray:
        ...


def _right_neighbours(s: np.ndarray) -> np.ndarray:
    # x[N] mirrors to x[N-2]: the even sample past the end is the last even one.
    return np.concatenate([s[1:], s[-1:]])


def _left_neighbours(d: np.ndarray) -> np.ndarray:
    # x[-1] mirrors to x[1]: the odd sample before the start is the first odd one.
    return np.concatenate([d[:1], d[:-1]])


def _predict(s: np.ndarray, d: np.ndarray, coeff: float) -> None:
    d += coeff * (s + _right_neighbours(s))


def _update(s: np.ndarray, d: np.ndarray, coeff: float) -> None:
    s += coeff * (_left_neighbours(d) + d)


class CDF97:
    """Biorthogonal CDF 9/7 with whole-point symmetric extension at both ends."""

    name = "cdf97"

    def analyze_level(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if x.size % 2:
            raise ValueError(f"lifting needs an even length, got {x.size}")
        s = x[0::2].astype(np.float64, copy=True)
        d = x[1::2].astype(np.float64, copy=True)
        _predict(s, d, ALPHA)
        _update(s, d, BETA)
        _predict(s, d, GAMMA)
        _update(s, d, DELTA)
        s *= ZETA
        d /= ZETA
        return s, d

    def synthesize_level(self, approx: np.ndarray, detail: np.ndarray) -> np.ndarray:
        if approx.size != detail.size:
            raise ValueError("approximation and detail halves differ in length")
        s = approx.astype(np.float64, copy=True) / ZETA
        d = detail.astype(np.float64, copy=True) * ZETA
        _update(s, d, -DELTA)
        _predict(s, d, -GAMMA)
        _update(s, d, -BETA)
        _predict(s, d, -ALPHA)
        x = np.empty(s.size * 2, dtype=np.float64)
        x[0::2] = s
        x[1::2] = d
        return x


WAVELETS: dict[str, Wavelet] = {CDF97.name: CDF97()}


def get_wavelet(name: str) -> Wavelet:
    try:
        return WAVELETS[name]
    except KeyError:
        raise ValueError(f"unknown wavelet {name!r}; available: {', '.join(sorted(WAVELETS))}") from None
