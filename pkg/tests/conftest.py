from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from src.config import AppConfig
from src.records.signal import Signal

PROJECT_ROOT = Path(__file__).resolve().parents[1]


def synthetic_ecg(n: int = 8192, seed: int = 0, baseline: float = 1024.0, rate_hz: float = 360.0) -> Signal:
    """Beat train of Gaussian bumps (P, QRS, T) on a baseline plus mild noise, in integer ADC units."""
    rng = np.random.default_rng(seed)
    t = np.arange(n) / rate_hz
    x = np.zeros(n)
    beat = 0.0
    while beat < t[-1] + 1.0:
        for offset, width, height in ((-0.2, 0.025, 15.0), (0.0, 0.01, 180.0), (0.03, 0.012, -40.0), (0.3, 0.05, 35.0)):
            x += height * np.exp(-0.5 * ((t - beat - offset) / width) ** 2)
        beat += 0.8 + 0.05 * rng.standard_normal()
    x += 2.0 * rng.standard_normal(n) + 5.0 * np.sin(2 * np.pi * 0.3 * t)
    return Signal(samples=np.round(x + baseline), sample_rate_hz=rate_hz, record_id=f"syn{seed}")


def ar1(n: int, seed: int, phi: float = 0.95, scale: float = 10.0) -> Signal:
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(n) * scale
    x = np.empty(n)
    x[0] = noise[0]
    for i in range(1, n):
        x[i] = phi * x[i - 1] + noise[i]
    return Signal(samples=x, record_id=f"ar{seed}")


@pytest.fixture
def ecg() -> Signal:
    return synthetic_ecg()


@pytest.fixture
def ecg_corpus() -> list[Signal]:
    return [synthetic_ecg(4096, seed=seed) for seed in range(3)]


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def mitbih_dir() -> Path:
    data_dir = AppConfig.load(PROJECT_ROOT).data_dir
    if data_dir is None or not (data_dir / "100.dat").exists():
        pytest.skip("MIT-BIH records not found; set WECG_DATA_DIR to a directory holding 100.dat etc.")
    return data_dir
