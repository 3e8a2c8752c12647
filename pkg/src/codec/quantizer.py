from __future__ import annotations

import numpy as np


def quantize(values: np.ndarray, delta: float) -> np.ndarray:
    """Mid-tread uniform quantizer: floor(c / delta + 1/2)."""
    if not delta > 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    return np.floor(np.asarray(values, dtype=np.float64) / delta + 0.5).astype(np.int64)


def dequantize(levels: np.ndarray, delta: float) -> np.ndarray:
    return np.asarray(levels, dtype=np.float64) * delta
