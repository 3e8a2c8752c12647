from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import MetricError
from .records.signal import DEFAULT_ADC_BITS, Signal

logger = logging.getLogger(__name__)

SignalLike = Union[Signal, np.ndarray, Sequence[float]]

CSV_COLUMNS = (
    "record",
    "prd_local_mean",
    "prd_local_std",
    "prd",
    "prdn",
    "cr",
    "qs",
    "qstar",
)


def _samples(x: SignalLike) -> np.ndarray:
    if isinstance(x, Signal):
        return x.samples
    return np.asarray(x, dtype=np.float64).reshape(-1)


def _pair(f: SignalLike, fr: SignalLike) -> tuple[np.ndarray, np.ndarray]:
    a, b = _samples(f), _samples(fr)
    if a.shape != b.shape:
        raise MetricError(f"signals differ in length: {a.size} vs {b.size}")
    return a, b


def prd(f: SignalLike, fr: SignalLike) -> float:
    a, b = _pair(f, fr)
    norm = float(np.linalg.norm(a))
    if norm == 0:
        raise MetricError("PRD is undefined for a zero-norm reference")
    return 100.0 * float(np.linalg.norm(a - b)) / norm


def prdn(f: SignalLike, fr: SignalLike) -> float:
    a, b = _pair(f, fr)
    norm = float(np.linalg.norm(a - a.mean()))
    if norm == 0:
        raise MetricError("PRDN is undefined for a constant reference")
    return 100.0 * float(np.linalg.norm(a - b)) / norm


def uncompressed_bytes(n_samples: int, adc_bits: int = DEFAULT_ADC_BITS) -> int:
    return math.ceil(n_samples * adc_bits / 8)


def compression_ratio(n_samples: int, adc_bits: int, archive_bytes: int) -> float:
    if archive_bytes <= 0:
        raise MetricError(f"archive size must be positive, got {archive_bytes}")
    return uncompressed_bytes(n_samples, adc_bits) / archive_bytes


def quality_score(cr: float, prd_percent: float) -> float:
    if not prd_percent > 0:
        raise MetricError(f"QS needs a positive PRD, got {prd_percent}")
    return cr / prd_percent


def gain(cr1: float, cr2: float) -> float:
    """Relative gain of ratio 1 over ratio 2 in percent (works for QS as well)."""
    if not cr2 > 0:
        raise MetricError(f"reference ratio must be positive, got {cr2}")
    return 100.0 * (cr1 - cr2) / cr2


def summarize(values: Sequence[float]) -> tuple[float, float]:
    """Mean and sample standard deviation (1/(Q-1)); std is nan below two values."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        return math.nan, math.nan
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if arr.size >= 2 else math.nan
    return mean, std


class LocalPrd(NamedTuple):
    values: np.ndarray
    mean: float
    std: float
    q_star: int
    excluded: tuple[int, ...]


def local_prd(f: SignalLike, fr: SignalLike, segment_length: int) -> LocalPrd:
    """PRD over disjoint consecutive segments; the trailing partial segment is ignored.

    Segments whose reference has zero norm come back as nan and are left out
    of the mean, std and worst-segment search. `q_star` is 1-based, 0 when no
    segment qualifies.
    """
    if segment_length < 1:
        raise MetricError(f"segment length must be >= 1, got {segment_length}")
    a, b = _pair(f, fr)
    q = a.size // segment_length
    if q == 0:
        return LocalPrd(np.zeros(0), math.nan, math.nan, 0, ())

    ref = a[:q * segment_length].reshape(q, segment_length)
    err = (a - b)[:q * segment_length].reshape(q, segment_length)
    ref_norm = np.linalg.norm(ref, axis=1)
    err_norm = np.linalg.norm(err, axis=1)

    values = np.full(q, math.nan)
    valid = ref_norm > 0
    values[valid] = 100.0 * err_norm[valid] / ref_norm[valid]
    excluded = tuple(int(i) + 1 for i in np.flatnonzero(~valid))
    if excluded:
        logger.warning("Local PRD excludes %s zero-norm segment(s): %s", len(excluded), list(excluded[:10]))
    if not valid.any():
        return LocalPrd(values, math.nan, math.nan, 0, excluded)

    mean, std = summarize(values[valid])
    q_star = int(np.nanargmax(values)) + 1
    return LocalPrd(values, mean, std, q_star, excluded)


def worst_segment(f: SignalLike, fr: SignalLike, segment_length: int) -> tuple[int, float]:
    local = local_prd(f, fr, segment_length)
    if local.q_star == 0:
        return 0, math.nan
    return local.q_star, float(local.values[local.q_star - 1])


@dataclass(slots=True)
class QualityReport:
    record_id: str
    prd: float
    prdn: float
    cr: float
    qs: float
    local_mean: float
    local_std: float
    worst_segment_index: int
    worst_segment_prd: float
    segment_length: int
    segment_count: int
    archive_bytes: int = 0
    prd_baseline: Optional[float] = None

    @classmethod
    def from_signals(
        cls,
        f: Signal,
        fr: SignalLike,
        archive_bytes: int,
        segment_length: int = 2000,
        baseline: Optional[float] = None,
    ) -> "QualityReport":
        total_prd = prd(f, fr)
        cr = compression_ratio(len(f), f.adc_bits, archive_bytes)
        local = local_prd(f, fr, segment_length)
        worst = float(local.values[local.q_star - 1]) if local.q_star else math.nan
        prd_b = None
        if baseline is not None:
            prd_b = prd(_samples(f) - baseline, _samples(fr) - baseline)
        return cls(
            record_id=f.record_id,
            prd=total_prd,
            prdn=prdn(f, fr),
            cr=cr,
            qs=quality_score(cr, total_prd) if total_prd > 0 else math.inf,
            local_mean=local.mean,
            local_std=local.std,
            worst_segment_index=local.q_star,
            worst_segment_prd=worst,
            segment_length=segment_length,
            segment_count=int(local.values.size),
            archive_bytes=archive_bytes,
            prd_baseline=prd_b,
        )

    def to_key_value(self) -> str:
        pairs = [
            ("record", self.record_id),
            ("prd", f"{self.prd:.6f}"),
            ("prdn", f"{self.prdn:.6f}"),
            ("cr", f"{self.cr:.6f}"),
            ("qs", f"{self.qs:.6f}"),
            ("prd_local_mean", f"{self.local_mean:.6f}"),
            ("prd_local_std", f"{self.local_std:.6f}"),
            ("qstar", str(self.worst_segment_index)),
            ("qstar_prd", f"{self.worst_segment_prd:.6f}"),
            ("segment_length", str(self.segment_length)),
            ("segment_count", str(self.segment_count)),
            ("archive_bytes", str(self.archive_bytes)),
        ]
        if self.prd_baseline is not None:
            pairs.append(("prd_b", f"{self.prd_baseline:.6f}"))
        return "\n".join(f"{key}={value}" for key, value in pairs)

    def csv_row(self) -> list[str]:
        return [
            self.record_id,
            f"{self.local_mean:.4f}",
            f"{self.local_std:.4f}",
            f"{self.prd:.4f}",
            f"{self.prdn:.4f}",
            f"{self.cr:.4f}",
            f"{self.qs:.4f}",
            str(self.worst_segment_index),
        ]
