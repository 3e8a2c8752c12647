from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Iterable, Optional, TextIO, Union

import numpy as np

from ..errors import ShortReadError, SignalFormatError
from .signal import DEFAULT_ADC_BITS, DEFAULT_SAMPLE_RATE_HZ, Signal

logger = logging.getLogger(__name__)

MIT_BIH_CHANNELS = 2

_RATE_KEYS = ("fs", "sample_rate", "sample_rate_hz")
_BITS_KEYS = ("adc_bits", "bits")
_RECORD_KEYS = ("record", "record_id")


def _format212_bytes(n_values: int) -> int:
    return math.ceil(n_values * 3 / 2)


def read_format212(
    data: bytes,
    channel: int = 0,
    n_samples: Optional[int] = None,
    n_channels: int = MIT_BIH_CHANNELS,
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ,
    adc_bits: int = DEFAULT_ADC_BITS,
    record_id: str = "",
) -> Signal:
    """Decode one channel of a PhysioNet format-212 byte stream.

    Each 3-byte group packs two 12-bit two's-complement values; consecutive
    values cycle through the `n_channels` interleaved signals.
    """
    if n_channels < 1:
        raise SignalFormatError(f"n_channels must be >= 1, got {n_channels}")
    if not 0 <= channel < n_channels:
        raise SignalFormatError(f"channel {channel} out of range for {n_channels} channel(s)")
    if n_samples is None:
        n_samples = (len(data) * 2 // 3) // n_channels
    if n_samples < 1:
        raise ShortReadError()

    n_values = n_samples * n_channels
    n_bytes = _format212_bytes(n_values)
    if len(data) < n_bytes:
        raise ShortReadError(f"short read: need {n_bytes} bytes, got {len(data)}")

    raw = np.frombuffer(data, dtype=np.uint8, count=n_bytes).astype(np.int32)
    if n_bytes % 3:
        raw = np.concatenate([raw, np.zeros(3 - n_bytes % 3, dtype=np.int32)])
    groups = raw.reshape(-1, 3)

    values = np.empty(groups.shape[0] * 2, dtype=np.int32)
    values[0::2] = groups[:, 0] | ((groups[:, 1] & 0x0F) << 8)
    values[1::2] = groups[:, 2] | ((groups[:, 1] & 0xF0) << 4)
    values[values >= 2048] -= 4096

    picked = values[:n_values].reshape(n_samples, n_channels)[:, channel]
    return Signal(
        samples=picked.astype(np.float64),
        sample_rate_hz=sample_rate_hz,
        adc_bits=adc_bits,
        record_id=record_id,
    )


def write_format212(values: np.ndarray) -> bytes:
    """Pack already-interleaved 12-bit values into format-212 bytes."""
    ints = np.asarray(values, dtype=np.int64).reshape(-1)
    if ints.size and (ints.min() < -2048 or ints.max() > 2047):
        raise SignalFormatError("format 212 holds values in [-2048, 2047] only")
    n_bytes = _format212_bytes(ints.size)
    u = (ints & 0xFFF).astype(np.int32)
    if u.size % 2:
        u = np.concatenate([u, np.zeros(1, dtype=np.int32)])
    s0, s1 = u[0::2], u[1::2]
    groups = np.empty((s0.size, 3), dtype=np.uint8)
    groups[:, 0] = s0 & 0xFF
    groups[:, 1] = ((s0 >> 8) & 0x0F) | ((s1 >> 4) & 0xF0)
    groups[:, 2] = s1 & 0xFF
    return groups.tobytes()[:n_bytes]


def _lines(text: Union[str, TextIO, Iterable[str]]) -> Iterable[str]:
    if isinstance(text, str):
        return text.splitlines()
    return text


def read_text(
    text: Union[str, TextIO, Iterable[str]],
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ,
    adc_bits: int = DEFAULT_ADC_BITS,
    record_id: str = "",
) -> Signal:
    """Parse one sample per line; '#' lines may carry key=value headers."""
    samples: list[float] = []
    for lineno, raw in enumerate(_lines(text), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            header = line[1:].strip()
            if "=" not in header:
                continue
            key, _, value = header.partition("=")
            key, value = key.strip().lower(), value.strip()
            try:
                if key in _RATE_KEYS:
                    sample_rate_hz = float(value)
                elif key in _BITS_KEYS:
                    adc_bits = int(value)
                elif key in _RECORD_KEYS:
                    record_id = value
            except ValueError:
                raise SignalFormatError(f"bad header value {value!r} for {key}", line=lineno) from None
            continue
        try:
            value = float(line)
        except ValueError:
            raise SignalFormatError(f"not a number: {line!r}", line=lineno) from None
        if not math.isfinite(value):
            raise SignalFormatError(f"non-finite sample {line!r}", line=lineno)
        samples.append(value)

    if not samples:
        raise SignalFormatError("no samples found")
    return Signal(
        samples=np.asarray(samples, dtype=np.float64),
        sample_rate_hz=sample_rate_hz,
        adc_bits=adc_bits,
        record_id=record_id,
    )


def write_text(s: Signal) -> str:
    header = [f"# fs={s.sample_rate_hz:g}", f"# adc_bits={s.adc_bits}"]
    if s.record_id:
        header.append(f"# record={s.record_id}")
    body = [repr(float(x)) for x in s.samples]
    return "\n".join(header + body) + "\n"


def read_record(
    path: Path,
    channel: int = 0,
    n_samples: Optional[int] = None,
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ,
    adc_bits: int = DEFAULT_ADC_BITS,
) -> Signal:
    path = Path(path)
    try:
        if path.suffix.lower() == ".dat":
            signal = read_format212(
                path.read_bytes(),
                channel=channel,
                n_samples=n_samples,
                sample_rate_hz=sample_rate_hz,
                adc_bits=adc_bits,
                record_id=path.stem,
            )
        else:
            with path.open("r", encoding="utf-8") as fh:
                signal = read_text(fh, sample_rate_hz=sample_rate_hz, adc_bits=adc_bits, record_id=path.stem)
            if n_samples is not None:
                if n_samples > len(signal):
                    raise ShortReadError(f"short read: {path} has {len(signal)} samples")
                signal = signal.with_samples(signal.samples[:n_samples])
    except OSError as exc:
        raise SignalFormatError(f"cannot read {path}: {exc.strerror or exc}") from exc
    logger.debug("Read %s: %s samples at %s Hz", path, len(signal), signal.sample_rate_hz)
    return signal
