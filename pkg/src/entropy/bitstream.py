from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_PACK_BLOCK = 1 << 16


@dataclass(slots=True, frozen=True)
class BitStream:
    """MSB-first packed bits; `bit_length` excludes the zero padding of the last byte."""

    data: bytes
    bit_length: int

    def __post_init__(self) -> None:
        if self.bit_length < 0 or (self.bit_length + 7) // 8 != len(self.data):
            raise ValueError(f"{len(self.data)} bytes cannot hold exactly {self.bit_length} bits")

    @classmethod
    def from_bits(cls, bits: np.ndarray) -> "BitStream":
        bits = np.asarray(bits, dtype=np.uint8).reshape(-1)
        return cls(data=np.packbits(bits).tobytes(), bit_length=int(bits.size))

    def to_bits(self) -> np.ndarray:
        raw = np.frombuffer(self.data, dtype=np.uint8)
        return np.unpackbits(raw, count=self.bit_length)


def pack_codes(codes: np.ndarray, lengths: np.ndarray) -> BitStream:
    """Concatenate variable-length codes, each given as an integer and its bit count."""
    codes = np.asarray(codes, dtype=np.uint64).reshape(-1)
    lengths = np.asarray(lengths, dtype=np.int64).reshape(-1)
    if codes.size == 0:
        return BitStream(data=b"", bit_length=0)
    width = int(lengths.max())
    columns = np.arange(width)[None, :]
    pieces = []
    for start in range(0, codes.size, _PACK_BLOCK):
        block_codes = codes[start:start + _PACK_BLOCK, None]
        shifts = lengths[start:start + _PACK_BLOCK, None] - 1 - columns
        valid = shifts >= 0
        bits = (block_codes >> np.where(valid, shifts, 0).astype(np.uint64)) & np.uint64(1)
        pieces.append(bits[valid].astype(np.uint8))
    return BitStream.from_bits(np.concatenate(pieces))
