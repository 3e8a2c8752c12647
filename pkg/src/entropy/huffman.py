from __future__ import annotations

import heapq
import struct
from dataclasses import dataclass

import numpy as np

from ..errors import CorruptStreamError, UnrepresentableError
from .bitstream import BitStream, pack_codes

MAX_SYMBOLS = 0xFFFF
MAX_CODE_LENGTH = 57

_COUNT = struct.Struct("<H")


def _canonical_first_codes(lengths: np.ndarray) -> tuple[list[int], list[int]]:
    max_len = int(lengths.max())
    counts = np.bincount(lengths[lengths > 0], minlength=max_len + 1).tolist()
    counts[0] = 0
    first = [0] * (max_len + 1)
    code = 0
    for length in range(1, max_len + 1):
        code = (code + counts[length - 1]) << 1
        first[length] = code
    return first, counts


@dataclass(slots=True, frozen=True, eq=False)
class HuffmanTable:
    """Canonical Huffman code given only by one bit length per symbol (0 = unused)."""

    symbol_count: int
    code_lengths: np.ndarray

    def __post_init__(self) -> None:
        lengths = np.asarray(self.code_lengths, dtype=np.int64).reshape(-1)
        if not 1 <= self.symbol_count <= MAX_SYMBOLS or lengths.size != self.symbol_count:
            raise CorruptStreamError(f"table declares {self.symbol_count} symbols, has {lengths.size} lengths")
        if lengths.min() < 0 or lengths.max() < 1 or lengths.max() > MAX_CODE_LENGTH:
            raise CorruptStreamError("code lengths out of range")
        object.__setattr__(self, "code_lengths", lengths)
        if self.kraft_sum() > 1:
            raise CorruptStreamError("code lengths violate the Kraft inequality")

    def kraft_sum(self) -> float:
        lengths = np.asarray(self.code_lengths, dtype=np.int64)
        used = lengths[lengths > 0]
        top = int(used.max())
        total = sum(1 << (top - int(length)) for length in used)
        return total / (1 << top)

    def codes(self) -> np.ndarray:
        """Canonical code value per symbol, shorter codes first and ties by symbol."""
        first, _ = _canonical_first_codes(self.code_lengths)
        codes = np.zeros(self.symbol_count, dtype=np.uint64)
        for symbol in self._ordered_symbols():
            length = int(self.code_lengths[symbol])
            codes[symbol] = first[length]
            first[length] += 1
        return codes

    def _ordered_symbols(self) -> list[int]:
        used = np.flatnonzero(self.code_lengths)
        return used[np.argsort(self.code_lengths[used], kind="stable")].tolist()

    def to_bytes(self) -> bytes:
        return _COUNT.pack(self.symbol_count) + self.code_lengths.astype(np.uint8).tobytes()

    @classmethod
    def from_bytes(cls, data: bytes, offset: int = 0) -> tuple["HuffmanTable", int]:
        """Parse a table at `offset`; returns it with the offset just past it."""
        if len(data) < offset + _COUNT.size:
            raise CorruptStreamError("truncated Huffman table")
        (count,) = _COUNT.unpack_from(data, offset)
        start = offset + _COUNT.size
        if len(data) < start + count:
            raise CorruptStreamError("truncated Huffman table")
        lengths = np.frombuffer(data, dtype=np.uint8, count=count, offset=start)
        return cls(symbol_count=count, code_lengths=lengths), start + count


def code_lengths(frequencies: np.ndarray) -> np.ndarray:
    """Huffman code lengths for non-negative frequencies; ties merge lower symbols first."""
    freqs = np.asarray(frequencies, dtype=np.int64)
    present = np.flatnonzero(freqs)
    lengths = np.zeros(freqs.size, dtype=np.int64)
    if present.size == 0:
        return lengths
    if present.size == 1:
        lengths[present[0]] = 1
        return lengths

    heap = [(int(freqs[s]), int(s), node) for node, s in enumerate(present)]
    heapq.heapify(heap)
    parent = [-1] * present.size
    while len(heap) > 1:
        f1, t1, a = heapq.heappop(heap)
        f2, t2, b = heapq.heappop(heap)
        node = len(parent)
        parent.append(-1)
        parent[a] = node
        parent[b] = node
        heapq.heappush(heap, (f1 + f2, min(t1, t2), node))

    depth = [0] * len(parent)
    for node in range(len(parent) - 2, -1, -1):
        depth[node] = depth[parent[node]] + 1
    lengths[present] = depth[:present.size]
    return lengths


def huffman_encode(symbols: np.ndarray) -> tuple[HuffmanTable, BitStream]:
    symbols = np.asarray(symbols, dtype=np.int64).reshape(-1)
    if symbols.size == 0:
        raise ValueError("cannot Huffman-code an empty sequence")
    if symbols.min() < 0:
        raise ValueError("Huffman symbols must be non-negative")
    if symbols.max() >= MAX_SYMBOLS:
        raise UnrepresentableError(f"symbol {symbols.max()} does not fit a 16-bit Huffman alphabet")

    lengths = code_lengths(np.bincount(symbols))
    if lengths.max() > MAX_CODE_LENGTH:
        raise UnrepresentableError(f"code length {lengths.max()} exceeds {MAX_CODE_LENGTH} bits")
    table = HuffmanTable(symbol_count=int(lengths.size), code_lengths=lengths)
    bits = pack_codes(table.codes()[symbols], table.code_lengths[symbols])
    return table, bits


def huffman_decode(table: HuffmanTable, bits: BitStream, count: int) -> np.ndarray:
    if count == 0:
        return np.zeros(0, dtype=np.int64)
    first, counts = _canonical_first_codes(table.code_lengths)
    ordered = table._ordered_symbols()
    offsets = [0] * len(counts)
    running = 0
    for length in range(1, len(counts)):
        offsets[length] = running
        running += counts[length]
    max_len = len(counts) - 1

    out: list[int] = []
    code = 0
    length = 0
    for bit in bits.to_bits().tolist():
        code = (code << 1) | bit
        length += 1
        if length > max_len:
            raise CorruptStreamError("bit pattern matches no code")
        idx = code - first[length]
        if 0 <= idx < counts[length]:
            out.append(ordered[offsets[length] + idx])
            if len(out) == count:
                break
            code = 0
            length = 0
    if len(out) < count:
        raise CorruptStreamError(f"stream ended after {len(out)} of {count} symbols")
    return np.asarray(out, dtype=np.int64)
