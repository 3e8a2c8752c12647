from __future__ import annotations

import zlib

import numpy as np

from ..errors import ChunkInflateError, CorruptArchiveError, UnrepresentableError

CHUNK_SIZE = 64 * 1024
UINT32_MAX = 0xFFFFFFFF

_DTYPES = {8: np.dtype("<u1"), 16: np.dtype("<u2"), 32: np.dtype("<u4")}


def element_width(values: np.ndarray) -> int:
    """Smallest of 8/16/32 bits holding every value."""
    values = np.asarray(values)
    if values.size == 0:
        return 8
    low, high = int(values.min()), int(values.max())
    if low < 0:
        raise UnrepresentableError(f"negative value {low} cannot be stored unsigned")
    for width in (8, 16, 32):
        if high < (1 << width):
            return width
    raise UnrepresentableError(f"value {high} exceeds 2**32 - 1")


def pack_uint(values: np.ndarray, width: int) -> bytes:
    return np.asarray(values, dtype=np.int64).astype(_DTYPES[width]).tobytes()


def unpack_uint(payload: bytes, width: int) -> np.ndarray:
    dtype = _DTYPES.get(width)
    if dtype is None:
        raise CorruptArchiveError(f"unknown element width {width}")
    if len(payload) % dtype.itemsize:
        raise CorruptArchiveError(f"{len(payload)} bytes is not a whole number of {width}-bit elements")
    return np.frombuffer(payload, dtype=dtype).astype(np.int64)


def pack_bits(flags: np.ndarray) -> bytes:
    return np.packbits(np.asarray(flags, dtype=np.uint8)).tobytes()


def unpack_bits(payload: bytes, count: int) -> np.ndarray:
    if len(payload) != (count + 7) // 8:
        raise CorruptArchiveError(f"{len(payload)} bytes cannot hold exactly {count} flags")
    return np.unpackbits(np.frombuffer(payload, dtype=np.uint8), count=count)


def deflate_chunks(payload: bytes, chunk_size: int = CHUNK_SIZE) -> list[bytes]:
    chunks = []
    for start in range(0, len(payload), chunk_size):
        compressor = zlib.compressobj(9, zlib.DEFLATED, -15, 9)
        chunks.append(compressor.compress(payload[start:start + chunk_size]) + compressor.flush())
    return chunks


def inflate_chunk(chunk: bytes, chunk_size: int = CHUNK_SIZE) -> bytes:
    inflater = zlib.decompressobj(-15)
    try:
        out = inflater.decompress(chunk, chunk_size + 1)
    except zlib.error as exc:
        raise ChunkInflateError(str(exc)) from exc
    if len(out) > chunk_size:
        raise ChunkInflateError(f"chunk inflates past {chunk_size} bytes")
    if not inflater.eof or inflater.unused_data:
        raise ChunkInflateError("chunk is not a single complete DEFLATE stream")
    return out
