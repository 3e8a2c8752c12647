"""The WECG archive: a little-endian header followed by three chunked-DEFLATE array sections.

Layout::

    "WECG" | u8 version | u8 flags | u32 n | u32 original_length | u8 levels
           | f64 delta | u32 k
    3 x section (magnitudes, signs, indices):
        u8 element_width | u32 chunk_count | chunk_count x (u32 compressed_len | raw DEFLATE)

Element width 8/16/32 means little-endian unsigned integers, 1 means
bit-packed flags (MSB first) and 0 means a Huffman payload
``u32 count | u16 symbol_count | u8 lengths... | bitstream``.

With the Huffman flag set, the magnitude and index sections each hold
whichever of the Huffman and raw encodings is smaller. Signs are always
bit-packed.
"""
from __future__ import annotations

import logging
import struct
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from ..codec.codec import CodecMode, QuantizedSet
from ..codec.indices import delta_encode_indices
from ..entropy.bitstream import BitStream
from ..entropy.huffman import MAX_SYMBOLS, HuffmanTable, huffman_decode, huffman_encode
from ..entropy.run_length import RunLengthStream, run_length_decode_flags, run_length_encode_flags
from ..errors import (
    ArchiveError,
    ArchiveShortReadError,
    BadMagicError,
    CorruptArchiveError,
    UnrepresentableError,
    VersionMismatchError,
)
from .packing import (
    UINT32_MAX,
    deflate_chunks,
    element_width,
    inflate_chunk,
    pack_bits,
    pack_uint,
    unpack_bits,
    unpack_uint,
)

logger = logging.getLogger(__name__)

MAGIC = b"WECG"
VERSION = 1

WIDTH_HUFFMAN = 0
WIDTH_BITS = 1

FLAG_MODE_A = 0x01
FLAG_HUFFMAN = 0x02
FLAG_RUN_LENGTH = 0x04
_KNOWN_FLAGS = FLAG_MODE_A | FLAG_HUFFMAN | FLAG_RUN_LENGTH

_HEADER = struct.Struct("<4sBBIIBdI")
_SECTION = struct.Struct("<BI")
_U32 = struct.Struct("<I")


class EntropyMode(str, Enum):
    NONE = "none"
    HUFFMAN = "huffman"


class IndexMode(str, Enum):
    DELTA = "delta"
    RUN_LENGTH = "rl"


@dataclass(slots=True, frozen=True)
class ArchiveHeader:
    n: int
    original_length: int
    levels: int
    delta: float
    k: int
    mode: CodecMode = CodecMode.B
    entropy_mode: EntropyMode = EntropyMode.NONE
    index_mode: IndexMode = IndexMode.DELTA

    @property
    def flags(self) -> int:
        flags = 0
        if self.mode is CodecMode.A:
            flags |= FLAG_MODE_A
        if self.entropy_mode is EntropyMode.HUFFMAN:
            flags |= FLAG_HUFFMAN
        if self.index_mode is IndexMode.RUN_LENGTH:
            flags |= FLAG_RUN_LENGTH
        return flags

    def pack(self) -> bytes:
        return _HEADER.pack(
            MAGIC, VERSION, self.flags, self.n, self.original_length, self.levels, self.delta, self.k
        )

    @classmethod
    def unpack(cls, data: bytes) -> "ArchiveHeader":
        lead = bytes(data[:4])
        if lead != MAGIC[:len(lead)]:
            raise BadMagicError(repr(lead))
        if len(data) < _HEADER.size:
            raise ArchiveShortReadError(f"header needs {_HEADER.size} bytes, got {len(data)}")
        magic, version, flags, n, original_length, levels, delta, k = _HEADER.unpack_from(data)
        if version != VERSION:
            raise VersionMismatchError(f"archive version {version}, reader supports {VERSION}")
        if flags & ~_KNOWN_FLAGS:
            raise CorruptArchiveError(f"unknown flag bits 0x{flags:02x}")
        return cls(
            n=n,
            original_length=original_length,
            levels=levels,
            delta=delta,
            k=k,
            mode=CodecMode.A if flags & FLAG_MODE_A else CodecMode.B,
            entropy_mode=EntropyMode.HUFFMAN if flags & FLAG_HUFFMAN else EntropyMode.NONE,
            index_mode=IndexMode.RUN_LENGTH if flags & FLAG_RUN_LENGTH else IndexMode.DELTA,
        )


@dataclass(slots=True, frozen=True)
class ArraySection:
    element_width: int
    chunks: tuple[bytes, ...]

    @classmethod
    def from_payload(cls, element_width: int, payload: bytes) -> "ArraySection":
        return cls(element_width=element_width, chunks=tuple(deflate_chunks(payload)))

    def payload(self) -> bytes:
        return b"".join(inflate_chunk(chunk) for chunk in self.chunks)

    def pack(self) -> bytes:
        parts = [_SECTION.pack(self.element_width, len(self.chunks))]
        for chunk in self.chunks:
            parts.append(_U32.pack(len(chunk)))
            parts.append(chunk)
        return b"".join(parts)

    @classmethod
    def unpack_from(cls, data: bytes, offset: int) -> tuple["ArraySection", int]:
        if len(data) < offset + _SECTION.size:
            raise ArchiveShortReadError("truncated section header")
        width, chunk_count = _SECTION.unpack_from(data, offset)
        offset += _SECTION.size
        if chunk_count * _U32.size > len(data) - offset:
            raise ArchiveShortReadError(f"section declares {chunk_count} chunks")
        chunks = []
        for _ in range(chunk_count):
            if len(data) < offset + _U32.size:
                raise ArchiveShortReadError("truncated chunk table")
            (size,) = _U32.unpack_from(data, offset)
            offset += _U32.size
            if len(data) < offset + size:
                raise ArchiveShortReadError(f"chunk of {size} bytes runs past the end of the archive")
            chunks.append(bytes(data[offset:offset + size]))
            offset += size
        return cls(element_width=width, chunks=tuple(chunks)), offset


@dataclass(slots=True, frozen=True)
class Archive:
    header: ArchiveHeader
    magnitudes: ArraySection
    signs: ArraySection
    indices: ArraySection

    def to_bytes(self) -> bytes:
        return b"".join([self.header.pack(), self.magnitudes.pack(), self.signs.pack(), self.indices.pack()])

    @classmethod
    def from_bytes(cls, data: bytes) -> "Archive":
        header = ArchiveHeader.unpack(data)
        offset = _HEADER.size
        sections = []
        for _ in range(3):
            section, offset = ArraySection.unpack_from(data, offset)
            sections.append(section)
        if offset != len(data):
            raise CorruptArchiveError(f"{len(data) - offset} trailing bytes after the last section")
        return cls(header, *sections)


def _huffman_payload(symbols: np.ndarray) -> bytes:
    table, bits = huffman_encode(symbols)
    return _U32.pack(symbols.size) + table.to_bytes() + bits.data


def _parse_huffman_payload(payload: bytes) -> np.ndarray:
    if len(payload) < _U32.size:
        raise ArchiveShortReadError("truncated Huffman payload")
    (count,) = _U32.unpack_from(payload, 0)
    table, offset = HuffmanTable.from_bytes(payload, _U32.size)
    data = bytes(payload[offset:])
    return huffman_decode(table, BitStream(data=data, bit_length=len(data) * 8), count)


def _encode_integers(values: np.ndarray, entropy_mode: EntropyMode, label: str) -> ArraySection:
    width = element_width(values)
    raw = ArraySection.from_payload(width, pack_uint(values, width))
    if entropy_mode is not EntropyMode.HUFFMAN or not values.size:
        return raw
    if int(values.max()) >= MAX_SYMBOLS:
        logger.warning("%s alphabet exceeds 16 bits; storing it without Huffman coding", label)
        return raw
    coded = ArraySection.from_payload(WIDTH_HUFFMAN, _huffman_payload(values))
    if len(coded.pack()) < len(raw.pack()):
        return coded
    logger.debug("Huffman did not shrink the %s section; keeping %s-bit words", label, width)
    return raw


def _decode_integers(section: ArraySection, label: str) -> np.ndarray:
    payload = section.payload()
    if section.element_width == WIDTH_HUFFMAN:
        return _parse_huffman_payload(payload)
    if section.element_width == WIDTH_BITS:
        raise CorruptArchiveError(f"{label} section cannot be bit-packed")
    return unpack_uint(payload, section.element_width)


def _encode_signs(signs: np.ndarray) -> ArraySection:
    return ArraySection.from_payload(WIDTH_BITS, pack_bits(signs))


def _decode_signs(section: ArraySection, k: int) -> np.ndarray:
    if section.element_width != WIDTH_BITS:
        raise CorruptArchiveError(f"sign section has element width {section.element_width}")
    return unpack_bits(section.payload(), k)


def _check_representable(q: QuantizedSet) -> None:
    for label, value in (("n", q.n), ("original length", q.original_length), ("k", q.k)):
        if value > UINT32_MAX:
            raise UnrepresentableError(f"{label} {value} exceeds 2**32 - 1")
    if q.levels > 0xFF:
        raise UnrepresentableError(f"{q.levels} levels do not fit one byte")
    if q.k and int(q.magnitudes.max()) > UINT32_MAX:
        raise UnrepresentableError(f"magnitude {int(q.magnitudes.max())} exceeds 2**32 - 1")


def serialize(
    q: QuantizedSet,
    entropy_mode: EntropyMode = EntropyMode.NONE,
    index_mode: IndexMode = IndexMode.DELTA,
) -> bytes:
    entropy_mode = EntropyMode(entropy_mode)
    index_mode = IndexMode(index_mode)
    _check_representable(q)

    if index_mode is IndexMode.RUN_LENGTH:
        index_values = run_length_encode_flags(q.indices(), q.n).runs
    else:
        index_values = q.index_deltas

    archive = Archive(
        header=ArchiveHeader(
            n=q.n,
            original_length=q.original_length,
            levels=q.levels,
            delta=q.delta,
            k=q.k,
            mode=q.mode,
            entropy_mode=entropy_mode,
            index_mode=index_mode,
        ),
        magnitudes=_encode_integers(q.magnitudes, entropy_mode, "magnitude"),
        signs=_encode_signs(q.signs),
        indices=_encode_integers(index_values, entropy_mode, "index"),
    )
    data = archive.to_bytes()
    logger.debug(
        "Serialized k=%s into %s bytes (chunks: %s/%s/%s)",
        q.k,
        len(data),
        len(archive.magnitudes.chunks),
        len(archive.signs.chunks),
        len(archive.indices.chunks),
    )
    return data


def deserialize(data: bytes) -> QuantizedSet:
    try:
        archive = Archive.from_bytes(data)
        header = archive.header
        magnitudes = _decode_integers(archive.magnitudes, "magnitude")
        if magnitudes.size != header.k:
            raise CorruptArchiveError(f"{magnitudes.size} magnitudes, header says k={header.k}")
        signs = _decode_signs(archive.signs, header.k)
        index_values = _decode_integers(archive.indices, "index")
        if header.index_mode is IndexMode.RUN_LENGTH:
            stream = RunLengthStream(n=header.n, runs=index_values)
            if stream.k != header.k:
                raise CorruptArchiveError(f"run-length flags mark {stream.k} positions, header says k={header.k}")
            index_deltas = delta_encode_indices(run_length_decode_flags(stream)).deltas
        else:
            index_deltas = index_values
        return QuantizedSet(
            n=header.n,
            levels=header.levels,
            delta=header.delta,
            magnitudes=magnitudes,
            signs=signs,
            index_deltas=index_deltas,
            original_length=header.original_length,
            mode=header.mode,
        )
    except ArchiveError:
        raise
    except (ValueError, struct.error, OverflowError) as exc:
        raise CorruptArchiveError(str(exc)) from exc


def read_header(data: bytes) -> ArchiveHeader:
    return ArchiveHeader.unpack(data)


def save_archive(
    path: Path,
    q: QuantizedSet,
    entropy_mode: EntropyMode = EntropyMode.NONE,
    index_mode: IndexMode = IndexMode.DELTA,
) -> int:
    data = serialize(q, entropy_mode, index_mode)
    Path(path).write_bytes(data)
    return len(data)


def load_archive(path: Path) -> QuantizedSet:
    return deserialize(Path(path).read_bytes())
