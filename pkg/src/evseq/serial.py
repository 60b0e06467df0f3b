"""Binary serialization primitives.

All integers are little-endian. A bit payload stores logical bit i (1-based)
in 64-bit word (i-1)//64 at offset (i-1)%64, least significant bit first,
and is written as a u64 word count followed by the raw words. Fixed-width
integer arrays pack each value into `width` consecutive bits of one logical
bitstring using the same layout.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import FormatError

_U8 = struct.Struct("<B")
_U16 = struct.Struct("<H")
_U64 = struct.Struct("<Q")


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a 0/1 uint8 array into little-endian uint64 words."""
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    if bits.size == 0:
        return np.zeros(0, dtype="<u8")
    by = np.packbits(bits, bitorder="little")
    pad = (-by.size) % 8
    if pad:
        by = np.concatenate([by, np.zeros(pad, dtype=np.uint8)])
    return by.view("<u8")


def unpack_bits(words: np.ndarray, n: int) -> np.ndarray:
    """Inverse of pack_bits, returning exactly n bits."""
    by = np.ascontiguousarray(words, dtype="<u8").view(np.uint8)
    bits = np.unpackbits(by, bitorder="little")
    return bits[:n]


def pack_fixed(values: np.ndarray, width: int) -> np.ndarray:
    """Pack non-negative integers into width-bit slots of a bitstring."""
    values = np.ascontiguousarray(values, dtype=np.uint64)
    if width == 0 or values.size == 0:
        return np.zeros(0, dtype="<u8")
    shifts = np.arange(width, dtype=np.uint64)
    bits = ((values[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
    return pack_bits(bits.reshape(-1))

def unpack_fixed(words: np.ndarray, count: int, width: int) -> np.ndarray:
    if width == 0 or count == 0:
        return np.zeros(count, dtype=np.int64)
    bits = unpack_bits(words, count * width).astype(np.int64)
    weights = np.int64(1) << np.arange(width, dtype=np.int64)
    return bits.reshape(count, width) @ weights


class Writer:
    """Append-only byte buffer with typed writes."""

    def __init__(self) -> None:
        self._parts: list[bytes] = []

    def u8(self, v: int) -> None:
        self._parts.append(_U8.pack(v))

    def u16(self, v: int) -> None:
        self._parts.append(_U16.pack(v))

    def u64(self, v: int) -> None:
        self._parts.append(_U64.pack(v))

    def raw(self, b: bytes) -> None:
        self._parts.append(bytes(b))

    def words(self, w: np.ndarray) -> None:
        w = np.ascontiguousarray(w, dtype="<u8")
        self.u64(w.size)
        self._parts.append(w.tobytes())

    def u64_array(self, a: np.ndarray) -> None:
        a = np.ascontiguousarray(a, dtype="<u8")
        self.u64(a.size)
        self._parts.append(a.tobytes())

    def i32_array(self, a: np.ndarray) -> None:
        a = np.ascontiguousarray(a, dtype="<i4")
        self.u64(a.size)
        self._parts.append(a.tobytes())

    def getvalue(self) -> bytes:
        return b"".join(self._parts)


class Reader:
    """Sequential typed reads over a bytes object."""

    def __init__(self, data: bytes, offset: int = 0) -> None:
        self._data = data
        self._off = offset

    def _take(self, k: int) -> bytes:
        if self._off + k > len(self._data):
            raise FormatError("truncated payload")
        b = self._data[self._off : self._off + k]
        self._off += k
        return b

    def u8(self) -> int:
        return _U8.unpack(self._take(1))[0]

    def u16(self) -> int:
        return _U16.unpack(self._take(2))[0]

    def u64(self) -> int:
        return _U64.unpack(self._take(8))[0]

    def raw(self, k: int) -> bytes:
        return self._take(k)

    def words(self) -> np.ndarray:
        k = self.u64()
        return np.frombuffer(self._take(8 * k), dtype="<u8").copy()

    def u64_array(self) -> np.ndarray:
        k = self.u64()
        return np.frombuffer(self._take(8 * k), dtype="<u8").copy()

    def i32_array(self) -> np.ndarray:
        k = self.u64()
        return np.frombuffer(self._take(4 * k), dtype="<i4").copy()

    def done(self) -> bool:
        return self._off == len(self._data)

    @property
    def offset(self) -> int:
        return self._off


# CRC-64 with the reflected ECMA-182 polynomial (the xz variant):
# poly 0xC96C5795D7870F42, init and xorout all-ones.
_CRC64_POLY = 0xC96C5795D7870F42
_CRC64_MASK = 0xFFFFFFFFFFFFFFFF


def _crc64_table() -> list[int]:
    table = []
    for byte in range(256):
        crc = byte
        for _ in range(8):
            if crc & 1:
                crc = (crc >> 1) ^ _CRC64_POLY
            else:
                crc >>= 1
        table.append(crc)
    return table


_CRC64_TABLE = _crc64_table()


def crc64(data: bytes) -> int:
    crc = _CRC64_MASK
    table = _CRC64_TABLE
    for b in data:
        crc = table[(crc ^ b) & 0xFF] ^ (crc >> 8)
    return crc ^ _CRC64_MASK
