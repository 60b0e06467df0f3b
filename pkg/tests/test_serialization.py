"""Byte-level primitives and the index file envelope."""

import struct

import numpy as np
import pytest

from evseq import (
    BaselineSeq,
    FormatError,
    IndexChain,
    IntegrityError,
    gen_queries,
    index_from_bytes,
    index_to_bytes,
    load_index,
    save_index,
    variant_of,
)
from evseq.serial import (
    Reader,
    Writer,
    crc64,
    pack_bits,
    pack_fixed,
    unpack_bits,
    unpack_fixed,
)
from evseq.storage import FORMAT_VERSION, MAGIC

from oracle import random_grid, table1_grid


def _all_indexes(grid):
    return [
        IndexChain.build(grid, "wtrle"),
        IndexChain.build(grid, "wtmap"),
        BaselineSeq.build(grid),
    ]


def test_crc64_known_vectors():
    # CRC-64/XZ check value
    assert crc64(b"123456789") == 0x995DC9BBDF1939FA
    assert crc64(b"") == 0
    assert crc64(b"a") != crc64(b"b")


def test_pack_bits_round_trip(rng):
    for n in (0, 1, 63, 64, 65, 300):
        bits = rng.integers(0, 2, size=n).astype(np.uint8)
        words = pack_bits(bits)
        assert words.size == (n + 63) // 64
        assert np.array_equal(unpack_bits(words, n), bits)


def test_pack_fixed_round_trip(rng):
    for width in (1, 3, 7, 12, 30):
        vals = rng.integers(0, 1 << width, size=97).astype(np.uint64)
        words = pack_fixed(vals, width)
        assert words.size == (97 * width + 63) // 64
        assert np.array_equal(unpack_fixed(words, 97, width), vals.astype(np.int64))
    assert pack_fixed(np.zeros(0, dtype=np.uint64), 5).size == 0
    assert unpack_fixed(np.zeros(0, dtype="<u8"), 0, 5).size == 0
    assert np.array_equal(unpack_fixed(np.zeros(0, dtype="<u8"), 4, 0),
                          np.zeros(4, dtype=np.int64))


def test_writer_reader_round_trip():
    w = Writer()
    w.u8(200)
    w.u16(65_000)
    w.u64(1 << 50)
    w.raw(b"xyz")
    w.words(np.array([7, 8], dtype="<u8"))
    w.u64_array(np.array([9], dtype="<u8"))
    w.i32_array(np.array([-3, 4], dtype="<i4"))
    r = Reader(w.getvalue())
    assert r.u8() == 200
    assert r.u16() == 65_000
    assert r.u64() == 1 << 50
    assert r.raw(3) == b"xyz"
    assert r.words().tolist() == [7, 8]
    assert r.u64_array().tolist() == [9]
    assert r.i32_array().tolist() == [-3, 4]
    assert r.done()


def test_reader_rejects_truncation():
    r = Reader(b"\x01\x02")
    with pytest.raises(FormatError):
        r.u64()
    r2 = Reader(Writer().getvalue())
    with pytest.raises(FormatError):
        r2.u8()


def test_index_round_trip_all_variants(rng):
    grid = random_grid(rng, days=4, employees=3, resolution=10)
    specs = [s for kind in ("ACC", "C1", "CR") for s in
             gen_queries(kind, 15, grid.config, seed=21)]
    for index in _all_indexes(grid):
        blob = index_to_bytes(index)
        back = index_from_bytes(blob)
        assert variant_of(back) == variant_of(index)
        assert back.config == grid.config
        if variant_of(index) == "baseline":
            usable = [s for s in specs if s.kind != "ACC"]
            assert [back.count(s) for s in usable] == [index.count(s) for s in usable]
        else:
            assert [back.answer(s) for s in specs] == [index.answer(s) for s in specs]
        assert index_to_bytes(back) == blob


def test_rebuild_is_byte_identical(rng):
    grid = random_grid(rng, days=3, employees=2, resolution=8)
    for variant in ("wtrle", "wtmap"):
        a = index_to_bytes(IndexChain.build(grid, variant))
        b = index_to_bytes(IndexChain.build(grid, variant))
        assert a == b
    assert index_to_bytes(BaselineSeq.build(grid)) == index_to_bytes(
        BaselineSeq.build(grid))


def test_envelope_rejections():
    blob = index_to_bytes(IndexChain.build(table1_grid(), "wtrle"))

    bad_magic = b"XXXXX" + blob[5:]
    with pytest.raises(FormatError, match="magic"):
        index_from_bytes(bad_magic)

    bad_version = bytearray(blob)
    struct.pack_into("<H", bad_version, 5, FORMAT_VERSION + 1)
    with pytest.raises(FormatError, match="version"):
        index_from_bytes(bytes(bad_version))

    bad_tag = bytearray(blob)
    bad_tag[7] = 99
    with pytest.raises(FormatError, match="variant"):
        index_from_bytes(bytes(bad_tag))

    with pytest.raises(FormatError):
        index_from_bytes(blob[: len(blob) // 2])
    with pytest.raises(FormatError, match="trailing"):
        index_from_bytes(blob + b"\x00")


def test_corrupt_payload_is_detected():
    for index in _all_indexes(table1_grid()):
        blob = bytearray(index_to_bytes(index))
        blob[len(blob) // 2] ^= 0x40  # inside the payload
        with pytest.raises(IntegrityError, match="checksum"):
            index_from_bytes(bytes(blob))


def test_config_payload_mismatch():
    for index in _all_indexes(table1_grid()):
        blob = bytearray(index_to_bytes(index))
        struct.pack_into("<Q", blob, 8, 7)  # envelope days field
        with pytest.raises(FormatError):
            index_from_bytes(bytes(blob))


def test_payload_trailing_bytes_rejected():
    index = IndexChain.build(table1_grid(), "wtmap")
    blob = index_to_bytes(index)
    header, length_off = blob[:40], 40  # magic+ver+tag+config = 8 + 32
    length = struct.unpack_from("<Q", blob, length_off)[0]
    payload = blob[length_off + 8 : length_off + 8 + length] + b"\x00"
    crafted = bytearray()
    crafted += header
    crafted += struct.pack("<Q", len(payload))
    crafted += payload
    crafted += struct.pack("<Q", crc64(bytes(payload)))
    with pytest.raises(FormatError, match="trailing"):
        index_from_bytes(bytes(crafted))


def test_save_and_load(tmp_path, rng):
    grid = random_grid(rng)
    for index in _all_indexes(grid):
        path = tmp_path / f"{variant_of(index)}.idx"
        written = save_index(path, index)
        assert written == path.stat().st_size
        back = load_index(path)
        assert variant_of(back) == variant_of(index)
    corrupted = tmp_path / "bad.idx"
    data = bytearray(index_to_bytes(_all_indexes(grid)[0]))
    data[-12] ^= 0xFF
    corrupted.write_bytes(bytes(data))
    with pytest.raises((IntegrityError, FormatError)):
        load_index(corrupted)


def test_variant_of_rejects_other_objects():
    with pytest.raises(FormatError):
        variant_of({"not": "an index"})
