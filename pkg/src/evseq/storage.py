"""Index file envelope: magic, version, variant, config, payload, checksum.

Layout: `EVSQ1` magic, u16 format version, u8 variant tag, the grid config,
a u64 payload length, the payload bytes, and a CRC-64 of the payload. The
payload is the chain serialization for the wavelet-tree variants and the
run-compressed sequence for the baseline.
"""

from __future__ import annotations

from .baseline import BaselineSeq
from .chain import IndexChain
from .errors import FormatError, IntegrityError
from .events import GridConfig
from .serial import Reader, Writer, crc64

MAGIC = b"EVSQ1"
FORMAT_VERSION = 1

VARIANT_TAGS = {"wtrle": 1, "wtmap": 2, "baseline": 3}
TAG_VARIANTS = {tag: name for name, tag in VARIANT_TAGS.items()}


def variant_of(index) -> str:
    if isinstance(index, IndexChain):
        return index.variant
    if isinstance(index, BaselineSeq):
        return "baseline"
    raise FormatError(f"not an index object: {type(index).__name__}")


def index_to_bytes(index) -> bytes:
    variant = variant_of(index)
    pw = Writer()
    if variant == "baseline":
        index.write(pw)
    else:
        index.write_payload(pw)
    payload = pw.getvalue()
    w = Writer()
    w.raw(MAGIC)
    w.u16(FORMAT_VERSION)
    w.u8(VARIANT_TAGS[variant])
    index.config.write(w)
    w.u64(len(payload))
    w.raw(payload)
    w.u64(crc64(payload))
    return w.getvalue()


def index_from_bytes(data: bytes):
    r = Reader(data)
    if r.raw(len(MAGIC)) != MAGIC:
        raise FormatError("not an index file (bad magic)")
    version = r.u16()
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {version}")
    tag = r.u8()
    variant = TAG_VARIANTS.get(tag)
    if variant is None:
        raise FormatError(f"unknown variant tag {tag}")
    config = GridConfig.read(r)
    length = r.u64()
    payload = r.raw(length)
    stored = r.u64()
    actual = crc64(payload)
    if stored != actual:
        raise IntegrityError(
            f"payload checksum mismatch: stored {stored:#018x}, computed {actual:#018x}")
    pr = Reader(payload)
    if variant == "baseline":
        index = BaselineSeq.read(pr)
        if index.config != config:
            raise FormatError("envelope and payload configs disagree")
    else:
        index = IndexChain.read_payload(pr, config, variant)
        for level in index.levels:
            if level.n != config.n:
                raise FormatError("level length disagrees with the grid config")
    if not pr.done():
        raise FormatError("trailing bytes after index payload")
    if not r.done():
        raise FormatError("trailing bytes after index file")
    return index


def save_index(path, index) -> int:
    """Serialize an index to disk; returns the byte count written."""
    data = index_to_bytes(index)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


def load_index(path):
    """Load any index variant, verifying the payload checksum."""
    with open(path, "rb") as fh:
        data = fh.read()
    return index_from_bytes(data)
