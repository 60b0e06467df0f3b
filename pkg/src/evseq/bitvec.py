"""Static bitvectors with access / rank / select.

Three encodings share one operation contract:

* PlainBitVector: packed 64-bit words plus a two-level rank directory
  (absolute counts per 512-bit superblock, relative counts per word).
* SparseBitVector: Elias-Fano split of the sorted one-positions into low
  bits of width floor(log2(n/m)) and a unary-coded high part, falling back
  to the plain encoding when more than a quarter of the positions are set.
* RleBitVector: run heads in a SparseBitVector, the first bit value, and a
  cumulative-ones count per run.

Positions are 1-based. rank accepts i in [0, n] and counts bits 1..i;
select(b, j) returns the position of the j-th b-bit and raises NotFoundError
when fewer than j exist. All structures are immutable after construction
and safe for concurrent readers.
"""

from __future__ import annotations

import bisect
from array import array

import numpy as np

from .errors import BuildError, DomainError, FormatError, NotFoundError, RangeError
from .serial import Reader, Writer, pack_bits, pack_fixed, unpack_bits, unpack_fixed

_SUPER_WORDS = 8  # 512-bit superblocks

_POP8 = np.array([bin(b).count("1") for b in range(256)], dtype=np.uint16)

# _SELECT8[b] lists the 0-based offsets of the set bits of byte b.
_SELECT8 = [[i for i in range(8) if b >> i & 1] for b in range(256)]

TAG_PLAIN = 1
TAG_SPARSE = 2
TAG_RLE = 3


def _as_bits(bits) -> np.ndarray:
    if isinstance(bits, str):
        bits = [int(c) for c in bits]
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise BuildError("bits must be one-dimensional")
    if arr.size and arr.max() > 1:
        raise BuildError("bits must be 0 or 1")
    return arr


def _check_rank_pos(i: int, n: int) -> None:
    if not 0 <= i <= n:
        raise RangeError(f"rank position {i} outside [0, {n}]")


def _as_scalar_key(arr: np.ndarray) -> array:
    """Contiguous signed-64 copy for scalar bisect; beats both boxed python
    lists (pointer chasing) and np.searchsorted (dispatch) on hot paths."""
    out = array("q")
    out.frombytes(np.ascontiguousarray(arr, dtype="<i8").tobytes())
    return out


_DIR_SHIFT = 12  # 4096-value buckets


def _dir_shift_for(limit: int, m: int) -> int:
    """Bucket shift that keeps the directory no larger than the key."""
    shift = _DIR_SHIFT
    while (limit >> shift) > max(m, 64):
        shift += 1
    return shift


def _bucket_dir(values: np.ndarray, limit: int, shift: int) -> array:
    """Directory over sorted values in [0, limit]: entry j counts values
    below j << shift, so bisect for i is confined to bucket i >> shift."""
    grid = np.arange((limit >> shift) + 2, dtype=np.int64) << shift
    return _as_scalar_key(np.searchsorted(values, grid, side="left"))


def _check_bit(b: int) -> None:
    if b not in (0, 1):
        raise DomainError(f"bit must be 0 or 1, got {b}")


def _check_select_arg(j: int, total: int, b: int) -> None:
    if j < 1:
        raise RangeError(f"select index {j} must be >= 1")
    if j > total:
        raise NotFoundError(f"fewer than {j} bits equal to {b}")


class PlainBitVector:
    """Uncompressed bitvector with O(1) rank and near-O(1) select."""

    __slots__ = ("n", "_words_np", "_words", "_block", "_super", "_super_np", "_zeros_np")

    def __init__(self, words: np.ndarray, n: int):
        words = np.ascontiguousarray(words, dtype="<u8")
        need = (n + 63) // 64
        if words.size != need:
            raise BuildError(f"expected {need} words for {n} bits, got {words.size}")
        if n % 64 and words.size:
            tail = int(words[-1]) >> (n % 64)
            if tail:
                raise BuildError("set bits beyond logical length")
        self.n = n
        self._words_np = words
        by = words.view(np.uint8)
        word_pop = _POP8[by].reshape(-1, 8).sum(axis=1).astype(np.int64)
        nsuper = (words.size + _SUPER_WORDS - 1) // _SUPER_WORDS or 1
        pad = nsuper * _SUPER_WORDS - words.size
        wp = np.concatenate([word_pop, np.zeros(pad, dtype=np.int64)])
        per_super = wp.reshape(nsuper, _SUPER_WORDS)
        super_cum = np.zeros(nsuper + 1, dtype=np.int64)
        np.cumsum(per_super.sum(axis=1), out=super_cum[1:])
        block_cum = np.cumsum(per_super, axis=1)
        block = np.zeros_like(per_super)
        block[:, 1:] = block_cum[:, :-1]
        self._super_np = super_cum
        # zeros before each superblock boundary, clamped to the logical length
        bounds = np.minimum(np.arange(nsuper + 1, dtype=np.int64) * 512, n)
        self._zeros_np = bounds - super_cum
        # python lists are measurably faster than numpy scalars on the hot path
        self._words = words.tolist()
        self._super = super_cum.tolist()
        self._block = block.reshape(-1)[: words.size].tolist()

    @classmethod
    def from_bits(cls, bits) -> "PlainBitVector":
        arr = _as_bits(bits)
        return cls(pack_bits(arr), arr.size)

    # -- core operations ---------------------------------------------------

    @property
    def ones(self) -> int:
        return self._super[-1]

    @property
    def zeros(self) -> int:
        return self.n - self.ones

    def __len__(self) -> int:
        return self.n

    def access(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise RangeError(f"position {i} outside [1, {self.n}]")
        j = int(i) - 1  # python int: numpy scalars poison the word bit-ops
        return (self._words[j >> 6] >> (j & 63)) & 1

    def rank1(self, i: int) -> int:
        if not 0 <= i <= self.n:
            raise RangeError(f"rank position {i} outside [0, {self.n}]")
        if i == 0:
            return 0
        j = int(i) - 1
        wi = j >> 6
        w = self._words[wi] & ((1 << ((j & 63) + 1)) - 1)
        return self._super[wi >> 3] + self._block[wi] + w.bit_count()

    def rank1_fast(self, i: int) -> int:
        """rank1 without the range check; i must already be in [0, n]."""
        if i == 0:
            return 0
        j = int(i) - 1
        wi = j >> 6
        w = self._words[wi] & ((1 << ((j & 63) + 1)) - 1)
        return self._super[wi >> 3] + self._block[wi] + w.bit_count()

    def rank_pair_fast(self, i1: int, i2: int) -> tuple[int, int]:
        """(rank1(i1), rank1(i2)) without range checks."""
        words = self._words
        block = self._block
        sup = self._super
        if i1:
            j = int(i1) - 1
            wi = j >> 6
            w = words[wi] & ((1 << ((j & 63) + 1)) - 1)
            r1 = sup[wi >> 3] + block[wi] + w.bit_count()
        else:
            r1 = 0
        if i2:
            j = int(i2) - 1
            wi = j >> 6
            w = words[wi] & ((1 << ((j & 63) + 1)) - 1)
            r2 = sup[wi >> 3] + block[wi] + w.bit_count()
        else:
            r2 = 0
        return r1, r2

    def rank_quad_fast(self, i1: int, i2: int, i3: int, i4: int):
        """rank1 at four positions in one call, without range checks."""
        words = self._words
        block = self._block
        sup = self._super
        if i1:
            j = int(i1) - 1
            wi = j >> 6
            w = words[wi] & ((1 << ((j & 63) + 1)) - 1)
            r1 = sup[wi >> 3] + block[wi] + w.bit_count()
        else:
            r1 = 0
        if i2:
            j = int(i2) - 1
            wi = j >> 6
            w = words[wi] & ((1 << ((j & 63) + 1)) - 1)
            r2 = sup[wi >> 3] + block[wi] + w.bit_count()
        else:
            r2 = 0
        if i3:
            j = int(i3) - 1
            wi = j >> 6
            w = words[wi] & ((1 << ((j & 63) + 1)) - 1)
            r3 = sup[wi >> 3] + block[wi] + w.bit_count()
        else:
            r3 = 0
        if i4:
            j = int(i4) - 1
            wi = j >> 6
            w = words[wi] & ((1 << ((j & 63) + 1)) - 1)
            r4 = sup[wi >> 3] + block[wi] + w.bit_count()
        else:
            r4 = 0
        return r1, r2, r3, r4

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def rank(self, b: int, i: int) -> int:
        _check_bit(b)
        return self.rank1(i) if b else self.rank0(i)

    def rank1_and_bit(self, i: int) -> tuple[int, int]:
        """(rank1(i), bit at i) with a single word fetch; i must be in [1, n]."""
        j = int(i) - 1
        wi = j >> 6
        w = self._words[wi]
        off = j & 63
        r = self._super[wi >> 3] + self._block[wi] + (w & ((1 << off) - 1)).bit_count()
        b = (w >> off) & 1
        return r + b, b

    def select1(self, j: int) -> int:
        _check_select_arg(j, self.ones, 1)
        sb = int(np.searchsorted(self._super_np, j, side="left")) - 1
        rem = j - self._super[sb]
        for wi in range(sb * _SUPER_WORDS, len(self._words)):
            w = self._words[wi]
            pc = w.bit_count()
            if rem <= pc:
                return wi * 64 + _select_in_word(w, rem) + 1
            rem -= pc
        raise NotFoundError("select1 directory inconsistency")

    def select0(self, j: int) -> int:
        _check_select_arg(j, self.zeros, 0)
        sb = int(np.searchsorted(self._zeros_np, j, side="left")) - 1
        boundary = min(sb * 512, self.n)
        rem = j - (boundary - self._super[sb])
        for wi in range(sb * _SUPER_WORDS, len(self._words)):
            valid = min(64, self.n - wi * 64)
            w = self._words[wi]
            zc = valid - w.bit_count()
            if rem <= zc:
                inv = ~w & ((1 << valid) - 1)
                return wi * 64 + _select_in_word(inv, rem) + 1
            rem -= zc
        raise NotFoundError("select0 directory inconsistency")

    def select(self, b: int, j: int) -> int:
        _check_bit(b)
        return self.select1(j) if b else self.select0(j)

    def to_bits(self) -> np.ndarray:
        return unpack_bits(self._words_np, self.n)

    # -- serialization -----------------------------------------------------

    def write(self, w: Writer) -> None:
        w.u8(TAG_PLAIN)
        w.u64(self.n)
        w.u64(self.ones)
        w.words(self._words_np)

    @classmethod
    def read(cls, r: Reader) -> "PlainBitVector":
        n = r.u64()
        ones = r.u64()
        bv = cls(r.words(), n)
        if bv.ones != ones:
            raise FormatError("plain bitvector population mismatch")
        return bv

    def to_bytes(self) -> bytes:
        w = Writer()
        self.write(w)
        return w.getvalue()

    def size_in_bytes(self) -> int:
        return 1 + 8 + 8 + 8 + 8 * len(self._words)


def _select_in_word(w: int, r: int) -> int:
    """Offset (0-based) of the r-th set bit of w; r >= 1 and must exist."""
    for shift in range(0, 64, 8):
        b = (w >> shift) & 0xFF
        pc = b.bit_count()
        if r <= pc:
            return shift + _SELECT8[b][r - 1]
        r -= pc
    raise NotFoundError("bit not present in word")


class SparseBitVector:
    """Elias-Fano coded set of positions, tuned for m much smaller than n.

    The canonical representation is the (low, high) split; a decoded
    position array is kept alongside it so rank becomes one binary search
    and select one array load. The decoded array is derived state and is
    never serialized.
    """

    __slots__ = ("n", "m", "encoding", "_pos", "_pos_key", "_pos_dir",
                 "_dir_shift", "_low", "_low_width", "_high", "_plain",
                 "_zero_key")

    def __init__(self, n: int, positions) -> None:
        pos = np.asarray(positions, dtype=np.int64)
        if pos.ndim != 1:
            raise BuildError("positions must be one-dimensional")
        m = pos.size
        if m:
            if pos[0] < 1 or pos[-1] > n:
                raise BuildError(f"positions must lie in [1, {n}]")
            if np.any(pos[1:] <= pos[:-1]):
                raise BuildError("positions must be strictly increasing")
        self.n = n
        self.m = m
        self._pos = pos
        self._pos_key = None
        self._pos_dir = None
        self._dir_shift = 0
        self._zero_key = None
        self._plain = None
        self._low = None
        self._high = None
        self._low_width = 0
        if m * 4 > n:
            # dense: the plain encoding is smaller and faster
            self.encoding = "plain"
            bits = np.zeros(n, dtype=np.uint8)
            bits[pos - 1] = 1
            self._plain = PlainBitVector(pack_bits(bits), n)
        else:
            self.encoding = "ef"
            self._low_width = self._width(n, m)
            self._build_ef()

    @staticmethod
    def _width(n: int, m: int) -> int:
        if m == 0 or n // m < 2:
            return 0
        return (n // m).bit_length() - 1

    def _build_ef(self) -> None:
        l = self._low_width
        p0 = self._pos - 1
        if l:
            self._low = (p0 & ((1 << l) - 1)).astype(np.int64)
        else:
            self._low = np.zeros(self.m, dtype=np.int64)
        high = p0 >> l
        if self.n:
            buckets = ((self.n - 1) >> l) + 1
        else:
            buckets = 0
        hbits = np.zeros(self.m + buckets, dtype=np.uint8)
        if self.m:
            hbits[high + np.arange(self.m, dtype=np.int64)] = 1
        self._high = PlainBitVector(pack_bits(hbits), hbits.size)

    @classmethod
    def from_bits(cls, bits) -> "SparseBitVector":
        arr = _as_bits(bits)
        return cls(arr.size, np.flatnonzero(arr).astype(np.int64) + 1)

    # -- core operations ---------------------------------------------------

    @property
    def ones(self) -> int:
        return self.m

    @property
    def zeros(self) -> int:
        return self.n - self.m

    @property
    def positions(self) -> np.ndarray:
        """Sorted 1-based positions of the set bits (do not mutate)."""
        return self._pos

    def __len__(self) -> int:
        return self.n

    def _positions_key(self) -> array:
        key = self._pos_key
        if key is None:
            key = _as_scalar_key(self._pos)
            self._dir_shift = _dir_shift_for(self.n, self.m)
            self._pos_dir = _bucket_dir(self._pos, self.n, self._dir_shift)
            self._pos_key = key
        return key

    def access(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise RangeError(f"position {i} outside [1, {self.n}]")
        key = self._pos_key
        if key is None:
            key = self._positions_key()
        b = i >> self._dir_shift
        d = self._pos_dir
        j = bisect.bisect_left(key, i, d[b], d[b + 1])
        return 1 if j < self.m and key[j] == i else 0

    def rank1(self, i: int) -> int:
        if not 0 <= i <= self.n:
            raise RangeError(f"rank position {i} outside [0, {self.n}]")
        key = self._pos_key
        if key is None:
            key = self._positions_key()
        b = int(i) >> self._dir_shift
        d = self._pos_dir
        return bisect.bisect_right(key, i, d[b], d[b + 1])

    def rank1_fast(self, i: int) -> int:
        """rank1 without the range check; i must already be in [0, n]."""
        key = self._pos_key
        if key is None:
            key = self._positions_key()
        b = i >> self._dir_shift
        d = self._pos_dir
        return bisect.bisect_right(key, i, d[b], d[b + 1])

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def rank(self, b: int, i: int) -> int:
        _check_bit(b)
        return self.rank1(i) if b else self.rank0(i)

    def select1(self, j: int) -> int:
        _check_select_arg(j, self.m, 1)
        return self._positions_key()[j - 1]

    def select0(self, j: int) -> int:
        _check_select_arg(j, self.zeros, 0)
        if self._zero_key is None:
            # zeros strictly before the t-th one (0-based t): pos[t] - 1 - t
            self._zero_key = self._pos - np.arange(1, self.m + 1, dtype=np.int64)
        t = int(np.searchsorted(self._zero_key, j, side="left"))
        return j + t

    def select(self, b: int, j: int) -> int:
        _check_bit(b)
        return self.select1(j) if b else self.select0(j)

    # -- Elias-Fano reference paths (kept for verification) -----------------

    def decode_positions(self) -> np.ndarray:
        """Re-derive the position set from the stored encoding."""
        if self.encoding == "plain":
            return np.flatnonzero(self._plain.to_bits()).astype(np.int64) + 1
        hbits = self._high.to_bits()
        high = np.flatnonzero(hbits).astype(np.int64) - np.arange(self.m, dtype=np.int64)
        return ((high << self._low_width) | self._low) + 1

    def to_bits(self) -> np.ndarray:
        bits = np.zeros(self.n, dtype=np.uint8)
        if self.m:
            bits[self._pos - 1] = 1
        return bits

    def _select1_ef(self, j: int) -> int:
        """select1 answered from low and high directly, no decoded cache."""
        _check_select_arg(j, self.m, 1)
        if self.encoding == "plain":
            return self._plain.select1(j)
        h = self._high.select1(j) - j
        return ((h << self._low_width) | int(self._low[j - 1])) + 1

    def _rank1_ef(self, i: int) -> int:
        """rank1 answered by bucket search on the high part."""
        _check_rank_pos(i, self.n)
        if self.encoding == "plain":
            return self._plain.rank1(i)
        if i == 0 or self.m == 0:
            return 0
        l = self._low_width
        bucket = (i - 1) >> l
        start = self._high.select0(bucket) - bucket if bucket else 0
        end = self._high.select0(bucket + 1) - (bucket + 1)
        lo = (i - 1) & ((1 << l) - 1) if l else 0
        return start + int(np.searchsorted(self._low[start:end], lo, side="right"))

    # -- serialization -----------------------------------------------------

    def write(self, w: Writer) -> None:
        w.u8(TAG_SPARSE)
        w.u64(self.n)
        w.u64(self.m)
        if self.encoding == "plain":
            w.u8(0)
            self._plain.write(w)
        else:
            w.u8(1)
            w.u8(self._low_width)
            w.words(pack_fixed(self._low, self._low_width))
            self._high.write(w)

    @classmethod
    def read(cls, r: Reader) -> "SparseBitVector":
        n = r.u64()
        m = r.u64()
        flavor = r.u8()
        obj = cls.__new__(cls)
        obj.n = n
        obj.m = m
        obj._pos_key = None
        obj._pos_dir = None
        obj._dir_shift = 0
        obj._zero_key = None
        obj._plain = None
        obj._low = None
        obj._high = None
        obj._low_width = 0
        if flavor == 0:
            obj.encoding = "plain"
            if r.u8() != TAG_PLAIN:
                raise FormatError("expected plain payload in sparse fallback")
            obj._plain = PlainBitVector.read(r)
            obj._pos = obj.decode_positions()
        else:
            obj.encoding = "ef"
            obj._low_width = r.u8()
            obj._low = unpack_fixed(r.words(), m, obj._low_width)
            if r.u8() != TAG_PLAIN:
                raise FormatError("expected plain payload for high bits")
            obj._high = PlainBitVector.read(r)
            obj._pos = obj.decode_positions()
        if obj._pos.size != m:
            raise FormatError("sparse bitvector population mismatch")
        return obj

    def to_bytes(self) -> bytes:
        w = Writer()
        self.write(w)
        return w.getvalue()

    def size_in_bytes(self) -> int:
        base = 1 + 8 + 8 + 1
        if self.encoding == "plain":
            return base + self._plain.size_in_bytes()
        low_words = (self.m * self._low_width + 63) // 64
        return base + 1 + 8 + 8 * low_words + self._high.size_in_bytes()


class RleBitVector:
    """Run-length encoded bitvector; cost scales with runs, not length.

    Runs alternate values by construction, so the stored state is the first
    bit, the run start positions and a cumulative count of ones per run.
    The cumulative zeros directory is derived at load time for select0.
    """

    __slots__ = ("n", "k", "first", "ones", "_heads", "_cum1", "_cum0",
                 "_heads_key", "_cum1_key", "_heads_dir", "_dir_shift")

    def __init__(self, n: int, first: int, heads: np.ndarray, cum1: np.ndarray) -> None:
        self.n = n
        self.k = heads.size
        self.first = first
        self._heads = heads
        self._cum1 = cum1
        self._heads_key = None
        self._cum1_key = None
        self._heads_dir = None
        self._dir_shift = 0
        self.ones = int(cum1[-1]) if cum1.size else 0
        if self.k:
            ends = np.concatenate([heads[1:], np.array([n + 1], dtype=np.int64)]) - 1
            self._cum0 = np.concatenate([np.zeros(1, dtype=np.int64), ends - cum1[1:]])
        else:
            self._cum0 = np.zeros(1, dtype=np.int64)

    @classmethod
    def from_bits(cls, bits) -> "RleBitVector":
        arr = _as_bits(bits)
        n = arr.size
        if n == 0:
            return cls(0, 0, np.zeros(0, dtype=np.int64), np.zeros(1, dtype=np.int64))
        change = np.flatnonzero(arr[1:] != arr[:-1]) + 1
        heads0 = np.concatenate([np.zeros(1, dtype=np.int64), change])
        lens = np.diff(np.concatenate([heads0, np.array([n], dtype=np.int64)]))
        first = int(arr[0])
        vals = (np.arange(heads0.size, dtype=np.int64) & 1) ^ first
        cum1 = np.concatenate([np.zeros(1, dtype=np.int64), np.cumsum(lens * vals)])
        return cls(n, first, heads0 + 1, cum1)

    @classmethod
    def from_runs(cls, runs) -> "RleBitVector":
        """Build from [(bit, length), ...]; runs must alternate values."""
        runs = list(runs)
        if not runs:
            return cls(0, 0, np.zeros(0, dtype=np.int64), np.zeros(1, dtype=np.int64))
        vals = np.array([r[0] for r in runs], dtype=np.int64)
        lens = np.array([r[1] for r in runs], dtype=np.int64)
        if np.any((vals != 0) & (vals != 1)):
            raise BuildError("run values must be 0 or 1")
        if np.any(lens < 1):
            raise BuildError("run lengths must be >= 1")
        if np.any(vals[1:] == vals[:-1]):
            raise BuildError("adjacent runs must alternate values")
        heads = np.concatenate([np.ones(1, dtype=np.int64),
                                np.cumsum(lens[:-1]) + 1])
        cum1 = np.concatenate([np.zeros(1, dtype=np.int64), np.cumsum(lens * vals)])
        return cls(int(lens.sum()), int(vals[0]), heads, cum1)

    # -- core operations ---------------------------------------------------

    @property
    def zeros(self) -> int:
        return self.n - self.ones

    @property
    def runs(self) -> int:
        return self.k

    def __len__(self) -> int:
        return self.n

    def _ensure_keys(self) -> array:
        heads = _as_scalar_key(self._heads)
        self._cum1_key = _as_scalar_key(self._cum1)
        self._dir_shift = _dir_shift_for(self.n, self.k)
        self._heads_dir = _bucket_dir(self._heads, self.n, self._dir_shift)
        self._heads_key = heads
        return heads

    def _run_of(self, i: int) -> int:
        heads = self._heads_key
        if heads is None:
            heads = self._ensure_keys()
        b = int(i) >> self._dir_shift
        d = self._heads_dir
        return bisect.bisect_right(heads, i, d[b], d[b + 1])

    def access(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise RangeError(f"position {i} outside [1, {self.n}]")
        return ((self._run_of(i) - 1) & 1) ^ self.first

    def rank1(self, i: int) -> int:
        if not 0 <= i <= self.n:
            raise RangeError(f"rank position {i} outside [0, {self.n}]")
        if i == 0:
            return 0
        i = int(i)
        heads = self._heads_key
        if heads is None:
            heads = self._ensure_keys()
        b = i >> self._dir_shift
        d = self._heads_dir
        t = bisect.bisect_right(heads, i, d[b], d[b + 1])
        r = self._cum1_key[t - 1]
        if ((t - 1) & 1) ^ self.first:
            r += i - heads[t - 1] + 1
        return r

    def rank1_fast(self, i: int) -> int:
        """rank1 without the range check; i must already be in [0, n]."""
        if i == 0:
            return 0
        heads = self._heads_key
        if heads is None:
            heads = self._ensure_keys()
        b = i >> self._dir_shift
        d = self._heads_dir
        t = bisect.bisect_right(heads, i, d[b], d[b + 1])
        r = self._cum1_key[t - 1]
        if ((t - 1) & 1) ^ self.first:
            r += i - heads[t - 1] + 1
        return r

    def rank_pair_fast(self, i1: int, i2: int) -> tuple[int, int]:
        """(rank1(i1), rank1(i2)) without range checks; needs 0 <= i1 <= i2 <= n."""
        if i2 == 0:
            return 0, 0
        heads = self._heads_key
        if heads is None:
            heads = self._ensure_keys()
        cum = self._cum1_key
        first = self.first
        sh = self._dir_shift
        d = self._heads_dir
        b = i2 >> sh
        t = bisect.bisect_right(heads, i2, d[b], d[b + 1])
        r2 = cum[t - 1]
        if ((t - 1) & 1) ^ first:
            r2 += i2 - heads[t - 1] + 1
        if i1 == 0:
            return 0, r2
        b = i1 >> sh
        hi = d[b + 1]
        u = bisect.bisect_right(heads, i1, d[b], t if t < hi else hi)
        r1 = cum[u - 1]
        if ((u - 1) & 1) ^ first:
            r1 += i1 - heads[u - 1] + 1
        return r1, r2

    def rank_quad_fast(self, i1: int, i2: int, i3: int, i4: int):
        """rank1 at four positions in one call, without range checks; needs
        i1 <= i2 <= i4 and i1 <= i3 <= i4, all in [0, n]."""
        if i4 == 0:
            return 0, 0, 0, 0
        heads = self._heads_key
        if heads is None:
            heads = self._ensure_keys()
        cum = self._cum1_key
        first = self.first
        sh = self._dir_shift
        d = self._heads_dir
        br = bisect.bisect_right
        b = i4 >> sh
        t4 = br(heads, i4, d[b], d[b + 1])
        r4 = cum[t4 - 1]
        if ((t4 - 1) & 1) ^ first:
            r4 += i4 - heads[t4 - 1] + 1
        if i3:
            b = i3 >> sh
            hi = d[b + 1]
            t3 = br(heads, i3, d[b], t4 if t4 < hi else hi)
            r3 = cum[t3 - 1]
            if ((t3 - 1) & 1) ^ first:
                r3 += i3 - heads[t3 - 1] + 1
        else:
            r3 = 0
        if i2 == 0:
            return 0, 0, r3, r4
        b = i2 >> sh
        hi = d[b + 1]
        t2 = br(heads, i2, d[b], t4 if t4 < hi else hi)
        r2 = cum[t2 - 1]
        if ((t2 - 1) & 1) ^ first:
            r2 += i2 - heads[t2 - 1] + 1
        if i1 == 0:
            return 0, r2, r3, r4
        b = i1 >> sh
        hi = d[b + 1]
        t1 = br(heads, i1, d[b], t2 if t2 < hi else hi)
        r1 = cum[t1 - 1]
        if ((t1 - 1) & 1) ^ first:
            r1 += i1 - heads[t1 - 1] + 1
        return r1, r2, r3, r4

    def rank1_and_bit(self, i: int) -> tuple[int, int]:
        heads = self._heads_key
        if heads is None:
            heads = self._ensure_keys()
        b = i >> self._dir_shift
        d = self._heads_dir
        t = bisect.bisect_right(heads, i, d[b], d[b + 1])
        bit = ((t - 1) & 1) ^ self.first
        r = self._cum1_key[t - 1]
        if bit:
            r += i - heads[t - 1] + 1
        return r, bit

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def rank(self, b: int, i: int) -> int:
        _check_bit(b)
        return self.rank1(i) if b else self.rank0(i)

    def select1(self, j: int) -> int:
        _check_select_arg(j, self.ones, 1)
        if self._cum1_key is None:
            self._ensure_keys()
        cum = self._cum1_key
        t = bisect.bisect_left(cum, j)
        return self._heads_key[t - 1] + (j - cum[t - 1]) - 1

    def select0(self, j: int) -> int:
        _check_select_arg(j, self.zeros, 0)
        t = int(np.searchsorted(self._cum0, j, side="left"))
        zeros_before = int(self._cum0[t - 1])
        return int(self._heads[t - 1]) + (j - zeros_before) - 1

    def select(self, b: int, j: int) -> int:
        _check_bit(b)
        return self.select1(j) if b else self.select0(j)

    def to_bits(self) -> np.ndarray:
        bits = np.zeros(self.n, dtype=np.uint8)
        ends = np.concatenate([self._heads[1:] - 1, np.array([self.n], dtype=np.int64)])
        for t in range(self.k):
            if ((t & 1) ^ self.first):
                bits[int(self._heads[t]) - 1 : int(ends[t])] = 1
        return bits

    # -- serialization -----------------------------------------------------

    def write(self, w: Writer) -> None:
        w.u8(TAG_RLE)
        w.u64(self.n)
        w.u64(self.k)
        w.u8(self.first)
        w.u64(self.ones)
        SparseBitVector(self.n, self._heads).write(w)
        # cumulative ones are non-decreasing; adding the run index makes the
        # sequence strictly increasing so it reuses the Elias-Fano machinery
        key = self._cum1[1:] + np.arange(1, self.k + 1, dtype=np.int64)
        SparseBitVector(self.ones + self.k, key).write(w)

    @classmethod
    def read(cls, r: Reader) -> "RleBitVector":
        n = r.u64()
        k = r.u64()
        first = r.u8()
        ones = r.u64()
        if r.u8() != TAG_SPARSE:
            raise FormatError("expected sparse payload for run heads")
        heads = SparseBitVector.read(r)
        if r.u8() != TAG_SPARSE:
            raise FormatError("expected sparse payload for cumulative ones")
        cum = SparseBitVector.read(r)
        if heads.m != k or cum.m != k:
            raise FormatError("run directory size mismatch")
        cum1 = np.concatenate([
            np.zeros(1, dtype=np.int64),
            cum.positions - np.arange(1, k + 1, dtype=np.int64),
        ])
        bv = cls(n, first, heads.positions.copy(), cum1)
        if bv.ones != ones:
            raise FormatError("run-length bitvector population mismatch")
        return bv

    def to_bytes(self) -> bytes:
        w = Writer()
        self.write(w)
        return w.getvalue()

    def size_in_bytes(self) -> int:
        return len(self.to_bytes())


def build_plain(bits) -> PlainBitVector:
    return PlainBitVector.from_bits(bits)


def build_sparse(n: int, positions) -> SparseBitVector:
    return SparseBitVector(n, positions)


def build_rle(bits_or_runs) -> RleBitVector:
    """Build from a bit sequence, or from [(bit, length), ...] run pairs."""
    if isinstance(bits_or_runs, (list, tuple)) and bits_or_runs and \
            isinstance(bits_or_runs[0], (list, tuple)):
        return RleBitVector.from_runs(bits_or_runs)
    return RleBitVector.from_bits(bits_or_runs)


def read_bitvector(r: Reader):
    """Read any serialized bitvector, dispatching on its type tag."""
    tag = r.u8()
    if tag == TAG_PLAIN:
        return PlainBitVector.read(r)
    if tag == TAG_SPARSE:
        return SparseBitVector.read(r)
    if tag == TAG_RLE:
        return RleBitVector.read(r)
    raise FormatError(f"unknown bitvector tag {tag}")
