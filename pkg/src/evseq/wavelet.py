"""Balanced wavelet tree over integer symbols, stored level-wise.

The alphabet interval [a, b) splits at a + ceil((b-a)/2); the lower half
goes left. Intervals of size one keep emitting zero bits down to the last
level, so every level holds exactly n bits and a node's elements occupy the
same positional range on every level below it. That keeps node boundaries
arithmetic: a node spanning [lo, hi) has its left child at [lo, lo+z) and
its right child at [lo+z, hi), where z counts the zeros inside the node.

Two bitvector backends are supported: "plain" and "rle". Only access, rank
and range counting are provided; select over the sequence is not.
"""

from __future__ import annotations

import numpy as np

from .bitvec import PlainBitVector, RleBitVector, read_bitvector
from .errors import BuildError, DomainError, FormatError, RangeError
from .serial import Reader, Writer, pack_bits

BACKENDS = ("plain", "rle")


def ceil_log2(x: int) -> int:
    if x <= 1:
        return 0
    return (x - 1).bit_length()


def _split(a: int, b: int) -> int:
    return a + (b - a + 1) // 2


class WaveletTree:
    """Sequence of symbols 0..sigma-1 supporting access / rank / count_range."""

    __slots__ = ("n", "sigma", "levels", "backend", "_bvs", "_paths",
                 "_lo", "_r1lo", "_left", "_right", "_leaf", "_bottom_leaf",
                 "_rank_and_bit")

    def __init__(self, n, sigma, backend, bvs):
        self.n = n
        self.sigma = sigma
        self.levels = ceil_log2(sigma)
        self.backend = backend
        self._bvs = bvs
        self._build_tables()

    # -- construction --------------------------------------------------------

    @classmethod
    def build(cls, seq, sigma: int, backend: str = "plain") -> "WaveletTree":
        if sigma < 1:
            raise BuildError("alphabet size must be >= 1")
        if backend not in BACKENDS:
            raise BuildError(f"unknown backend {backend!r}")
        seq = np.asarray(seq, dtype=np.int64)
        if seq.ndim != 1:
            raise BuildError("sequence must be one-dimensional")
        n = seq.size
        if n and (int(seq.min()) < 0 or int(seq.max()) >= sigma):
            raise BuildError(f"symbol outside alphabet [0, {sigma})")
        levels = ceil_log2(sigma)
        node_of, bit_of = cls._symbol_tables(sigma, levels)
        bvs = []
        cur = seq
        for l in range(levels):
            bits = bit_of[l][cur]
            if backend == "plain":
                bvs.append(PlainBitVector(pack_bits(bits), n))
            else:
                bvs.append(RleBitVector.from_bits(bits))
            if l + 1 < levels:
                cur = cur[np.argsort(node_of[l + 1][cur], kind="stable")]
        return cls(n, sigma, backend, bvs)

    @staticmethod
    def _symbol_tables(sigma: int, levels: int):
        """Per-level node index and branch bit for every symbol."""
        node_of = np.zeros((levels + 1, sigma), dtype=np.int64)
        bit_of = np.zeros((levels, sigma), dtype=np.int64)
        nodes = [(0, sigma)]
        for l in range(levels):
            nxt = []
            for a, b in nodes:
                if b - a == 1:
                    node_of[l + 1, a] = len(nxt)
                    nxt.append((a, b))
                else:
                    mid = _split(a, b)
                    bit_of[l, mid:b] = 1
                    node_of[l + 1, a:mid] = len(nxt)
                    nxt.append((a, mid))
                    node_of[l + 1, mid:b] = len(nxt)
                    nxt.append((mid, b))
            nodes = nxt
        return node_of, bit_of

    def _build_tables(self) -> None:
        """Node offset tables and per-symbol descent paths, derived from
        the level bitvectors alone so the load path shares this code."""
        levels = self.levels
        self._lo = []
        self._r1lo = []
        self._left = []
        self._right = []
        self._leaf = []
        self._rank_and_bit = [bv.rank1_and_bit for bv in self._bvs]
        # entries per level: (a, b, lo, count)
        entries = [(0, self.sigma, 1, self.n)]
        for l in range(levels):
            bv = self._bvs[l]
            lo_t, r1_t, left_t, right_t, leaf_t = [], [], [], [], []
            nxt = []
            for a, b, lo, cnt in entries:
                r1lo = bv.rank1(lo - 1)
                lo_t.append(lo)
                r1_t.append(r1lo)
                if b - a == 1:
                    leaf_t.append(a)
                    left_t.append(len(nxt))
                    right_t.append(-1)
                    nxt.append((a, b, lo, cnt))
                else:
                    leaf_t.append(-1)
                    ones = bv.rank1(lo - 1 + cnt) - r1lo
                    z = cnt - ones
                    mid = _split(a, b)
                    left_t.append(len(nxt))
                    nxt.append((a, mid, lo, z))
                    right_t.append(len(nxt))
                    nxt.append((mid, b, lo + z, ones))
            self._lo.append(lo_t)
            self._r1lo.append(r1_t)
            self._left.append(left_t)
            self._right.append(right_t)
            self._leaf.append(leaf_t)
            entries = nxt
        self._bottom_leaf = [a for a, _, _, _ in entries]
        # per-symbol paths for rank:
        # (paired rank, quad rank, scalar rank, branch bit, lo-1, rank1(lo-1))
        node_of, bit_of = self._symbol_tables(self.sigma, levels)
        paths = []
        for c in range(self.sigma):
            path = []
            for l in range(levels):
                nid = int(node_of[l, c])
                if self._leaf[l][nid] >= 0:
                    break
                bv = self._bvs[l]
                path.append((bv.rank_pair_fast, bv.rank_quad_fast,
                             bv.rank1_fast, int(bit_of[l, c]),
                             self._lo[l][nid] - 1, self._r1lo[l][nid]))
            paths.append(tuple(path))
        self._paths = paths

    # -- queries --------------------------------------------------------------

    def __len__(self) -> int:
        return self.n

    def _check_symbol(self, c: int) -> None:
        if not 0 <= c < self.sigma:
            raise DomainError(f"symbol {c} outside alphabet [0, {self.sigma})")

    def access(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise RangeError(f"position {i} outside [1, {self.n}]")
        if self.levels == 0:
            return 0
        nid = 0
        leaf = self._leaf
        lo_t = self._lo
        r1_t = self._r1lo
        for l in range(self.levels):
            s = leaf[l][nid]
            if s >= 0:
                return s
            r1q, b = self._rank_and_bit[l](lo_t[l][nid] - 1 + i)
            dr = r1q - r1_t[l][nid]
            if b:
                i = dr
                nid = self._right[l][nid]
            else:
                i -= dr
                nid = self._left[l][nid]
        return self._bottom_leaf[nid]

    def rank(self, c: int, i: int) -> int:
        """Occurrences of symbol c in positions 1..i."""
        self._check_symbol(c)
        if not 0 <= i <= self.n:
            raise RangeError(f"rank position {i} outside [0, {self.n}]")
        for _pair, _quad, rank1, b, lom1, r1lo in self._paths[c]:
            if i == 0:
                return 0
            dr = rank1(lom1 + i) - r1lo
            i = dr if b else i - dr
        return i

    def rank_pair(self, c: int, p1: int, p2: int) -> tuple[int, int]:
        """(rank(c, p1), rank(c, p2)) sharing one descent; needs p1 <= p2."""
        self._check_symbol(c)
        if not 0 <= p1 <= p2 <= self.n:
            raise RangeError(
                f"bad prefix pair ({p1}, {p2}) for length {self.n}")
        i1, i2 = int(p1), int(p2)
        for pair, _quad, _rank1, b, lom1, r1lo in self._paths[c]:
            if i2 == 0:
                return 0, 0
            r1, r2 = pair(lom1 + i1, lom1 + i2)
            if b:
                i1 = r1 - r1lo
                i2 = r2 - r1lo
            else:
                i1 -= r1 - r1lo
                i2 -= r2 - r1lo
        return i1, i2

    def rank_quad(self, c: int, p1: int, p2: int, p3: int, p4: int):
        """rank(c, ·) at four prefixes sharing one descent; needs
        p1 <= p2 <= p4 and p1 <= p3 <= p4 (two ordered endpoint pairs)."""
        self._check_symbol(c)
        if not (0 <= p1 <= p2 <= p4 <= self.n and p1 <= p3 <= p4):
            raise RangeError(
                f"bad prefix quad ({p1}, {p2}, {p3}, {p4}) for length {self.n}")
        i1, i2, i3, i4 = int(p1), int(p2), int(p3), int(p4)
        for _pair, quad, _rank1, b, lom1, r1lo in self._paths[c]:
            if i4 == 0:
                return 0, 0, 0, 0
            r1, r2, r3, r4 = quad(lom1 + i1, lom1 + i2, lom1 + i3, lom1 + i4)
            if b:
                i1 = r1 - r1lo
                i2 = r2 - r1lo
                i3 = r3 - r1lo
                i4 = r4 - r1lo
            else:
                i1 -= r1 - r1lo
                i2 -= r2 - r1lo
                i3 -= r3 - r1lo
                i4 -= r4 - r1lo
        return i1, i2, i3, i4

    def rank_many(self, c: int, positions) -> list[int]:
        """rank(c, p) for several prefixes sharing one descent."""
        self._check_symbol(c)
        out = [int(p) for p in positions]
        for p in out:
            if not 0 <= p <= self.n:
                raise RangeError(f"rank position {p} outside [0, {self.n}]")
        for _pair, _quad, rank1, b, lom1, r1lo in self._paths[c]:
            alive = False
            for idx, i in enumerate(out):
                if i == 0:
                    continue
                alive = True
                dr = rank1(lom1 + i) - r1lo
                out[idx] = dr if b else i - dr
            if not alive:
                break
        return out

    def count_range(self, c: int, left: int, right: int) -> int:
        """Occurrences of c in positions left..right (empty when left = right+1)."""
        if not (1 <= left <= right + 1 and right <= self.n):
            raise RangeError(f"bad range [{left}, {right}] for length {self.n}")
        lo, hi = self.rank_many(c, (left - 1, right))
        return hi - lo

    def leaf_order_permutation(self) -> np.ndarray:
        """Positions (1-based) of the sequence stably sorted by symbol.

        Quadratic in n; intended for verification on small inputs.
        """
        seq = np.array([self.access(i) for i in range(1, self.n + 1)])
        return np.argsort(seq, kind="stable") + 1

    # -- serialization ----------------------------------------------------------

    def write(self, w: Writer) -> None:
        w.u64(self.sigma)
        w.u64(self.n)
        w.u8(1 if self.backend == "plain" else 2)
        for bv in self._bvs:
            bv.write(w)

    @classmethod
    def read(cls, r: Reader) -> "WaveletTree":
        sigma = r.u64()
        n = r.u64()
        tag = r.u8()
        if tag not in (1, 2):
            raise FormatError(f"unknown wavelet backend tag {tag}")
        backend = "plain" if tag == 1 else "rle"
        bvs = []
        for _ in range(ceil_log2(sigma)):
            bv = read_bitvector(r)
            if bv.n != n:
                raise FormatError("wavelet level length mismatch")
            bvs.append(bv)
        return cls(n, sigma, backend, bvs)

    def to_bytes(self) -> bytes:
        w = Writer()
        self.write(w)
        return w.getvalue()

    def size_in_bytes(self) -> int:
        return 8 + 8 + 1 + sum(bv.size_in_bytes() for bv in self._bvs)
