"""Index level backed by a run-length wavelet tree over the full sequence.

The tree keeps one run-length bitvector per level, so space scales with the
number of bit runs rather than sequence length. leaf_position maps a prefix
of the sequence into the symbol's contiguous leaf block, which is what lets
one level feed the next in a composed index.
"""

from __future__ import annotations

import numpy as np

from .bitvec import SparseBitVector, TAG_SPARSE
from .errors import FormatError, RangeError
from .serial import Reader, Writer
from .wavelet import WaveletTree

_OFFSETS_ARRAY = 0
_OFFSETS_SPARSE = 1

# leaf offsets switch to a compressed form above this alphabet size
_OFFSETS_ARRAY_MAX_SIGMA = 1 << 16


class WtRleLevel:
    """One composed-index level: run-length wavelet tree plus leaf offsets."""

    __slots__ = ("n", "sigma", "tree", "leaf_offsets")

    def __init__(self, tree: WaveletTree, leaf_offsets: np.ndarray):
        self.tree = tree
        self.n = tree.n
        self.sigma = tree.sigma
        self.leaf_offsets = leaf_offsets

    @classmethod
    def build(cls, labels, sigma: int) -> "WtRleLevel":
        labels = np.asarray(labels, dtype=np.int64)
        tree = WaveletTree.build(labels, sigma, backend="rle")
        freqs = np.bincount(labels, minlength=sigma) if labels.size else np.zeros(sigma, dtype=np.int64)
        offsets = np.zeros(sigma + 1, dtype=np.int64)
        np.cumsum(freqs, out=offsets[1:])
        return cls(tree, offsets)

    # -- queries ---------------------------------------------------------------

    def expanded_access(self, p: int) -> int:
        return self.tree.access(p)

    def expanded_rank(self, c: int, p: int) -> int:
        return self.tree.rank(c, p)

    def leaf_offset(self, c: int) -> int:
        """Elements preceding symbol c's leaf block in leaf order."""
        if not 0 <= c <= self.sigma:
            raise RangeError(f"symbol {c} outside [0, {self.sigma}]")
        return int(self.leaf_offsets[c])

    def leaf_position(self, c: int, p: int) -> int:
        """Map prefix length p to a prefix of the leaf-ordered sequence."""
        return self.leaf_offset(c) + self.tree.rank(c, p)

    def leaf_positions(self, c: int, positions) -> list[int]:
        off = self.leaf_offset(c)
        if len(positions) == 2 and positions[0] <= positions[1]:
            r1, r2 = self.tree.rank_pair(c, positions[0], positions[1])
            return [off + r1, off + r2]
        return [off + r for r in self.tree.rank_many(c, positions)]

    def count_prefixes(self, c: int, positions) -> list[int]:
        if len(positions) == 2 and positions[0] <= positions[1]:
            return list(self.tree.rank_pair(c, positions[0], positions[1]))
        return self.tree.rank_many(c, positions)

    # -- serialization -----------------------------------------------------------

    def component_sizes(self) -> dict[str, int]:
        offsets_words = self.sigma + 1 if self.sigma < _OFFSETS_ARRAY_MAX_SIGMA else 0
        if offsets_words:
            offsets_bytes = 8 + 8 * offsets_words
        else:
            offsets_bytes = len(self._offsets_sparse().to_bytes())
        return {
            "tree": self.tree.size_in_bytes(),
            "offsets": 1 + offsets_bytes,
        }

    def _offsets_sparse(self) -> SparseBitVector:
        # offsets are non-decreasing; shifting by the index makes them strict
        key = self.leaf_offsets + np.arange(self.sigma + 1, dtype=np.int64) + 1
        return SparseBitVector(self.n + self.sigma + 2, key)

    def write(self, w: Writer) -> None:
        w.u64(self.sigma)
        if self.sigma < _OFFSETS_ARRAY_MAX_SIGMA:
            w.u8(_OFFSETS_ARRAY)
            w.u64_array(self.leaf_offsets.astype("<u8"))
        else:
            w.u8(_OFFSETS_SPARSE)
            self._offsets_sparse().write(w)
        self.tree.write(w)

    @classmethod
    def read(cls, r: Reader) -> "WtRleLevel":
        sigma = r.u64()
        tag = r.u8()
        if tag == _OFFSETS_ARRAY:
            offsets = r.u64_array().view("<u8").astype(np.int64)
        elif tag == _OFFSETS_SPARSE:
            if r.u8() != TAG_SPARSE:
                raise FormatError("expected sparse leaf offsets")
            sp = SparseBitVector.read(r)
            offsets = sp.positions - np.arange(sigma + 1, dtype=np.int64) - 1
        else:
            raise FormatError(f"unknown leaf offsets tag {tag}")
        if offsets.size != sigma + 1:
            raise FormatError("leaf offsets size mismatch")
        tree = WaveletTree.read(r)
        if tree.sigma != sigma:
            raise FormatError("leaf offsets and tree disagree on alphabet size")
        return cls(tree, offsets)

    def to_bytes(self) -> bytes:
        w = Writer()
        self.write(w)
        return w.getvalue()
