"""Index level that removes runs before building the wavelet tree.

The label sequence is decomposed into maximal runs. A sparse bitmap marks
run start positions, a plain wavelet tree indexes one symbol per run, and a
second sparse bitmap stores run lengths in unary, ordered by the tree's
leaves: each run contributes (length - 1) zeros and a one, so selecting the
t-th one yields the total length of the first t leaf-ordered runs. Element
counts over the original sequence are reconstructed from those three parts.
"""

from __future__ import annotations

import numpy as np

from .bitvec import SparseBitVector, TAG_SPARSE
from .errors import BuildError, FormatError, RangeError
from .serial import Reader, Writer
from .wavelet import WaveletTree


class WtMapLevel:
    """Run-removal level: run markers, run-symbol tree, unary run lengths."""

    __slots__ = ("n", "sigma", "n_runs", "run_starts", "tree", "leaf_run_lengths",
                 "run_offsets")

    def __init__(self, n, sigma, run_starts, tree, leaf_run_lengths, run_offsets):
        self.n = n
        self.sigma = sigma
        self.n_runs = tree.n
        self.run_starts = run_starts
        self.tree = tree
        self.leaf_run_lengths = leaf_run_lengths
        self.run_offsets = run_offsets

    @classmethod
    def build(cls, labels, sigma: int) -> "WtMapLevel":
        labels = np.asarray(labels, dtype=np.int64)
        n = labels.size
        if n:
            change = np.flatnonzero(labels[1:] != labels[:-1]) + 1
            head_idx = np.concatenate([np.zeros(1, dtype=np.int64), change])
            run_syms = labels[head_idx]
            run_lens = np.diff(np.concatenate([head_idx, np.array([n], dtype=np.int64)]))
        else:
            head_idx = np.zeros(0, dtype=np.int64)
            run_syms = np.zeros(0, dtype=np.int64)
            run_lens = np.zeros(0, dtype=np.int64)
        run_starts = SparseBitVector(n, head_idx + 1)
        tree = WaveletTree.build(run_syms, sigma, backend="plain")
        leaf_order = np.argsort(run_syms, kind="stable")
        leaf_ends = np.cumsum(run_lens[leaf_order])
        leaf_run_lengths = SparseBitVector(n, leaf_ends)
        run_freqs = np.bincount(run_syms, minlength=sigma) if run_syms.size else np.zeros(sigma, dtype=np.int64)
        run_offsets = np.zeros(sigma + 1, dtype=np.int64)
        np.cumsum(run_freqs, out=run_offsets[1:])
        level = cls(n, sigma, run_starts, tree, leaf_run_lengths, run_offsets)
        level._check_build(labels, run_syms)
        return level

    def _check_build(self, labels: np.ndarray, run_syms: np.ndarray) -> None:
        """Structural invariants, asserted on every build."""
        if run_syms.size and np.any(run_syms[1:] == run_syms[:-1]):
            raise BuildError("adjacent runs share a symbol")
        if self.leaf_run_lengths.m != self.n_runs:
            raise BuildError("unary length bitmap must hold one bit per run")
        if self.n_runs and self.leaf_run_lengths.select1(self.n_runs) != self.n:
            raise BuildError("unary run lengths do not cover the sequence")
        if self.run_starts.m != self.n_runs:
            raise BuildError("run marker count mismatch")
        if self.n and self.run_starts.select1(1) != 1:
            raise BuildError("first run must start at position 1")
        freqs = np.bincount(labels, minlength=self.sigma) if labels.size else np.zeros(self.sigma, dtype=np.int64)
        expect = np.zeros(self.sigma + 1, dtype=np.int64)
        np.cumsum(freqs, out=expect[1:])
        derived = np.array([self.leaf_offset(c) for c in range(self.sigma + 1)])
        if not np.array_equal(derived, expect):
            raise BuildError("derived leaf offsets disagree with symbol frequencies")

    # -- queries -------------------------------------------------------------

    def _check_symbol(self, c: int) -> None:
        if not 0 <= c < self.sigma:
            raise RangeError(f"symbol {c} outside [0, {self.sigma})")

    def _check_prefix(self, p: int) -> None:
        if not 0 <= p <= self.n:
            raise RangeError(f"prefix {p} outside [0, {self.n}]")

    def expanded_access(self, p: int) -> int:
        if not 1 <= p <= self.n:
            raise RangeError(f"position {p} outside [1, {self.n}]")
        return self.tree.access(self.run_starts.rank1_fast(p))

    def _leaf_cum(self, t: int) -> int:
        """Total length of the first t leaf-ordered runs."""
        return self.leaf_run_lengths.select1(t) if t else 0

    def leaf_offset(self, c: int) -> int:
        """Elements preceding symbol c's leaf block, derived from run data."""
        if not 0 <= c <= self.sigma:
            raise RangeError(f"symbol {c} outside [0, {self.sigma}]")
        return self._leaf_cum(int(self.run_offsets[c]))

    def expanded_rank(self, c: int, p: int) -> int:
        """Occurrences of c in the first p positions of the original sequence."""
        self._check_symbol(c)
        self._check_prefix(p)
        if p == 0:
            return 0
        r = self.run_starts.rank1_fast(p)
        s = self.run_starts.select1(r)
        c_r = self.tree.access(r)
        k = self.tree.rank(c, r)
        full = k - (1 if c_r == c else 0)
        off = int(self.run_offsets[c])
        base = self._leaf_cum(off)
        complete = self._leaf_cum(off + full) - base
        partial = (p - s + 1) if c_r == c else 0
        return complete + partial

    def count_prefixes(self, c: int, positions) -> list[int]:
        """expanded_rank(c, p) for several prefixes, sharing tree descents.

        The rank at the adjacent run prefixes r-1, r tells whether run r is
        a c-run and how many c-runs precede it; the two-prefix form packs
        both adjacent pairs into a single four-way descent.
        """
        self._check_symbol(c)
        for p in positions:
            self._check_prefix(p)
        mark_rank = self.run_starts.rank1_fast
        off = int(self.run_offsets[c])
        base = self._leaf_cum(off)
        lens = self.leaf_run_lengths
        sel_start = self.run_starts.select1
        out = []
        if len(positions) == 2 and positions[0] <= positions[1]:
            p1, p2 = int(positions[0]), int(positions[1])
            r2 = mark_rank(p2)
            if r2 == 0:
                return [0, 0]
            r1 = mark_rank(p1)
            ks = self.tree.rank_quad(c, r1 - 1 if r1 else 0, r1, r2 - 1, r2)
            for p, r, k_prev, k in ((p1, r1, ks[0], ks[1]),
                                    (p2, r2, ks[2], ks[3])):
                if r == 0:
                    out.append(0)
                    continue
                in_c_run = k > k_prev
                full = k - 1 if in_c_run else k
                complete = (lens.select1(off + full) if off + full else 0) - base
                partial = p - sel_start(r) + 1 if in_c_run else 0
                out.append(complete + partial)
            return out
        rank_pair = self.tree.rank_pair
        for p in positions:
            p = int(p)
            r = mark_rank(p)
            if r == 0:
                out.append(0)
                continue
            k_prev, k = rank_pair(c, r - 1, r)
            in_c_run = k > k_prev
            full = k - 1 if in_c_run else k
            complete = (lens.select1(off + full) if off + full else 0) - base
            partial = p - sel_start(r) + 1 if in_c_run else 0
            out.append(complete + partial)
        return out

    def leaf_position(self, c: int, p: int) -> int:
        """Map prefix length p to a prefix of the leaf-ordered sequence."""
        return self.leaf_offset(c) + self.expanded_rank(c, p)

    def leaf_positions(self, c: int, positions) -> list[int]:
        off = self.leaf_offset(c)
        return [off + r for r in self.count_prefixes(c, positions)]

    # -- serialization ---------------------------------------------------------

    def component_sizes(self) -> dict[str, int]:
        return {
            "run_markers": self.run_starts.size_in_bytes(),
            "tree": self.tree.size_in_bytes(),
            "run_lengths": self.leaf_run_lengths.size_in_bytes(),
            "offsets": 8 + 8 * (self.sigma + 1),
        }

    def write(self, w: Writer) -> None:
        w.u64(self.sigma)
        w.u64(self.n)
        w.u64(self.n_runs)
        self.run_starts.write(w)
        self.tree.write(w)
        self.leaf_run_lengths.write(w)
        w.u64_array(self.run_offsets.astype("<u8"))

    @classmethod
    def read(cls, r: Reader) -> "WtMapLevel":
        sigma = r.u64()
        n = r.u64()
        n_runs = r.u64()
        if r.u8() != TAG_SPARSE:
            raise FormatError("expected sparse run markers")
        run_starts = SparseBitVector.read(r)
        tree = WaveletTree.read(r)
        if r.u8() != TAG_SPARSE:
            raise FormatError("expected sparse unary run lengths")
        leaf_run_lengths = SparseBitVector.read(r)
        run_offsets = r.u64_array().view("<u8").astype(np.int64)
        if tree.n != n_runs or run_starts.m != n_runs or run_starts.n != n:
            raise FormatError("run-removal level component mismatch")
        if run_offsets.size != sigma + 1:
            raise FormatError("run offsets size mismatch")
        return cls(n, sigma, run_starts, tree, leaf_run_lengths, run_offsets)

    def to_bytes(self) -> bytes:
        w = Writer()
        self.write(w)
        return w.getvalue()
