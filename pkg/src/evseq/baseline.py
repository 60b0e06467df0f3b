"""Run-compressed reference representation of the grid.

Activities and durations are stored per run, with runs broken at every
(day, employee) block boundary. Two sparse bitmaps over the run index space
mark the first run of each day and of each block, so counting walks only
the runs of the touched days. No auxiliary counting structure exists: every
count is a traversal, which is the point of keeping this representation
around as a comparison target.
"""

from __future__ import annotations

import numpy as np

from .bitvec import SparseBitVector, TAG_SPARSE
from .errors import FormatError, RangeError, UnsupportedQueryError
from .events import EventGrid, GridConfig
from .serial import Reader, Writer, pack_fixed, unpack_fixed


class BaselineSeq:
    """Per-run activity and duration arrays plus day / block run markers."""

    __slots__ = ("config", "acts", "durs", "day_starts", "block_starts", "_ends")

    def __init__(self, config: GridConfig, acts, durs, day_starts, block_starts):
        self.config = config
        self.acts = acts
        self.durs = durs
        self.day_starts = day_starts
        self.block_starts = block_starts
        self._ends = np.cumsum(durs)

    @classmethod
    def build(cls, grid: EventGrid) -> "BaselineSeq":
        cfg = grid.config
        n = cfg.n
        flat = grid.activities
        r = cfg.resolution
        idx = np.arange(1, n, dtype=np.int64)
        change = (flat[1:] != flat[:-1]) | (idx % r == 0)
        head_idx = np.concatenate([np.zeros(1, dtype=np.int64),
                                   np.flatnonzero(change) + 1])
        acts = flat[head_idx].astype(np.int32)
        durs = np.diff(np.concatenate([head_idx, np.array([n], dtype=np.int64)]))
        block_of_run = head_idx // r
        first_of_block = np.concatenate([np.ones(1, dtype=bool),
                                         block_of_run[1:] != block_of_run[:-1]])
        block_runs = np.flatnonzero(first_of_block) + 1
        day_of_run = block_of_run // cfg.employees
        first_of_day = np.concatenate([np.ones(1, dtype=bool),
                                       day_of_run[1:] != day_of_run[:-1]])
        day_runs = np.flatnonzero(first_of_day) + 1
        k = acts.size
        return cls(cfg, acts, durs,
                   SparseBitVector(k, day_runs),
                   SparseBitVector(k, block_runs))

    @property
    def runs(self) -> int:
        return self.acts.size

    # -- run ranges -------------------------------------------------------------

    def _block_run_range(self, day: int, employee: int) -> tuple[int, int]:
        """Half-open run index range [lo, hi) of one (day, employee) block."""
        cfg = self.config
        b = (day - 1) * cfg.employees + employee
        lo = self.block_starts.select1(b) - 1
        nblocks = cfg.days * cfg.employees
        hi = self.block_starts.select1(b + 1) - 1 if b < nblocks else self.runs
        return lo, hi

    def _day_run_range(self, d1: int, d2: int) -> tuple[int, int]:
        lo = self.day_starts.select1(d1) - 1
        hi = self.day_starts.select1(d2 + 1) - 1 if d2 < self.config.days else self.runs
        return lo, hi

    # -- queries ------------------------------------------------------------------

    def access(self, day: int, employee: int, time: int) -> int:
        """Activity at one cell, by scanning the block's durations."""
        cfg = self.config
        if not 1 <= day <= cfg.days:
            raise RangeError(f"day {day} outside [1, {cfg.days}]")
        if not 1 <= employee <= cfg.employees:
            raise RangeError(f"employee {employee} outside [1, {cfg.employees}]")
        if not 1 <= time <= cfg.resolution:
            raise RangeError(f"time {time} outside [1, {cfg.resolution}]")
        lo, hi = self._block_run_range(day, employee)
        covered = 0
        for r in range(lo, hi):
            covered += int(self.durs[r])
            if time <= covered:
                return int(self.acts[r])
        raise FormatError("block durations do not cover the day")

    def _check_count_args(self, a: int, d1: int, d2: int, employee=None) -> None:
        cfg = self.config
        if not 0 <= a <= cfg.activities:
            raise RangeError(f"activity {a} outside [0, {cfg.activities}]")
        if not (1 <= d1 <= d2 <= cfg.days):
            raise RangeError(f"bad day range [{d1}, {d2}]")
        if employee is not None and not 1 <= employee <= cfg.employees:
            raise RangeError(f"employee {employee} outside [1, {cfg.employees}]")

    def count_act_days(self, a: int, d1: int, d2: int) -> int:
        """Instants of activity a over all employees in days d1..d2."""
        self._check_count_args(a, d1, d2)
        lo, hi = self._day_run_range(d1, d2)
        sel = self.acts[lo:hi] == a
        return int(self.durs[lo:hi][sel].sum())

    def count_act_emp_days(self, a: int, employee: int, d1: int, d2: int) -> int:
        """Instants of activity a for one employee in days d1..d2."""
        self._check_count_args(a, d1, d2, employee)
        total = 0
        for d in range(d1, d2 + 1):
            lo, hi = self._block_run_range(d, employee)
            sel = self.acts[lo:hi] == a
            total += int(self.durs[lo:hi][sel].sum())
        return total

    def count(self, spec) -> int:
        """Answer a counting query; access queries are rejected here."""
        kind = spec.kind
        if kind == "ACC":
            raise UnsupportedQueryError("baseline counting cannot answer access queries")
        if kind == "C1":
            return self.count_act_emp_days(spec.activity, spec.employee, spec.day, spec.day)
        if kind == "C1A":
            return self.count_act_days(spec.activity, spec.day, spec.day)
        if kind == "CR":
            return self.count_act_emp_days(spec.activity, spec.employee, spec.day, spec.day2)
        if kind == "CRA":
            return self.count_act_days(spec.activity, spec.day, spec.day2)
        raise UnsupportedQueryError(f"unknown query kind {kind!r}")

    def answer(self, spec) -> int:
        if spec.kind == "ACC":
            return self.access(spec.day, spec.employee, spec.time)
        return self.count(spec)

    # -- serialization ---------------------------------------------------------------

    @property
    def _dur_width(self) -> int:
        return (self.config.resolution - 1).bit_length()

    @property
    def _act_width(self) -> int:
        # labels run 0 (absent) through activities inclusive
        return max(1, self.config.activities.bit_length())

    def component_sizes(self) -> dict[str, int]:
        act_words = (self.runs * self._act_width + 63) // 64
        dur_words = (self.runs * self._dur_width + 63) // 64
        return {
            "activities": 1 + 8 + 8 + 8 * act_words,
            "durations": 1 + 8 + 8 * dur_words,
            "day_marks": self.day_starts.size_in_bytes(),
            "block_marks": self.block_starts.size_in_bytes(),
        }

    def write(self, w: Writer) -> None:
        self.config.write(w)
        w.u8(self._act_width)
        w.u8(self._dur_width)
        w.u64(self.runs)
        w.words(pack_fixed(self.acts.astype(np.int64), self._act_width))
        w.words(pack_fixed(self.durs - 1, self._dur_width))
        self.day_starts.write(w)
        self.block_starts.write(w)

    @classmethod
    def read(cls, r: Reader) -> "BaselineSeq":
        config = GridConfig.read(r)
        act_width = r.u8()
        dur_width = r.u8()
        count = r.u64()
        acts = unpack_fixed(r.words(), count, act_width).astype(np.int32)
        if act_width != max(1, config.activities.bit_length()):
            raise FormatError("baseline activity width mismatch")
        if acts.size and int(acts.max()) > config.activities:
            raise FormatError("baseline activity label out of range")
        durs = unpack_fixed(r.words(), count, dur_width) + 1
        if r.u8() != TAG_SPARSE:
            raise FormatError("expected sparse day marks")
        day_starts = SparseBitVector.read(r)
        if r.u8() != TAG_SPARSE:
            raise FormatError("expected sparse block marks")
        block_starts = SparseBitVector.read(r)
        bs = cls(config, acts, durs, day_starts, block_starts)
        total = int(bs._ends[-1]) if count else 0
        if total != config.n:
            raise FormatError("baseline durations do not cover the grid")
        return bs

    def to_bytes(self) -> bytes:
        w = Writer()
        self.write(w)
        return w.getvalue()
