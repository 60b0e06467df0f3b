"""Brute-force reference implementations used across the test suite.

Everything here is a literal definitional scan (or an obviously correct
cube of prefix sums for batch checking). Test expectations for the library
are computed here first, then asserted against the real structures.
"""

from __future__ import annotations

import numpy as np

from evseq import EventGrid, GridConfig, expand_to_grid


# -- bit sequences ---------------------------------------------------------------

def bits_of(text) -> list[int]:
    if isinstance(text, str):
        return [int(c) for c in text]
    return [int(b) for b in text]


def naive_rank(bits, b: int, i: int) -> int:
    """Occurrences of bit b in the first i positions (1-based prefix)."""
    return sum(1 for x in bits[:i] if x == b)


def naive_select(bits, b: int, j: int):
    """Position of the j-th occurrence of b, or None."""
    seen = 0
    for pos, x in enumerate(bits, start=1):
        if x == b:
            seen += 1
            if seen == j:
                return pos
    return None


def naive_seq_rank(seq, c, i: int) -> int:
    return sum(1 for x in seq[:i] if x == c)


def naive_run_heads(seq) -> list[int]:
    """1-based start positions of maximal equal-symbol runs."""
    return [i + 1 for i in range(len(seq)) if i == 0 or seq[i] != seq[i - 1]]


# -- grids ----------------------------------------------------------------------

class NaiveGridOracle:
    """Answers every query kind by scanning the dense grid."""

    def __init__(self, grid: EventGrid):
        self.grid = grid
        cfg = grid.config
        self.cube = grid.activities.reshape(cfg.days, cfg.employees,
                                            cfg.resolution)
        counts = np.zeros((cfg.activities + 1, cfg.days, cfg.employees),
                          dtype=np.int64)
        for a in range(cfg.activities + 1):
            counts[a] = (self.cube == a).sum(axis=2)
        self.day_cum = np.zeros((cfg.activities + 1, cfg.days + 1,
                                 cfg.employees), dtype=np.int64)
        np.cumsum(counts, axis=1, out=self.day_cum[:, 1:, :])

    def answer(self, spec) -> int:
        """Literal triple-loop scan; slow, definitional."""
        cfg = self.grid.config
        if spec.kind == "ACC":
            return int(self.cube[spec.day - 1, spec.employee - 1, spec.time - 1])
        d1, d2 = spec.day, spec.last_day
        if spec.kind in ("C1", "CR"):
            emps = [spec.employee]
        else:
            emps = range(1, cfg.employees + 1)
        total = 0
        for d in range(d1, d2 + 1):
            for e in emps:
                for t in range(1, cfg.resolution + 1):
                    if self.cube[d - 1, e - 1, t - 1] == spec.activity:
                        total += 1
        return total

    def answer_fast(self, spec) -> int:
        """Same answers from the prefix cube; used for bulk comparison."""
        if spec.kind == "ACC":
            return int(self.cube[spec.day - 1, spec.employee - 1, spec.time - 1])
        a, d1, d2 = spec.activity, spec.day, spec.last_day
        seg = self.day_cum[a, d2, :] - self.day_cum[a, d1 - 1, :]
        if spec.kind in ("C1", "CR"):
            return int(seg[spec.employee - 1])
        return int(seg.sum())

    def answer_many(self, specs) -> np.ndarray:
        return np.array([self.answer_fast(s) for s in specs], dtype=np.int64)

    def self_check(self, specs) -> None:
        for s in specs:
            literal = self.answer(s)
            fast = self.answer_fast(s)
            assert literal == fast, (s, literal, fast)


def random_grid(rng: np.random.Generator, days=None, employees=None,
                resolution=None, activities=None, mean_run=None) -> EventGrid:
    """Run-structured random grid; bounds follow the small-instance regime."""
    d = days or int(rng.integers(1, 11))
    e = employees or int(rng.integers(1, 7))
    r = resolution or int(rng.integers(1, 41))
    a = activities or int(rng.integers(1, 9))
    cfg = GridConfig(d, e, r, a)
    mean = mean_run or float(rng.choice([1.0, 5.0, 50.0]))
    acts = np.zeros(cfg.n, dtype=np.int32)
    i = 0
    while i < cfg.n:
        length = int(min(rng.geometric(1.0 / mean), cfg.n - i))
        acts[i : i + length] = int(rng.integers(0, a + 1))
        i += length
    return EventGrid(cfg, acts)


# -- the worked example ---------------------------------------------------------
# Nine sparse entries over a 3-day, 2-employee grid with three instants per
# day; activities A..E coded 1..5, times assigned by row order within each
# (day, employee) block.

TABLE1_CONFIG = GridConfig(days=3, employees=2, resolution=3, activities=5)

TABLE1_ROWS = [
    (1, 1, 1, 3),  # C
    (1, 1, 2, 5),  # E
    (1, 1, 3, 1),  # A
    (1, 2, 1, 5),  # E
    (1, 2, 2, 2),  # B
    (2, 1, 1, 1),  # A
    (2, 1, 2, 3),  # C
    (2, 2, 1, 5),  # E
    (3, 2, 1, 5),  # E
]

TABLE1_NAMES = {1: "A", 2: "B", 3: "C", 4: "D", 5: "E"}

# (day, employee, activity code) triples of the real entries, stably sorted
# by employee after the stable sort by activity
TABLE1_EMP_REORDER = [
    (1, 1, 1), (2, 1, 1),            # A runs for employee 1
    (1, 1, 3), (2, 1, 3),            # C
    (1, 1, 5),                       # E
    (1, 2, 2),                       # B for employee 2
    (1, 2, 5), (2, 2, 5), (3, 2, 5), # E
]


def table1_grid() -> EventGrid:
    return expand_to_grid(TABLE1_ROWS, TABLE1_CONFIG)
