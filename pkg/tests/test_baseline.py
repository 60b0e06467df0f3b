"""Run-compressed comparison structure: build, access, counting, size."""

import numpy as np
import pytest

from evseq import (
    BaselineSeq,
    EventGrid,
    FormatError,
    GridConfig,
    IndexChain,
    QuerySpec,
    RangeError,
    UnsupportedQueryError,
    expand_to_grid,
    gen_queries,
)
from evseq.chain import QUERY_KINDS
from evseq.serial import Reader

from oracle import NaiveGridOracle, random_grid, table1_grid

E_CODE = 5


def _tiny_grid():
    """One block [a,a,a,b,b,a] with a=1, b=2."""
    cfg = GridConfig(days=1, employees=1, resolution=6, activities=2)
    acts = np.array([1, 1, 1, 2, 2, 1], dtype=np.int32)
    return EventGrid(cfg, acts)


def test_worked_runs():
    bs = BaselineSeq.build(_tiny_grid())
    assert bs.acts.tolist() == [1, 2, 1]
    assert bs.durs.tolist() == [3, 2, 1]
    assert bs.runs == 3


def test_worked_access():
    bs = BaselineSeq.build(_tiny_grid())
    assert bs.access(1, 1, 5) == 2
    assert bs.access(1, 1, 1) == 1
    assert [bs.access(1, 1, t) for t in range(1, 7)] == [1, 1, 1, 2, 2, 1]


def test_all_absent_grid():
    cfg = GridConfig(days=3, employees=2, resolution=5, activities=4)
    bs = BaselineSeq.build(expand_to_grid([], cfg))
    assert bs.runs == 6  # one run per block
    assert bs.acts.tolist() == [0] * 6
    assert bs.durs.tolist() == [5] * 6
    assert bs.count_act_days(0, 1, 3) == 30
    assert bs.count_act_days(3, 1, 3) == 0


def test_alternating_grid():
    cfg = GridConfig(days=1, employees=1, resolution=40, activities=2)
    acts = np.tile([1, 2], 20).astype(np.int32)
    bs = BaselineSeq.build(EventGrid(cfg, acts))
    assert bs.runs == cfg.n  # no compression
    assert bs.count_act_days(1, 1, 1) == 20


def test_runs_break_at_block_boundaries():
    # same activity across a block boundary still starts a new run
    cfg = GridConfig(days=1, employees=2, resolution=3, activities=2)
    bs = BaselineSeq.build(EventGrid(cfg, np.full(6, 2, dtype=np.int32)))
    assert bs.runs == 2
    assert bs.durs.tolist() == [3, 3]
    assert bs.block_starts.positions.tolist() == [1, 2]


def test_marker_invariants(rng):
    for _ in range(6):
        grid = random_grid(rng)
        cfg = grid.config
        bs = BaselineSeq.build(grid)
        assert int(bs.durs.sum()) == cfg.n
        assert bs.day_starts.rank1(bs.runs) == cfg.days
        assert bs.block_starts.rank1(bs.runs) == cfg.days * cfg.employees
        # adjacent runs inside one block differ in activity
        for d in range(1, cfg.days + 1):
            for e in range(1, cfg.employees + 1):
                lo, hi = bs._block_run_range(d, e)
                blk = bs.acts[lo:hi]
                assert np.all(blk[1:] != blk[:-1])
                assert int(bs.durs[lo:hi].sum()) == cfg.resolution


def test_worked_counts():
    bs = BaselineSeq.build(table1_grid())
    assert bs.count_act_emp_days(E_CODE, 2, 1, 2) == 2
    assert bs.count_act_days(E_CODE, 1, 3) == 4
    assert bs.count_act_days(E_CODE, 1, 2) == 3


def test_count_rejects_access_kind():
    bs = BaselineSeq.build(table1_grid())
    spec = QuerySpec("ACC", day=1, employee=1, time=1)
    with pytest.raises(UnsupportedQueryError):
        bs.count(spec)
    assert bs.answer(spec) == 3  # answer() routes ACC to access()


def test_range_errors():
    bs = BaselineSeq.build(table1_grid())
    with pytest.raises(RangeError):
        bs.access(4, 1, 1)
    with pytest.raises(RangeError):
        bs.access(1, 3, 1)
    with pytest.raises(RangeError):
        bs.access(1, 1, 4)
    with pytest.raises(RangeError):
        bs.count_act_days(6, 1, 1)
    with pytest.raises(RangeError):
        bs.count_act_days(1, 2, 1)
    with pytest.raises(RangeError):
        bs.count_act_emp_days(1, 0, 1, 1)


def test_three_way_agreement(rng):
    for _ in range(5):
        grid = random_grid(rng)
        oracle = NaiveGridOracle(grid)
        bs = BaselineSeq.build(grid)
        chain = IndexChain.build(grid, "wtrle")
        for kind in QUERY_KINDS:
            specs = gen_queries(kind, 30, grid.config,
                                seed=int(rng.integers(1 << 30)))
            expect = oracle.answer_many(specs)
            assert [bs.answer(s) for s in specs] == expect.tolist()
            assert [chain.answer(s) for s in specs] == expect.tolist()


def test_access_exhaustive(rng):
    grid = random_grid(rng, days=3, employees=2, resolution=12)
    cfg = grid.config
    bs = BaselineSeq.build(grid)
    for d in range(1, cfg.days + 1):
        for e in range(1, cfg.employees + 1):
            for t in range(1, cfg.resolution + 1):
                assert bs.access(d, e, t) == grid.cell(d, e, t)


def test_size_linear_in_runs(rng):
    cfg = GridConfig(days=1, employees=1, resolution=10_000, activities=4)
    sizes = []
    for period in (1000, 100, 10, 2):
        acts = np.zeros(cfg.n, dtype=np.int32)
        acts[:: period] = 1  # denser toggles -> more runs
        pattern = np.tile(np.repeat([1, 2], period), cfg.n // (2 * period) + 1)
        bs = BaselineSeq.build(EventGrid(cfg, pattern[: cfg.n].astype(np.int32)))
        sizes.append((bs.runs, len(bs.to_bytes())))
    runs, raw = zip(*sizes)
    assert list(raw) == sorted(raw) and len(set(raw)) == len(raw)
    # roughly linear: bytes per run settle once runs dominate fixed overhead
    per_run = [(raw[i] - raw[0]) / (runs[i] - runs[0]) for i in (2, 3)]
    assert 0.5 * per_run[1] <= per_run[0] <= 2 * per_run[1]


def test_serialization_round_trip(rng):
    grid = random_grid(rng)
    bs = BaselineSeq.build(grid)
    blob = bs.to_bytes()
    back = BaselineSeq.read(Reader(blob))
    assert back.config == bs.config
    assert np.array_equal(back.acts, bs.acts)
    assert np.array_equal(back.durs, bs.durs)
    assert back.to_bytes() == blob
    specs = gen_queries("C1", 20, grid.config, seed=3)
    assert [back.answer(s) for s in specs] == [bs.answer(s) for s in specs]


def test_read_rejects_bad_coverage():
    bs = BaselineSeq.build(_tiny_grid())
    blob = bytearray(bs.to_bytes())
    # durations are stored minus one in fixed-width words right before the
    # two marker bitmaps; flipping the first duration bit breaks coverage
    tail = len(blob) - len(bs.day_starts.to_bytes()) - len(bs.block_starts.to_bytes())
    blob[tail - 8] ^= 1
    with pytest.raises(FormatError):
        BaselineSeq.read(Reader(bytes(blob)))
    with pytest.raises(FormatError):
        BaselineSeq.read(Reader(bs.to_bytes()[:-2]))
