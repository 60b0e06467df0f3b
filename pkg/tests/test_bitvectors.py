"""Bitvector correctness against definitional scans, plus property suites."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evseq import FormatError, RangeError
from evseq.bitvec import (PlainBitVector, RleBitVector, SparseBitVector,
                          read_bitvector)
from evseq.serial import Reader, Writer

from oracle import bits_of, naive_rank, naive_select


def _variants(bits):
    arr = np.asarray(bits, dtype=np.uint8)
    pos = np.flatnonzero(arr) + 1
    return {
        "plain": PlainBitVector.from_bits(arr),
        "sparse": SparseBitVector(arr.size, pos),
        "rle": RleBitVector.from_bits(arr),
    }


def _check_against_naive(bv, bits):
    n = len(bits)
    ones = sum(bits)
    assert len(bv) == n
    assert bv.ones == ones
    assert bv.zeros == n - ones
    assert bv.rank1(0) == 0
    assert bv.rank0(0) == 0
    for i in range(1, n + 1):
        assert bv.access(i) == bits[i - 1]
        assert bv.rank1(i) == naive_rank(bits, 1, i)
        assert bv.rank0(i) == naive_rank(bits, 0, i)
    for j in range(1, ones + 1):
        assert bv.select1(j) == naive_select(bits, 1, j)
    for j in range(1, n - ones + 1):
        assert bv.select0(j) == naive_select(bits, 0, j)


WORKED = bits_of("101100")


def test_worked_rank_example():
    # first four positions of 101100 hold three ones
    assert naive_rank(WORKED, 1, 4) == 3
    for bv in _variants(WORKED).values():
        assert bv.rank1(4) == 3


def test_worked_select_example():
    # second one of 101100 sits at position 3
    assert naive_select(WORKED, 1, 2) == 3
    for bv in _variants(WORKED).values():
        assert bv.select1(2) == 3


def test_rank_of_zero_prefix_is_zero():
    for bv in _variants(WORKED).values():
        assert bv.rank1(0) == 0
        assert bv.rank0(0) == 0


@pytest.mark.parametrize("pattern", [
    "0", "1", "01", "10", "0000000", "1111111",
    "101100", "1" * 64, "0" * 64 + "1", "10" * 100,
    "1" * 63 + "0" + "1" * 65,
])
def test_patterns_all_backends(pattern):
    bits = bits_of(pattern)
    for bv in _variants(bits).values():
        _check_against_naive(bv, bits)


def test_random_dense(rng):
    for _ in range(10):
        n = int(rng.integers(1, 400))
        bits = rng.integers(0, 2, n).astype(np.uint8).tolist()
        for bv in _variants(bits).values():
            _check_against_naive(bv, bits)


def test_random_sparse(rng):
    for _ in range(10):
        n = int(rng.integers(50, 800))
        bits = (rng.random(n) < 0.03).astype(np.uint8).tolist()
        for bv in _variants(bits).values():
            _check_against_naive(bv, bits)


def test_random_runny(rng):
    for _ in range(10):
        n = int(rng.integers(50, 800))
        bits = []
        val = int(rng.integers(0, 2))
        while len(bits) < n:
            bits.extend([val] * int(rng.geometric(0.08)))
            val ^= 1
        bits = bits[:n]
        for bv in _variants(bits).values():
            _check_against_naive(bv, bits)


@settings(max_examples=120, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=300))
def test_property_backend_agreement(bits):
    built = _variants(bits)
    n = len(bits)
    ones = sum(bits)
    probe = sorted({0, 1, n // 2, n - 1, n} & set(range(n + 1)))
    for i in probe:
        vals = {name: bv.rank1(i) for name, bv in built.items()}
        assert len(set(vals.values())) == 1, vals
        assert vals["plain"] == naive_rank(bits, 1, i)
    for j in (1, ones):
        if 1 <= j <= ones:
            vals = {name: bv.select1(j) for name, bv in built.items()}
            assert len(set(vals.values())) == 1
            assert vals["plain"] == naive_select(bits, 1, j)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=200),
       st.data())
def test_property_rank_additivity(bits, data):
    n = len(bits)
    left = data.draw(st.integers(1, n))
    right = data.draw(st.integers(left - 1, n))
    for bv in _variants(bits).values():
        inside = bv.rank1(right) - bv.rank1(left - 1)
        assert inside == naive_rank(bits[left - 1 : right], 1, right - left + 1)
        assert 0 <= inside <= right - left + 1


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=250))
def test_property_rank_select_inverses(bits):
    n = len(bits)
    for bv in _variants(bits).values():
        for j in range(1, bv.ones + 1):
            p = bv.select1(j)
            assert bv.rank1(p) == j
            assert bv.access(p) == 1
            assert bv.rank1(p - 1) == j - 1
        for j in range(1, bv.zeros + 1):
            p = bv.select0(j)
            assert bv.rank0(p) == j
            assert bv.access(p) == 0


def test_large_instances(rng):
    """Dense, sparse and runny inputs at n = 10^5 against vectorized scans."""
    n = 100_000
    cases = {
        "dense": rng.integers(0, 2, n).astype(np.uint8),
        "sparse": (rng.random(n) < 0.004).astype(np.uint8),
    }
    runny = np.zeros(n, dtype=np.uint8)
    i = 0
    val = 1
    while i < n:
        length = int(rng.geometric(1 / 60.0))
        runny[i : i + length] = val
        val ^= 1
        i += length
    cases["runny"] = runny
    for bits in cases.values():
        cum = np.concatenate([[0], np.cumsum(bits, dtype=np.int64)])
        pos1 = np.flatnonzero(bits) + 1
        pos0 = np.flatnonzero(bits == 0) + 1
        for bv in _variants(bits).values():
            probes = rng.integers(0, n + 1, 4000)
            for i in probes:
                assert bv.rank1(int(i)) == int(cum[i])
            if pos1.size:
                for j in rng.integers(1, pos1.size + 1, 2000):
                    assert bv.select1(int(j)) == int(pos1[j - 1])
            if pos0.size:
                for j in rng.integers(1, pos0.size + 1, 2000):
                    assert bv.select0(int(j)) == int(pos0[j - 1])
            assert bv.rank1(n) == int(pos1.size)


def test_fused_rank_variants(rng):
    """Unchecked single, paired and quad rank paths agree with rank1."""
    for trial in range(6):
        n = int(rng.integers(200, 30_000))
        style = trial % 3
        if style == 0:
            bits = rng.integers(0, 2, n).astype(np.uint8)
        elif style == 1:
            bits = (rng.random(n) < 0.01).astype(np.uint8)
        else:
            bits = np.zeros(n, dtype=np.uint8)
            i, val = 0, int(rng.integers(0, 2))
            while i < n:
                length = int(rng.geometric(1 / 40.0))
                bits[i : i + length] = val
                val ^= 1
                i += length
        for name, bv in _variants(bits).items():
            for _ in range(200):
                i = int(rng.integers(0, n + 1))
                assert bv.rank1_fast(i) == bv.rank1(i)
            if name == "sparse":
                continue
            for _ in range(200):
                a, b = sorted(int(x) for x in rng.integers(0, n + 1, 2))
                assert bv.rank_pair_fast(a, b) == (bv.rank1(a), bv.rank1(b))
                r, bit = bv.rank1_and_bit(max(a, 1))
                assert r == bv.rank1(max(a, 1))
                assert bit == bv.access(max(a, 1))
            for _ in range(200):
                # two ordered endpoint pairs: q1 <= q2 <= q4, q1 <= q3 <= q4
                q1, q2, q3, q4 = sorted(int(x) for x in rng.integers(0, n + 1, 4))
                got = bv.rank_quad_fast(q1, q2, q3, q4)
                want = tuple(bv.rank1(q) for q in (q1, q2, q3, q4))
                assert got == want
                got = bv.rank_quad_fast(q1, q3, q2, q4)
                assert got == (want[0], want[2], want[1], want[3])


def test_sparse_eliasfano_reference_paths(rng):
    """The broadword select/rank agree with the reference bucket walk."""
    n = 50_000
    bits = (rng.random(n) < 0.01).astype(np.uint8)
    pos = np.flatnonzero(bits) + 1
    bv = SparseBitVector(n, pos)
    assert bv.encoding == "ef"
    for j in range(1, bv.ones + 1):
        assert bv._select1_ef(j) == int(pos[j - 1])
    for i in rng.integers(0, n + 1, 3000):
        expect = int(np.searchsorted(pos, int(i), side="right"))
        assert bv._rank1_ef(int(i)) == expect
        assert bv.rank1(int(i)) == expect
    assert np.array_equal(bv.decode_positions(), pos)


def test_sparse_dense_fallback():
    bits = bits_of("1101101101")
    bv = SparseBitVector.from_bits(bits)
    assert bv.encoding == "plain"
    _check_against_naive(bv, bits)


def test_sparse_rejects_bad_positions():
    with pytest.raises(Exception):
        SparseBitVector(5, [0])
    with pytest.raises(Exception):
        SparseBitVector(5, [6])
    with pytest.raises(Exception):
        SparseBitVector(5, [2, 2])
    with pytest.raises(Exception):
        SparseBitVector(5, [3, 2])


def test_empty_bitvectors():
    for bv in (PlainBitVector.from_bits([]), SparseBitVector(0, []),
               RleBitVector.from_bits([])):
        assert len(bv) == 0
        assert bv.ones == 0
        assert bv.rank1(0) == 0
        with pytest.raises(RangeError):
            bv.rank1(1)


def test_rle_from_runs():
    bv = RleBitVector.from_runs([(1, 3), (0, 2), (1, 1)])
    assert bv.to_bits().tolist() == [1, 1, 1, 0, 0, 1]
    assert bv.runs == 3
    with pytest.raises(Exception):
        RleBitVector.from_runs([(1, 3), (1, 2)])
    with pytest.raises(Exception):
        RleBitVector.from_runs([(1, 0)])


def test_rle_run_boundaries(rng):
    bits = bits_of("111000011")
    bv = RleBitVector.from_bits(bits)
    assert bv.runs == 3
    assert bv.first == 1
    _check_against_naive(bv, bits)


def test_select_out_of_range():
    for bv in _variants(WORKED).values():
        with pytest.raises(Exception):
            bv.select1(0)
        with pytest.raises(Exception):
            bv.select1(bv.ones + 1)
        with pytest.raises(Exception):
            bv.select0(bv.zeros + 1)


def test_rank_position_out_of_range():
    for bv in _variants(WORKED).values():
        with pytest.raises(RangeError):
            bv.rank1(len(WORKED) + 1)
        with pytest.raises(RangeError):
            bv.rank1(-1)


def test_serialization_round_trip(rng):
    for _ in range(6):
        n = int(rng.integers(1, 500))
        bits = (rng.random(n) < float(rng.choice([0.02, 0.5, 0.9]))).astype(np.uint8)
        for bv in _variants(bits).values():
            w = Writer()
            bv.write(w)
            back = read_bitvector(Reader(w.getvalue()))
            assert type(back) is type(bv)
            assert back.to_bits().tolist() == list(bits)


def test_serialization_truncation_fails():
    bv = PlainBitVector.from_bits(bits_of("10110010"))
    data = bv.to_bytes()
    with pytest.raises(FormatError):
        read_bitvector(Reader(data[: len(data) - 3]))
