"""Deterministic synthetic datasets and query workloads.

Each day, each employee works with probability work_prob; a working employee
is assigned one of the two half-day shifts uniformly. Within a shift the
activity sequence is a concatenation of runs: lengths are geometric with the
configured mean (truncated at the shift end), symbols are drawn from the
activity distribution with no two adjacent runs equal. Everything is a pure
function of (spec, seed) via PCG64, so reruns are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .chain import QUERY_KINDS, QuerySpec
from .errors import DomainError
from .events import GridConfig, as_tuple_array

RNG_ALGORITHM = "pcg64"


def _parse_dist(text: str) -> tuple[str, float]:
    if text == "uniform":
        return ("uniform", 0.0)
    if text.startswith("zipf:"):
        try:
            s = float(text[5:])
        except ValueError:
            raise DomainError(f"bad zipf exponent in {text!r}") from None
        if s <= 0:
            raise DomainError("zipf exponent must be positive")
        return ("zipf", s)
    raise DomainError(f"unknown activity distribution {text!r}")


@dataclass(frozen=True)
class GenSpec:
    """Dataset parameters: grid shape plus the behavioral knobs."""

    config: GridConfig
    seed: int = 0
    work_prob: float = 0.8
    shift_frac: float = 0.5
    mean_run: float = 30.0
    activity_dist: str = "uniform"

    def __post_init__(self) -> None:
        if not 0.0 <= self.work_prob <= 1.0:
            raise DomainError("work_prob must be in [0, 1]")
        if not 0.0 <= self.shift_frac <= 1.0:
            raise DomainError("shift_frac must be in [0, 1]")
        if self.mean_run < 1.0:
            raise DomainError("mean_run must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must fit in 64 bits")
        _parse_dist(self.activity_dist)

    @property
    def shift_len(self) -> int:
        return round(self.shift_frac * self.config.resolution)

    def activity_probs(self):
        """None for uniform, else the normalized weight vector over 1..A."""
        kind, s = _parse_dist(self.activity_dist)
        if kind == "uniform":
            return None
        w = 1.0 / np.arange(1, self.config.activities + 1, dtype=np.float64) ** s
        return w / w.sum()

    def params_dict(self) -> dict:
        return {
            "days": self.config.days,
            "employees": self.config.employees,
            "resolution": self.config.resolution,
            "activities": self.config.activities,
            "seed": self.seed,
            "work_prob": self.work_prob,
            "shift_frac": self.shift_frac,
            "mean_run": self.mean_run,
            "activity_dist": self.activity_dist,
        }


def _run_lengths(rng: np.random.Generator, total: int, p: float) -> np.ndarray:
    """Geometric run lengths covering `total` instants, last run truncated."""
    mean = 1.0 / p
    est = max(8, int(total / mean + 6.0 * (total / mean) ** 0.5) + 8)
    lens = rng.geometric(p, size=est).astype(np.int64)
    cum = np.cumsum(lens)
    while cum[-1] < total:
        lens = np.concatenate([lens, rng.geometric(p, size=est).astype(np.int64)])
        cum = np.cumsum(lens)
    k = int(np.searchsorted(cum, total, side="left"))
    lens = lens[: k + 1].copy()
    lens[k] -= int(cum[k]) - total
    return lens


def _run_symbols(rng: np.random.Generator, k: int, probs, a: int) -> np.ndarray:
    """k symbols from 1..a, adjacent-distinct (all equal when a == 1)."""
    if a == 1:
        return np.ones(k, dtype=np.int64)
    if probs is None:
        syms = rng.integers(1, a + 1, size=k)
    else:
        syms = rng.choice(a, size=k, p=probs) + 1
    for i in range(1, k):
        while syms[i] == syms[i - 1]:
            syms[i] = (rng.integers(1, a + 1) if probs is None
                       else int(rng.choice(a, p=probs)) + 1)
    return syms.astype(np.int64)


def gen_dataset(spec: GenSpec) -> np.ndarray:
    """Generate the event tuples as an (m, 4) array of day/employee/time/activity.

    Rows come out in canonical order. Absent instants produce no rows.
    """
    cfg = spec.config
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    worked = rng.random((cfg.days, cfg.employees)) < spec.work_prob
    late = rng.integers(0, 2, size=(cfg.days, cfg.employees))
    s = spec.shift_len
    if s == 0 or spec.work_prob == 0.0:
        return np.empty((0, 4), dtype=np.int64)
    p = 1.0 / spec.mean_run
    probs = spec.activity_probs()
    chunks = []
    for d in range(1, cfg.days + 1):
        for e in range(1, cfg.employees + 1):
            if not worked[d - 1, e - 1]:
                continue
            lens = _run_lengths(rng, s, p)
            syms = _run_symbols(rng, lens.size, probs, cfg.activities)
            start = 1 if late[d - 1, e - 1] == 0 else cfg.resolution - s + 1
            block = np.empty((s, 4), dtype=np.int64)
            block[:, 0] = d
            block[:, 1] = e
            block[:, 2] = np.arange(start, start + s)
            block[:, 3] = np.repeat(syms, lens)
            chunks.append(block)
    if not chunks:
        return np.empty((0, 4), dtype=np.int64)
    return np.concatenate(chunks)


def dataset_stats(tuples, config: GridConfig) -> dict:
    """Measured statistics of a tuple set: runs, mean run length, coverage."""
    arr = as_tuple_array(tuples)
    m = arr.shape[0]
    if m == 0:
        return {"tuples": 0, "runs": 0, "mean_run_length": 0.0,
                "worked_employee_days": 0, "worked_fraction": 0.0}
    block = (arr[:, 0] - 1) * config.employees + (arr[:, 1] - 1)
    order = np.lexsort((arr[:, 2], block))
    b = block[order]
    t = arr[order, 2]
    a = arr[order, 3]
    extend = (b[1:] == b[:-1]) & (t[1:] == t[:-1] + 1) & (a[1:] == a[:-1])
    runs = m - int(extend.sum())
    worked = int(np.unique(b).size)
    return {
        "tuples": int(m),
        "runs": runs,
        "mean_run_length": m / runs,
        "worked_employee_days": worked,
        "worked_fraction": worked / (config.days * config.employees),
    }


def sidecar_dict(spec: GenSpec, stats: dict) -> dict:
    return {"algorithm": RNG_ALGORITHM, "params": spec.params_dict(), "stats": stats}


def write_sidecar(path, spec: GenSpec, stats: dict) -> None:
    """JSON sidecar with the generating parameters and measured statistics."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(sidecar_dict(spec, stats), fh, sort_keys=True, indent=2)
        fh.write("\n")


def _ordered_day_pairs(rng: np.random.Generator, count: int,
                       days: int) -> tuple[np.ndarray, np.ndarray]:
    """count pairs uniform over {(d1, d2): 1 <= d1 <= d2 <= days}."""
    lo = np.empty(count, dtype=np.int64)
    hi = np.empty(count, dtype=np.int64)
    got = 0
    while got < count:
        need = count - got
        i = rng.integers(1, days + 1, size=2 * need + 8)
        j = rng.integers(1, days + 1, size=i.size)
        ok = np.flatnonzero(i <= j)[: need]
        lo[got : got + ok.size] = i[ok]
        hi[got : got + ok.size] = j[ok]
        got += ok.size
    return lo, hi


def gen_queries(kind: str, count: int, config: GridConfig,
                seed: int) -> list[QuerySpec]:
    """count random in-range queries of one kind, deterministic per seed."""
    if kind not in QUERY_KINDS:
        raise DomainError(f"unknown query kind {kind!r}")
    if count < 0:
        raise DomainError("count must be non-negative")
    rng = np.random.Generator(np.random.PCG64(seed))
    if kind in ("CR", "CRA"):
        d1, d2 = _ordered_day_pairs(rng, count, config.days)
    else:
        d1 = rng.integers(1, config.days + 1, size=count)
        d2 = None
    emp = (rng.integers(1, config.employees + 1, size=count)
           if kind in ("ACC", "C1", "CR") else None)
    if kind == "ACC":
        t = rng.integers(1, config.resolution + 1, size=count)
        out = [QuerySpec("ACC", day=int(d1[i]), employee=int(emp[i]),
                         time=int(t[i])) for i in range(count)]
    else:
        act = rng.integers(0, config.activities + 1, size=count)
        if kind == "C1":
            out = [QuerySpec("C1", day=int(d1[i]), employee=int(emp[i]),
                             activity=int(act[i])) for i in range(count)]
        elif kind == "C1A":
            out = [QuerySpec("C1A", day=int(d1[i]),
                             activity=int(act[i])) for i in range(count)]
        elif kind == "CR":
            out = [QuerySpec("CR", day=int(d1[i]), day2=int(d2[i]),
                             employee=int(emp[i]),
                             activity=int(act[i])) for i in range(count)]
        else:
            out = [QuerySpec("CRA", day=int(d1[i]), day2=int(d2[i]),
                             activity=int(act[i])) for i in range(count)]
    for spec in out:
        spec.validate(config)
    return out
