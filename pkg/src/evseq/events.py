"""Event grid model: configs, tuples, canonical positions and TSV input.

A dataset is a dense grid over days 1..D, employees 1..E and time instants
1..R, where each cell holds an activity code in 0..A (0 means absent). The
canonical cell order is day-major, then employee, then time; position_of
maps a cell to its 1-based index in that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np
import pandas as pd

from .errors import DomainError, IngestError, RangeError
from .serial import Reader, Writer


@dataclass(frozen=True)
class GridConfig:
    days: int
    employees: int
    resolution: int
    activities: int

    def __post_init__(self) -> None:
        for name in ("days", "employees", "resolution", "activities"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise DomainError(f"{name} must be a positive integer, got {v!r}")
        if self.days * self.employees * self.resolution >= 1 << 63:
            raise DomainError("grid too large for 63-bit positions")

    @property
    def n(self) -> int:
        return self.days * self.employees * self.resolution

    def write(self, w: Writer) -> None:
        w.u64(self.days)
        w.u64(self.employees)
        w.u64(self.resolution)
        w.u64(self.activities)

    @classmethod
    def read(cls, r: Reader) -> "GridConfig":
        return cls(r.u64(), r.u64(), r.u64(), r.u64())


class EventTuple(NamedTuple):
    day: int
    employee: int
    time: int
    activity: int


def position_of(config: GridConfig, day: int, employee: int, time: int) -> int:
    """1-based canonical index of the cell (day, employee, time)."""
    if not 1 <= day <= config.days:
        raise RangeError(f"day {day} outside [1, {config.days}]")
    if not 1 <= employee <= config.employees:
        raise RangeError(f"employee {employee} outside [1, {config.employees}]")
    if not 1 <= time <= config.resolution:
        raise RangeError(f"time {time} outside [1, {config.resolution}]")
    return ((day - 1) * config.employees + (employee - 1)) * config.resolution + time


def decode_position(config: GridConfig, p: int) -> tuple[int, int, int]:
    """Inverse of position_of."""
    if not 1 <= p <= config.n:
        raise RangeError(f"position {p} outside [1, {config.n}]")
    q, t = divmod(p - 1, config.resolution)
    d, e = divmod(q, config.employees)
    return d + 1, e + 1, t + 1


def day_prefix_end(config: GridConfig, day: int) -> int:
    """Index of the last cell of `day`; 0 for day 0."""
    if not 0 <= day <= config.days:
        raise RangeError(f"day {day} outside [0, {config.days}]")
    return day * config.employees * config.resolution


@dataclass(frozen=True)
class EventGrid:
    """Dense activity grid in canonical order."""

    config: GridConfig
    activities: np.ndarray  # int32, length config.n, values in 0..A

    def cell(self, day: int, employee: int, time: int) -> int:
        return int(self.activities[position_of(self.config, day, employee, time) - 1])


def expand_to_grid(tuples, config: GridConfig) -> EventGrid:
    """Scatter sparse event tuples onto the dense grid.

    Absent cells get activity 0. Duplicate (day, employee, time) cells and
    out-of-range fields are rejected.
    """
    arr = as_tuple_array(tuples)
    n = config.n
    grid = np.zeros(n, dtype=np.int32)
    if arr.size == 0:
        return EventGrid(config, grid)
    _validate_columns(arr, config)
    pos = (
        (arr[:, 0].astype(np.int64) - 1) * (config.employees * config.resolution)
        + (arr[:, 1].astype(np.int64) - 1) * config.resolution
        + arr[:, 2].astype(np.int64)
    )
    uniq, counts = np.unique(pos, return_counts=True)
    if uniq.size != pos.size:
        p = int(uniq[np.argmax(counts > 1)])
        d, e, t = decode_position(config, p)
        raise IngestError(f"duplicate cell day={d} employee={e} time={t}")
    grid[pos - 1] = arr[:, 3]
    return EventGrid(config, grid)


def as_tuple_array(tuples) -> np.ndarray:
    """Coerce an iterable of event tuples to an (m, 4) int64 array."""
    if isinstance(tuples, np.ndarray):
        arr = tuples
    else:
        arr = np.asarray(list(tuples), dtype=np.int64)
    if arr.size == 0:
        return np.zeros((0, 4), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 4:
        raise IngestError("tuples must have four columns: day employee time activity")
    return arr.astype(np.int64, copy=False)


def _validate_columns(arr: np.ndarray, config: GridConfig) -> None:
    limits = (
        ("day", 1, config.days),
        ("employee", 1, config.employees),
        ("time", 1, config.resolution),
        ("activity", 0, config.activities),
    )
    for col, (name, lo, hi) in enumerate(limits):
        bad = np.flatnonzero((arr[:, col] < lo) | (arr[:, col] > hi))
        if bad.size:
            row = arr[bad[0]]
            raise IngestError(
                f"{name} {row[col]} outside [{lo}, {hi}] in tuple "
                f"(day={row[0]}, employee={row[1]}, time={row[2]}, activity={row[3]})"
            )


def infer_config(arr: np.ndarray, resolution: int | None = None) -> GridConfig:
    """Smallest config covering the observed tuples."""
    if arr.size == 0:
        raise IngestError("cannot infer a grid from an empty tuple set")
    return GridConfig(
        days=int(arr[:, 0].max()),
        employees=int(arr[:, 1].max()),
        resolution=resolution if resolution is not None else int(arr[:, 2].max()),
        activities=max(int(arr[:, 3].max()), 1),
    )


# -- TSV input/output ---------------------------------------------------------

TSV_COLUMNS = ("day", "employee", "time", "activity")


def read_tuples_tsv(path) -> np.ndarray:
    """Read `day<TAB>employee<TAB>time<TAB>activity` rows, '#' comments allowed."""
    try:
        frame = pd.read_csv(
            path,
            sep="\t",
            comment="#",
            header=None,
            names=TSV_COLUMNS,
            dtype=np.int64,
        )
    except pd.errors.EmptyDataError:
        return np.zeros((0, 4), dtype=np.int64)
    except (ValueError, pd.errors.ParserError):
        _locate_tsv_error(path)
        raise IngestError(f"{path}: malformed TSV")
    return frame.to_numpy(dtype=np.int64)


def _locate_tsv_error(path) -> None:
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = stripped.split("\t")
            if len(fields) != 4:
                raise IngestError(f"{path}:{lineno}: expected 4 fields, got {len(fields)}")
            try:
                [int(f) for f in fields]
            except ValueError:
                raise IngestError(f"{path}:{lineno}: non-integer field in {stripped!r}")


def write_tuples_tsv(path, arr: np.ndarray) -> None:
    frame = pd.DataFrame(np.asarray(arr, dtype=np.int64), columns=TSV_COLUMNS)
    frame.to_csv(path, sep="\t", header=False, index=False)


# -- activity dictionaries ----------------------------------------------------

def read_dictionary(path) -> dict[int, str]:
    """Read `code<TAB>name` lines mapping activity codes to external names."""
    mapping: dict[int, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.rstrip("\n")
            if not stripped.strip() or stripped.lstrip().startswith("#"):
                continue
            parts = stripped.split("\t")
            if len(parts) != 2:
                raise IngestError(f"{path}:{lineno}: expected `code<TAB>name`")
            try:
                code = int(parts[0])
            except ValueError:
                raise IngestError(f"{path}:{lineno}: non-integer activity code")
            if code in mapping:
                raise IngestError(f"{path}:{lineno}: duplicate code {code}")
            mapping[code] = parts[1]
    return mapping


def write_dictionary(path, mapping: dict[int, str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for code in sorted(mapping):
            fh.write(f"{code}\t{mapping[code]}\n")
