"""Composition of index levels across dimensions and the query API.

An IndexChain stacks one index level per dimension. Level 1 is built over the
first dimension's labels in canonical grid order; each further level is built
over the next dimension's labels with the grid stably re-sorted by all the
previous dimensions. A counting query then maps a position range through the
levels: a day range turns into a leaf range of level 1 (all instants of one
activity, in order), inside which level 2 counts one employee.

The default chain is (activity, employee), which answers the whole counting
taxonomy: one or a range of days, one or all employees, one activity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FormatError, RangeError, UnsupportedQueryError
from .events import EventGrid, GridConfig, day_prefix_end, position_of
from .serial import Reader, Writer
from .wtmap import WtMapLevel
from .wtrle import WtRleLevel

QUERY_KINDS = ("ACC", "C1", "C1A", "CR", "CRA")

LEVEL_CLASSES = {"wtrle": WtRleLevel, "wtmap": WtMapLevel}

DIMENSIONS = ("activity", "employee", "day", "time")
_DIM_TAGS = {name: i + 1 for i, name in enumerate(DIMENSIONS)}


@dataclass(frozen=True)
class QuerySpec:
    """One query: an access or a count over (activity, employee?, day range).

    kind   meaning
    ACC    activity at cell (day, employee, time)
    C1     instants of activity for one employee on one day
    C1A    instants of activity over all employees on one day
    CR     instants of activity for one employee over days [day, day2]
    CRA    instants of activity over all employees over days [day, day2]
    """

    kind: str
    day: int
    day2: int | None = None
    employee: int | None = None
    time: int | None = None
    activity: int | None = None

    def validate(self, config: GridConfig) -> None:
        if self.kind not in QUERY_KINDS:
            raise DomainError(f"unknown query kind {self.kind!r}")
        if not 1 <= self.day <= config.days:
            raise RangeError(f"day {self.day} outside [1, {config.days}]")
        if self.kind in ("CR", "CRA"):
            if self.day2 is None or not self.day <= self.day2 <= config.days:
                raise RangeError(f"bad day range [{self.day}, {self.day2}]")
        if self.kind in ("ACC", "C1", "CR"):
            if self.employee is None or not 1 <= self.employee <= config.employees:
                raise RangeError(
                    f"employee {self.employee} outside [1, {config.employees}]")
        if self.kind == "ACC":
            if self.time is None or not 1 <= self.time <= config.resolution:
                raise RangeError(f"time {self.time} outside [1, {config.resolution}]")
        else:
            if self.activity is None or not 0 <= self.activity <= config.activities:
                raise RangeError(
                    f"activity {self.activity} outside [0, {config.activities}]")

    @property
    def last_day(self) -> int:
        return self.day if self.day2 is None else self.day2


def parse_activity_token(token: str, names=None) -> int:
    """All-digit tokens are codes; anything else must resolve via the dictionary."""
    if token.isdigit():
        return int(token)
    if names and token in names:
        return names[token]
    raise DomainError(f"unknown activity {token!r}")


def _int_field(token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise DomainError(f"expected integer {what}, got {token!r}") from None


def parse_query_line(line: str, names=None) -> QuerySpec:
    """Parse one query line.

    Forms: `ACC d e t` | `C1 d e a` | `C1A d a` | `CR d1 d2 e a` | `CRA d1 d2 a`.
    The activity field accepts a numeric code or a dictionary name.
    """
    tok = line.split()
    if not tok:
        raise DomainError("empty query line")
    kind = tok[0].upper()
    arity = {"ACC": 4, "C1": 4, "C1A": 3, "CR": 5, "CRA": 4}.get(kind)
    if arity is None:
        raise DomainError(f"unknown query kind {tok[0]!r}")
    if len(tok) != arity:
        raise DomainError(f"{kind} takes {arity - 1} fields, got {len(tok) - 1}")
    if kind == "ACC":
        return QuerySpec("ACC", day=_int_field(tok[1], "day"),
                         employee=_int_field(tok[2], "employee"),
                         time=_int_field(tok[3], "time"))
    if kind == "C1":
        return QuerySpec("C1", day=_int_field(tok[1], "day"),
                         employee=_int_field(tok[2], "employee"),
                         activity=parse_activity_token(tok[3], names))
    if kind == "C1A":
        return QuerySpec("C1A", day=_int_field(tok[1], "day"),
                         activity=parse_activity_token(tok[2], names))
    if kind == "CR":
        return QuerySpec("CR", day=_int_field(tok[1], "day1"),
                         day2=_int_field(tok[2], "day2"),
                         employee=_int_field(tok[3], "employee"),
                         activity=parse_activity_token(tok[4], names))
    return QuerySpec("CRA", day=_int_field(tok[1], "day1"),
                     day2=_int_field(tok[2], "day2"),
                     activity=parse_activity_token(tok[3], names))


def format_query(spec: QuerySpec, code_names=None) -> str:
    """Inverse of parse_query_line; uses dictionary names when available."""
    def act() -> str:
        if code_names and spec.activity in code_names:
            return code_names[spec.activity]
        return str(spec.activity)

    if spec.kind == "ACC":
        return f"ACC {spec.day} {spec.employee} {spec.time}"
    if spec.kind == "C1":
        return f"C1 {spec.day} {spec.employee} {act()}"
    if spec.kind == "C1A":
        return f"C1A {spec.day} {act()}"
    if spec.kind == "CR":
        return f"CR {spec.day} {spec.day2} {spec.employee} {act()}"
    if spec.kind == "CRA":
        return f"CRA {spec.day} {spec.day2} {act()}"
    raise DomainError(f"unknown query kind {spec.kind!r}")


def dimension_labels(grid: EventGrid, dim: str) -> tuple[np.ndarray, int]:
    """0-based label sequence of one dimension in canonical order, plus sigma.

    Activities keep their external codes (0 = absent); days, employees and
    times are shifted down by one internally.
    """
    cfg = grid.config
    if dim == "activity":
        return grid.activities.astype(np.int64), cfg.activities + 1
    idx = np.arange(cfg.n, dtype=np.int64)
    if dim == "employee":
        return (idx // cfg.resolution) % cfg.employees, cfg.employees
    if dim == "day":
        return idx // (cfg.employees * cfg.resolution), cfg.days
    if dim == "time":
        return idx % cfg.resolution, cfg.resolution
    raise DomainError(f"unknown dimension {dim!r}")


def leaf_orders(grid: EventGrid, dims) -> list[np.ndarray]:
    """Permutations (leaf index -> grid position, 0-based) after each level."""
    perm = np.arange(grid.config.n, dtype=np.int64)
    out = []
    for dim in dims:
        labels, _ = dimension_labels(grid, dim)
        perm = perm[np.argsort(labels[perm], kind="stable")]
        out.append(perm)
    return out


class IndexChain:
    """Stacked index levels answering access and the counting query family."""

    __slots__ = ("config", "variant", "dims", "levels")

    def __init__(self, config: GridConfig, variant: str, dims, levels):
        self.config = config
        self.variant = variant
        self.dims = tuple(dims)
        self.levels = list(levels)

    @classmethod
    def build(cls, grid: EventGrid, variant: str,
              dims=("activity", "employee")) -> "IndexChain":
        if variant not in LEVEL_CLASSES:
            raise DomainError(f"unknown index variant {variant!r}")
        dims = tuple(dims)
        if not dims:
            raise DomainError("chain needs at least one dimension")
        for dim in dims:
            if dim not in DIMENSIONS:
                raise DomainError(f"unknown dimension {dim!r}")
        if len(set(dims)) != len(dims):
            raise DomainError("chain dimensions must be distinct")
        level_cls = LEVEL_CLASSES[variant]
        perm = np.arange(grid.config.n, dtype=np.int64)
        levels = []
        for dim in dims:
            labels, sigma = dimension_labels(grid, dim)
            seq = labels[perm]
            levels.append(level_cls.build(seq, sigma))
            perm = perm[np.argsort(seq, kind="stable")]
        return cls(grid.config, variant, dims, levels)

    def _require_default_dims(self) -> None:
        if self.dims != ("activity", "employee"):
            raise UnsupportedQueryError(
                f"query helpers need an (activity, employee) chain, not {self.dims}")

    # -- queries ---------------------------------------------------------------------

    def query_acc(self, day: int, employee: int, time: int) -> int:
        """Activity code at one cell (0 when absent)."""
        if self.dims[0] != "activity":
            raise UnsupportedQueryError("first chain dimension is not activity")
        p = position_of(self.config, day, employee, time)
        return self.levels[0].expanded_access(p)

    def count_act_days(self, activity: int, d1: int, d2: int) -> int:
        """Instants of one activity over all employees in days d1..d2."""
        self._require_default_dims()
        cfg = self.config
        if not 0 <= activity <= cfg.activities:
            raise RangeError(f"activity {activity} outside [0, {cfg.activities}]")
        if not (1 <= d1 <= d2 <= cfg.days):
            raise RangeError(f"bad day range [{d1}, {d2}]")
        lo, hi = self.levels[0].count_prefixes(
            activity, (day_prefix_end(cfg, d1 - 1), day_prefix_end(cfg, d2)))
        return hi - lo

    def count_act_emp_days(self, activity: int, employee: int,
                           d1: int, d2: int) -> int:
        """Instants of one activity for one employee in days d1..d2.

        The day range becomes a leaf range of level 1 (the activity's
        occurrences in canonical order), and level 2 counts the employee
        inside it.
        """
        self._require_default_dims()
        cfg = self.config
        if not 0 <= activity <= cfg.activities:
            raise RangeError(f"activity {activity} outside [0, {cfg.activities}]")
        if not 1 <= employee <= cfg.employees:
            raise RangeError(f"employee {employee} outside [1, {cfg.employees}]")
        if not (1 <= d1 <= d2 <= cfg.days):
            raise RangeError(f"bad day range [{d1}, {d2}]")
        q1, q2 = self.levels[0].leaf_positions(
            activity, (day_prefix_end(cfg, d1 - 1), day_prefix_end(cfg, d2)))
        lo, hi = self.levels[1].count_prefixes(employee - 1, (q1, q2))
        return hi - lo

    def count_act_emp_one_day_direct(self, activity: int, employee: int,
                                     day: int) -> int:
        """Single-day fast path: one (day, employee) block is contiguous."""
        if self.dims[0] != "activity":
            raise UnsupportedQueryError("first chain dimension is not activity")
        cfg = self.config
        if not 0 <= activity <= cfg.activities:
            raise RangeError(f"activity {activity} outside [0, {cfg.activities}]")
        first = position_of(cfg, day, employee, 1)
        lo, hi = self.levels[0].count_prefixes(
            activity, (first - 1, first + cfg.resolution - 1))
        return hi - lo

    def answer(self, spec: QuerySpec) -> int:
        spec.validate(self.config)
        if spec.kind == "ACC":
            return self.query_acc(spec.day, spec.employee, spec.time)
        if spec.kind == "C1":
            return self.count_act_emp_one_day_direct(
                spec.activity, spec.employee, spec.day)
        if spec.kind == "C1A":
            return self.count_act_days(spec.activity, spec.day, spec.day)
        if spec.kind == "CR":
            return self.count_act_emp_days(
                spec.activity, spec.employee, spec.day, spec.day2)
        return self.count_act_days(spec.activity, spec.day, spec.day2)

    # -- serialization ------------------------------------------------------------

    def component_sizes(self) -> dict[str, int]:
        sizes: dict[str, int] = {}
        for dim, level in zip(self.dims, self.levels):
            for name, size in level.component_sizes().items():
                sizes[f"{dim}.{name}"] = size
        return sizes

    def write_payload(self, w: Writer) -> None:
        w.u8(len(self.levels))
        for dim, level in zip(self.dims, self.levels):
            w.u8(_DIM_TAGS[dim])
            level.write(w)

    @classmethod
    def read_payload(cls, r: Reader, config: GridConfig, variant: str) -> "IndexChain":
        level_cls = LEVEL_CLASSES[variant]
        ndims = r.u8()
        dims = []
        levels = []
        for _ in range(ndims):
            tag = r.u8()
            if not 1 <= tag <= len(DIMENSIONS):
                raise FormatError(f"unknown dimension tag {tag}")
            dims.append(DIMENSIONS[tag - 1])
            levels.append(level_cls.read(r))
        return cls(config, variant, dims, levels)
