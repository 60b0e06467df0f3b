"""Command line front end.

Subcommands: `gen` (synthetic dataset), `build` (index a TSV), `query`
(answer a query file), `bench` (timing report as JSON), `verify` (cross-check
all index variants against a naive scan of the grid).

Exit codes: 0 success, 1 usage, 2 data or format error, 3 verification
divergence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .baseline import BaselineSeq
from .chain import IndexChain, QuerySpec, format_query, parse_query_line
from .errors import DomainError, EvseqError, UsageError
from .events import (GridConfig, day_prefix_end, expand_to_grid, infer_config,
                     read_dictionary, read_tuples_tsv, write_tuples_tsv)
from .gen import GenSpec, dataset_stats, gen_dataset, gen_queries, write_sidecar
from .storage import load_index, save_index, variant_of

VARIANTS = ("wtrle", "wtmap", "baseline")


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so exit codes stay ours."""

    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="evseq",
                description="compact indexes over day/employee/time activity grids")
    sub = p.add_subparsers(dest="command", metavar="command")

    g = sub.add_parser("gen", help="generate a synthetic dataset")
    g.add_argument("--days", type=int, default=500)
    g.add_argument("--employees", type=int, default=50)
    g.add_argument("--resolution", type=int, default=720,
                   help="time instants per day")
    g.add_argument("--activities", type=int, default=16)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--work-prob", type=float, default=0.8,
                   help="probability an employee works a given day")
    g.add_argument("--shift-frac", type=float, default=0.5,
                   help="fraction of the day a working employee covers")
    g.add_argument("--mean-run", type=float, default=30.0,
                   help="mean activity run length in instants")
    g.add_argument("--activity-dist", default="uniform",
                   help="'uniform' or 'zipf:<s>'")
    g.add_argument("--out", required=True, help="output TSV path")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("build", help="build and serialize an index")
    b.add_argument("--input", required=True, help="input TSV path")
    b.add_argument("--variant", required=True, choices=VARIANTS)
    b.add_argument("--out", required=True, help="output index path")
    _config_overrides(b)
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", help="answer a query file against an index")
    q.add_argument("--index", required=True)
    q.add_argument("--queries", required=True, help="query file, one per line")
    q.add_argument("--dict", dest="dictionary",
                   help="activity dictionary (code<TAB>name)")
    q.add_argument("--out", help="output path (default stdout)")
    q.set_defaults(func=cmd_query)

    n = sub.add_parser("bench", help="time workloads against indexes")
    n.add_argument("--index", action="append", required=True)
    n.add_argument("--workload", action="append", required=True)
    n.add_argument("--reps", type=int, default=3)
    n.add_argument("--dict", dest="dictionary")
    n.add_argument("--out", help="JSON report path (default stdout)")
    n.set_defaults(func=cmd_bench)

    v = sub.add_parser("verify",
                       help="cross-check all variants against a naive scan")
    v.add_argument("--input", required=True, help="input TSV path")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--queries-per-kind", type=int, default=200)
    _config_overrides(v)
    v.set_defaults(func=cmd_verify)
    return p


def _config_overrides(p) -> None:
    p.add_argument("--days", type=int)
    p.add_argument("--employees", type=int)
    p.add_argument("--resolution", type=int)
    p.add_argument("--activities", type=int)


def _resolve_config(args, tuples) -> GridConfig:
    """Config from the tuples, with any explicit flags overriding."""
    explicit = (args.days, args.employees, args.resolution, args.activities)
    if all(v is not None for v in explicit):
        return GridConfig(*explicit)
    inferred = infer_config(tuples)
    return GridConfig(
        days=args.days if args.days is not None else inferred.days,
        employees=args.employees if args.employees is not None else inferred.employees,
        resolution=args.resolution if args.resolution is not None else inferred.resolution,
        activities=args.activities if args.activities is not None else inferred.activities,
    )


def _build_index(grid, variant: str):
    if variant == "baseline":
        return BaselineSeq.build(grid)
    return IndexChain.build(grid, variant)


# -- commands -----------------------------------------------------------------


def cmd_gen(args) -> int:
    config = GridConfig(args.days, args.employees, args.resolution,
                        args.activities)
    spec = GenSpec(config, seed=args.seed, work_prob=args.work_prob,
                   shift_frac=args.shift_frac, mean_run=args.mean_run,
                   activity_dist=args.activity_dist)
    tuples = gen_dataset(spec)
    write_tuples_tsv(args.out, tuples)
    stats = dataset_stats(tuples, config)
    sidecar = args.out + ".json"
    write_sidecar(sidecar, spec, stats)
    print(f"wrote {args.out}: {stats['tuples']} tuples, {stats['runs']} runs")
    print(f"wrote {sidecar}")
    return 0


def cmd_build(args) -> int:
    tuples = read_tuples_tsv(args.input)
    config = _resolve_config(args, tuples)
    grid = expand_to_grid(tuples, config)
    index = _build_index(grid, args.variant)
    written = save_index(args.out, index)
    print(f"variant {args.variant}")
    print(f"config days={config.days} employees={config.employees} "
          f"resolution={config.resolution} activities={config.activities}")
    sizes = index.component_sizes()
    print("component sizes (bytes):")
    for name, size in sizes.items():
        print(f"  {name} {size}")
    print(f"  total {sum(sizes.values())}")
    print(f"wrote {args.out} ({written} bytes)")
    return 0


def _load_queries(path, names, config) -> list[QuerySpec]:
    """Parse a query file; blank and '#' lines are skipped. Errors carry
    the offending line number."""
    specs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                spec = parse_query_line(text, names)
                spec.validate(config)
            except EvseqError as exc:
                raise DomainError(f"{path}:{lineno}: {exc}") from None
            specs.append(spec)
    return specs


def cmd_query(args) -> int:
    index = load_index(args.index)
    code_names = read_dictionary(args.dictionary) if args.dictionary else None
    names = ({name: code for code, name in code_names.items()}
             if code_names else None)
    specs = _load_queries(args.queries, names, index.config)
    lines = []
    for spec in specs:
        value = index.answer(spec)
        if spec.kind == "ACC" and code_names and value in code_names:
            lines.append(code_names[value])
        else:
            lines.append(str(value))
    out = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


def _workload_kind(specs) -> str:
    kinds = {s.kind for s in specs}
    return kinds.pop() if len(kinds) == 1 else "mixed"


def _time_chunk(index, specs) -> np.ndarray:
    samples = np.empty(len(specs), dtype=np.int64)
    answer = index.answer
    clock = time.perf_counter_ns
    for i, spec in enumerate(specs):
        t0 = clock()
        answer(spec)
        samples[i] = clock() - t0
    return samples


def _time_workload(index, specs, reps: int, threads: int) -> np.ndarray:
    parts = []
    for _ in range(max(1, reps)):
        if threads <= 1 or len(specs) < 2 * threads:
            parts.append(_time_chunk(index, specs))
        else:
            from concurrent.futures import ThreadPoolExecutor
            chunks = [specs[i::threads] for i in range(threads)]
            with ThreadPoolExecutor(max_workers=threads) as ex:
                parts.extend(ex.map(lambda ch: _time_chunk(index, ch), chunks))
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)


def cmd_bench(args) -> int:
    threads = int(os.environ.get("EVSEQ_THREADS", "1"))
    code_names = read_dictionary(args.dictionary) if args.dictionary else None
    names = ({name: code for code, name in code_names.items()}
             if code_names else None)
    reports = []
    for index_path in args.index:
        index = load_index(index_path)
        sizes = index.component_sizes()
        report = {
            "dataset": os.path.basename(index_path),
            "variant": variant_of(index),
            "sizes": {**sizes, "total": sum(sizes.values())},
            "workloads": [],
        }
        for wl_path in args.workload:
            specs = _load_queries(wl_path, names, index.config)
            if specs:
                samples = _time_workload(index, specs, args.reps, threads)
                median_us = float(np.median(samples)) / 1000.0
                mean_us = float(samples.mean()) / 1000.0
            else:
                median_us = mean_us = 0.0
            report["workloads"].append({
                "kind": _workload_kind(specs) if specs else "empty",
                "n": len(specs),
                "reps": args.reps,
                "median_us": median_us,
                "mean_us": mean_us,
            })
        reports.append(report)
    doc = {"schema_version": 1, "reports": reports}
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def naive_answer(grid, spec: QuerySpec) -> int:
    """Literal scan of the dense grid; the verification reference."""
    cfg = grid.config
    if spec.kind == "ACC":
        return grid.cell(spec.day, spec.employee, spec.time)
    lo = day_prefix_end(cfg, spec.day - 1)
    hi = day_prefix_end(cfg, spec.last_day)
    seg = grid.activities[lo:hi]
    hit = seg == spec.activity
    if spec.kind in ("C1A", "CRA"):
        return int(hit.sum())
    emp = (np.arange(lo, hi) // cfg.resolution) % cfg.employees + 1
    return int((hit & (emp == spec.employee)).sum())


def cmd_verify(args) -> int:
    from .storage import index_from_bytes, index_to_bytes

    tuples = read_tuples_tsv(args.input)
    config = _resolve_config(args, tuples)
    grid = expand_to_grid(tuples, config)
    indexes = {}
    for variant in VARIANTS:
        built = _build_index(grid, variant)
        indexes[variant] = index_from_bytes(index_to_bytes(built))
    checked = 0
    for k, kind in enumerate(("ACC", "C1", "C1A", "CR", "CRA")):
        specs = gen_queries(kind, args.queries_per_kind, config,
                            seed=args.seed + k)
        for spec in specs:
            expect = naive_answer(grid, spec)
            for variant, index in indexes.items():
                got = index.answer(spec)
                if got != expect:
                    print(f"DIVERGENCE {variant}: query `{format_query(spec)}` "
                          f"gave {got}, naive scan gives {expect}")
                    return 3
            checked += 1
    print(f"verify: PASS ({checked} queries x {len(VARIANTS)} variants, "
          f"days={config.days} employees={config.employees} "
          f"resolution={config.resolution} activities={config.activities})")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_help()
        return 1
    return args.func(args)


def run(argv=None) -> int:
    """main() with exceptions mapped to the exit-code contract."""
    try:
        return main(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0
    except (EvseqError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(entry())
