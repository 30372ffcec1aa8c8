"""Command line front-end: generate, run, verify, bench.

    stabsweep generate --kind long --n-segments 1000 --n-queries 1000 -o in.txt
    stabsweep run --algo parsweep --P 4 in.txt -o out.txt
    stabsweep verify in.txt out.txt
    stabsweep bench --algo seqsweep parsweep --kind long --n 1000000 --P 1 4 --csv bench.csv

In ``bench``, ``n`` is the total object count, split evenly between
segments and queries.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import statistics
import sys
import time
from collections import defaultdict

import numpy as np

from .config import DEFAULT_M_FRACTION, RunConfig, default_M
from .core import ParseError, prepare, read_objects, read_results, write_objects, write_results
from .generators import GenSpec, Kind, generate
from .metrics import Metrics, snapshot
from .oracle import stab_oracle
from .solvers import ALGORITHMS, Timing, solve_prepared, warmup

DEFAULT_ORACLE_CAP = 20_000

CSV_COLUMNS = [
    "algorithm", "kind", "n", "P", "M", "B", "rep", "load_s", "sort_s", "solve_s",
    "touches_total", "touches_per_level", "comparisons", "max_worker_touches",
    "speedup_vs_seq", "speedup_vs_planesweep",
]


class CliError(Exception):
    pass


def _config(args, P: int | None = None, M: int | None = None) -> RunConfig:
    if M is None:
        M = args.M if args.M is not None else default_M(args.M_fraction)
    return RunConfig(
        M=M,
        B=args.B,
        P=P if P is not None else args.P,
        seed=args.seed,
        partition_mode=args.partition_mode,
        two_sweep=args.two_sweep_mode,
        base_threshold=args.base_threshold,
    )


def _stream(path: str, std):
    return std if path == "-" else path


# --------------------------------------------------------------------------
# subcommands


def cmd_generate(args) -> int:
    n_seg = args.n_segments if args.n_segments is not None else args.n
    n_q = args.n_queries if args.n_queries is not None else args.n
    if n_seg is None or n_q is None:
        raise CliError("give --n or both --n-segments and --n-queries")
    spec = GenSpec(args.kind, n_seg, n_q, args.grid, args.seed)
    objs = generate(spec)
    try:
        write_objects(_stream(args.out, sys.stdout), objs)
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc}") from None
    return 0


def cmd_run(args) -> int:
    config = _config(args)
    t0 = time.perf_counter()
    objs = read_objects(_stream(args.input, sys.stdin))
    timing = Timing(load_s=time.perf_counter() - t0)
    t1 = time.perf_counter()
    inst = prepare(objs)
    timing.sort_s = time.perf_counter() - t1
    metrics = Metrics(enabled=not args.no_metrics)
    ans = solve_prepared(args.algo, inst, config, metrics, timing)
    write_results(_stream(args.out, sys.stdout), ans, inst)
    record = {"algorithm": args.algo, "n": len(inst), "P": config.P, "M": config.M, "B": config.B,
              "load_s": timing.load_s, "sort_s": timing.sort_s, "solve_s": timing.solve_s}
    if metrics.enabled:
        rep = snapshot(metrics)
        record.update(touches_total=rep.touches_total, touches_per_level=rep.per_level_str(),
                      comparisons=rep.comparisons, max_worker_touches=rep.max_worker_touches)
    print(json.dumps(record), file=sys.stderr if args.out == "-" else sys.stdout)
    return 0


def cmd_verify(args) -> int:
    objs = read_objects(args.input)
    if objs.shape[0] > args.oracle_cap:
        raise CliError(
            f"{objs.shape[0]} objects exceed the oracle cap {args.oracle_cap}; raise --oracle-cap to force"
        )
    inst = prepare(objs)
    expected = stab_oracle(inst.objects)
    ext = np.concatenate([[0], inst.seg_ext]).astype(np.int64)
    got = read_results(args.results)
    for qid in np.argsort(inst.query_ext, kind="stable").tolist():
        qext = int(inst.query_ext[qid])
        want_id, want_y = int(ext[expected.seg_id[qid]]), float(expected.seg_y[qid])
        have = got.get(qext)
        if have is None:
            print(f"FAIL query {qext}: missing from results")
            return 1
        if have.seg_id != want_id or have.seg_y != want_y:
            print(f"FAIL query {qext}: got ({have.seg_id}, {have.seg_y}), expected ({want_id}, {want_y})")
            return 1
    extra = set(got) - set(inst.query_ext.tolist())
    if extra:
        print(f"FAIL query {min(extra)}: not in input")
        return 1
    print(f"PASS {inst.n_queries} queries")
    return 0


def _median_table(rows: list[dict], key) -> dict:
    groups = defaultdict(list)
    for r in rows:
        groups[key(r)].append(r["solve_s"])
    return {k: statistics.median(v) for k, v in groups.items()}


def add_speedups(rows: list[dict]) -> None:
    """Fill the speedup columns from per-cell solve-time medians.

    The seqsweep baseline is matched on (kind, n, M, B), planesweep on (kind, n).
    """
    cell = _median_table(rows, lambda r: (r["algorithm"], r["kind"], r["n"], r["P"], r["M"], r["B"]))
    seq = {(k[1], k[2], k[4], k[5]): v for k, v in cell.items() if k[0] == "seqsweep"}
    plane = _median_table([r for r in rows if r["algorithm"] == "planesweep"], lambda r: (r["kind"], r["n"]))
    for r in rows:
        mine = cell[(r["algorithm"], r["kind"], r["n"], r["P"], r["M"], r["B"])]
        base_s = seq.get((r["kind"], r["n"], r["M"], r["B"]))
        base_p = plane.get((r["kind"], r["n"]))
        r["speedup_vs_seq"] = base_s / mine if base_s is not None and mine > 0 else ""
        r["speedup_vs_planesweep"] = base_p / mine if base_p is not None and mine > 0 else ""


def write_csv(path: str, rows: list[dict]) -> None:
    """Append rows; the header is written once and must match on later appends."""
    exists = os.path.exists(path) and os.path.getsize(path) > 0
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    if exists:
        with open(path, newline="") as f:
            header = next(csv.reader(f), None)
        if header != CSV_COLUMNS:
            raise CliError(f"{path} has a different header; refusing to append")
    with open(path, "a", newline="") as f:
        w = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        if not exists:
            w.writeheader()
        for r in rows:
            w.writerow({k: _cell(r[k]) for k in CSV_COLUMNS})


def _cell(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return v


def run_bench(args) -> list[dict]:
    warmup()
    rows: list[dict] = []
    Ms = args.M if args.M else [default_M(args.M_fraction)]
    for kind in args.kind:
        for n in args.n:
            t0 = time.perf_counter()
            objs = generate(GenSpec(kind, n // 2, n - n // 2, args.grid, args.seed))
            load_s = time.perf_counter() - t0
            for algo in args.algo:
                for M in Ms if algo != "planesweep" else Ms[:1]:
                    for P in args.P if algo in ("parsweep", "twoway") else [1]:
                        config = _config(args, P=P, M=M)
                        for rep in range(args.reps):
                            t1 = time.perf_counter()
                            inst = prepare(objs)
                            timing = Timing(load_s=load_s, sort_s=time.perf_counter() - t1)
                            metrics = Metrics(enabled=not args.no_metrics)
                            solve_prepared(algo, inst, config, metrics, timing)
                            row = {"algorithm": algo, "kind": Kind(kind).value, "n": n, "P": P, "M": M,
                                   "B": args.B, "rep": rep, "load_s": timing.load_s,
                                   "sort_s": timing.sort_s, "solve_s": timing.solve_s,
                                   "touches_total": "", "touches_per_level": "", "comparisons": "",
                                   "max_worker_touches": ""}
                            if metrics.enabled:
                                rp = snapshot(metrics)
                                row.update(touches_total=rp.touches_total,
                                           touches_per_level=rp.per_level_str(),
                                           comparisons=rp.comparisons,
                                           max_worker_touches=rp.max_worker_touches)
                            rows.append(row)
                            del inst
    add_speedups(rows)
    return rows


def cmd_bench(args) -> int:
    rows = run_bench(args)
    if args.csv:
        write_csv(args.csv, rows)
    else:
        w = csv.DictWriter(sys.stdout, fieldnames=CSV_COLUMNS)
        w.writeheader()
        for r in rows:
            w.writerow({k: _cell(r[k]) for k in CSV_COLUMNS})
    return 0


# --------------------------------------------------------------------------
# argument parsing


def _config_flags(p: argparse.ArgumentParser, multi: bool) -> None:
    nargs = "+" if multi else None
    p.add_argument("--P", type=int, nargs=nargs, default=[1] if multi else 1, help="worker count")
    p.add_argument("--M", type=int, nargs=nargs, default=None,
                   help="base-case size in points (default: a fraction of the last-level cache)")
    p.add_argument("--M-fraction", type=float, default=DEFAULT_M_FRACTION,
                   help="fraction of the last-level cache used for the default M")
    p.add_argument("--B", type=int, default=64, help="block size in objects")
    p.add_argument("--base-threshold", type=int, default=1024, help="twoway base-case size")
    p.add_argument("--partition-mode", choices=["uniform", "equalcount"], default="uniform")
    p.add_argument("--two-sweep-mode", action="store_true",
                   help="parsweep: repeat the worker sweep instead of propagating prefix answers")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-metrics", action="store_true", help="disable instrumentation")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stabsweep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a generated instance")
    g.add_argument("--kind", choices=[k.value for k in Kind], required=True)
    g.add_argument("--n", type=int, help="segments and queries each (default for both counts)")
    g.add_argument("--n-segments", type=int)
    g.add_argument("--n-queries", type=int)
    g.add_argument("--grid", type=float, default=1e6)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out", default="-")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="solve an instance file")
    r.add_argument("input")
    r.add_argument("--algo", choices=ALGORITHMS, required=True)
    r.add_argument("-o", "--out", default="-")
    _config_flags(r, multi=False)
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="check a results file against the brute-force oracle")
    v.add_argument("input")
    v.add_argument("results")
    v.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP,
                   help="largest object count the oracle accepts")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="time a sweep over algorithms, kinds, sizes, P and M")
    b.add_argument("--algo", choices=ALGORITHMS, nargs="+", default=list(ALGORITHMS))
    b.add_argument("--kind", choices=[k.value for k in Kind], nargs="+", default=["long"])
    b.add_argument("--n", type=int, nargs="+", default=[100_000], help="total object counts")
    b.add_argument("--grid", type=float, default=1e6)
    b.add_argument("--reps", type=int, default=3)
    b.add_argument("--csv", help="append rows to this file (default: stdout)")
    _config_flags(b, multi=True)
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
