"""Uniform entry point over the four algorithms with phase timing.

Sorting (by y, plus the x event order for plane sweep) is timed separately
from solving. Tests and benchmarks compare solve times only.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .config import RunConfig
from .core import Answers, Instance, prepare
from .metrics import Metrics
from .parsweep import par_dist_sweep
from .planesweep import prepare_events, run_events
from .seqsweep import seq_dist_sweep
from .twoway import two_way_sweep

ALGORITHMS = ("planesweep", "seqsweep", "parsweep", "twoway")


@dataclass
class Timing:
    load_s: float = 0.0
    sort_s: float = 0.0
    solve_s: float = 0.0


def solve_prepared(
    algorithm: str, inst: Instance, config: RunConfig, metrics: Metrics | None = None,
    timing: Timing | None = None,
) -> Answers:
    """Run ``algorithm`` on an already y-sorted instance."""
    timing = timing if timing is not None else Timing()
    objs = inst.objects
    if algorithm == "planesweep":
        t0 = time.perf_counter()
        ev = prepare_events(objs, presorted=True)
        t1 = time.perf_counter()
        ans = run_events(ev, metrics)
        timing.sort_s += t1 - t0
        timing.solve_s += time.perf_counter() - t1
        return ans
    t0 = time.perf_counter()
    if algorithm == "seqsweep":
        ans = seq_dist_sweep(objs, config, metrics)
    elif algorithm == "parsweep":
        ans = par_dist_sweep(objs, config, metrics)
    elif algorithm == "twoway":
        ans = two_way_sweep(objs, config.base_threshold, config.P, metrics)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")
    timing.solve_s += time.perf_counter() - t0
    return ans


def solve(
    algorithm: str, objects: np.ndarray, config: RunConfig, metrics: Metrics | None = None
) -> tuple[Answers, Instance, Timing]:
    """Sort, assign ids and solve raw objects; returns answers keyed by dense query id."""
    timing = Timing()
    t0 = time.perf_counter()
    inst = prepare(objects)
    timing.sort_s = time.perf_counter() - t0
    ans = solve_prepared(algorithm, inst, config, metrics, timing)
    return ans, inst, timing


def warmup() -> None:
    """Compile every kernel on a tiny instance so timed runs exclude JIT time."""
    from .generators import GenSpec, generate

    inst = prepare(generate(GenSpec("random", 64, 64, seed=0)))
    config = RunConfig(M=16, B=4, P=2, base_threshold=16)
    for algo in ALGORITHMS:
        solve_prepared(algo, inst, config, Metrics())
        solve_prepared(algo, inst, config, Metrics(enabled=False))
