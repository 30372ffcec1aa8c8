"""Wall-clock cost of instrumentation: each solver with counting on and off."""

import argparse
import statistics
import time

from stabsweep import GenSpec, Metrics, RunConfig, generate, prepare
from stabsweep.solvers import ALGORITHMS, solve_prepared, warmup


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2_000_000, help="total objects")
    ap.add_argument("--kind", default="long")
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--P", type=int, default=4)
    args = ap.parse_args()
    warmup()
    inst = prepare(generate(GenSpec(args.kind, args.n // 2, args.n - args.n // 2, seed=0)))
    config = RunConfig(P=args.P)
    print(f"{'algorithm':<11} {'off_s':>8} {'on_s':>8} {'overhead':>9}")
    for algo in ALGORITHMS:
        times = {}
        for enabled in (False, True):
            runs = []
            for _ in range(args.reps):
                t0 = time.perf_counter()
                solve_prepared(algo, inst, config, Metrics(enabled=enabled))
                runs.append(time.perf_counter() - t0)
            times[enabled] = statistics.median(runs)
        print(f"{algo:<11} {times[False]:8.3f} {times[True]:8.3f} {times[True] / times[False] - 1:9.1%}")


if __name__ == "__main__":
    main()
