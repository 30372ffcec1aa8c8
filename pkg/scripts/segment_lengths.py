"""Sensitivity to segment length: plane-sweep active-set size, touches and
solve times per generator kind at fixed n."""

import argparse
import time

from stabsweep import GenSpec, Metrics, RunConfig, generate, prepare, snapshot
from stabsweep.solvers import solve_prepared, warmup


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1_000_000, help="total objects")
    ap.add_argument("--partition-mode", default="uniform", choices=["uniform", "equalcount"])
    args = ap.parse_args()
    warmup()
    config = RunConfig(partition_mode=args.partition_mode)
    print(f"{'kind':<7} {'max_active':>10} {'plane_s':>8} {'plane_cmp/n':>11} "
          f"{'seq_s':>7} {'seq_touch/n':>11} {'seq_copies':>10}")
    for kind in ("random", "short", "medium", "long"):
        inst = prepare(generate(GenSpec(kind, args.n // 2, args.n - args.n // 2, seed=0)))
        out = {}
        for algo in ("planesweep", "seqsweep"):
            m = Metrics()
            t0 = time.perf_counter()
            solve_prepared(algo, inst, config, m)
            out[algo] = (time.perf_counter() - t0, snapshot(m))
        (ps, pr), (ss, sr) = out["planesweep"], out["seqsweep"]
        print(f"{kind:<7} {pr.max_active:>10} {ps:8.3f} {pr.comparisons / args.n:11.1f} "
              f"{ss:7.3f} {sr.touches_total / args.n:11.3f} {sr.copies:>10}")


if __name__ == "__main__":
    main()
