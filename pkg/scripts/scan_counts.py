"""Touches per pass for each algorithm on one instance, as multiples of n.

With M large enough for a single sequential level, seqsweep makes two
scans (distribute, base case) and parsweep four (worker sweep, compaction,
distribute, base case).
"""

import argparse

from stabsweep import GenSpec, Metrics, RunConfig, generate, prepare, snapshot
from stabsweep.solvers import ALGORITHMS, solve_prepared, warmup


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1 << 20, help="total objects")
    ap.add_argument("--kind", default="random")
    ap.add_argument("--M", type=int, default=150_000)
    ap.add_argument("--B", type=int, default=64)
    ap.add_argument("--P", type=int, default=4)
    ap.add_argument("--partition-mode", default="equalcount", choices=["uniform", "equalcount"])
    args = ap.parse_args()
    warmup()
    inst = prepare(generate(GenSpec(args.kind, args.n // 2, args.n - args.n // 2, seed=0)))
    config = RunConfig(M=args.M, B=args.B, P=args.P, partition_mode=args.partition_mode)
    for algo in ALGORITHMS:
        m = Metrics()
        solve_prepared(algo, inst, config, m)
        rep = snapshot(m)
        levels = " ".join(f"{lvl}:{c / args.n:.3f}" for lvl, c in rep.per_level)
        print(f"{algo:<11} total={rep.touches_total / args.n:.3f}n  per pass: {levels}")


if __name__ == "__main__":
    main()
