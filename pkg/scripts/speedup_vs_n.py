"""Solve time of every algorithm against n (one CSV row per rep).

Reproduces the shape of the speedup-over-plane-sweep and parallel-speedup
plots at desk scale; absolute times depend on the machine.
"""

import argparse

from stabsweep.cli import main as cli


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--csv", default="results/speedup_vs_n.csv")
    ap.add_argument("--kind", nargs="+", default=["long", "random"])
    ap.add_argument("--n", type=int, nargs="+", default=[10**5, 10**6, 10**7])
    ap.add_argument("--P", type=int, nargs="+", default=[1, 2, 4, 8])
    ap.add_argument("--reps", type=int, default=3)
    args = ap.parse_args()
    cli(["bench", "--algo", "planesweep", "seqsweep", "parsweep", "twoway",
         "--kind", *args.kind, "--n", *map(str, args.n), "--P", *map(str, args.P),
         "--reps", str(args.reps), "--csv", args.csv])


if __name__ == "__main__":
    main()
