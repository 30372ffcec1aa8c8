"""Effect of the base-case size M (and hence K) on seqsweep and parsweep."""

import argparse

from stabsweep.cli import main as cli


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--csv", default="results/vary_m.csv")
    ap.add_argument("--kind", default="long")
    ap.add_argument("--n", type=int, default=4_000_000)
    ap.add_argument("--M", type=int, nargs="+", default=[2**e for e in range(10, 23, 2)])
    ap.add_argument("--P", type=int, nargs="+", default=[4])
    ap.add_argument("--reps", type=int, default=3)
    args = ap.parse_args()
    cli(["bench", "--algo", "seqsweep", "parsweep", "--kind", args.kind, "--n", str(args.n),
         "--M", *map(str, args.M), "--P", *map(str, args.P), "--B", "64",
         "--reps", str(args.reps), "--csv", args.csv])


if __name__ == "__main__":
    main()
