"""eps or minPts sweep on one generated dataset, printed as a table.

    python scripts/param_sweep.py --axis eps --values 500,1000,2000,4000,5000 --n 50000
"""
import argparse
import sys

from gritdbscan.datagen import GenConfig, seed_spreader
from gritdbscan.harness import bench_rows, parse_values


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--axis", choices=["eps", "minpts"], default="eps")
    ap.add_argument("--values", default="500,1000,2000,4000,5000")
    ap.add_argument("--n", type=int, default=50_000)
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--mode", choices=["simden", "varden"], default="varden")
    ap.add_argument("--eps", type=float, default=2000.0)
    ap.add_argument("--minpts", type=int, default=10)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args(argv)

    ds = seed_spreader(GenConfig(n=args.n, d=args.d, mode=args.mode))
    cols = ["variant", args.axis, "grid_count", "eta", "max_kappa", "dist_evals", "t_core", "t_merge", "t_total"]
    print("  ".join(f"{c:>10}" for c in cols))
    for row in bench_rows(args.axis, parse_values(args.values, args.axis), args.eps, args.minpts,
                          ["grit", "grit-ldf"], args.repeats, dataset=ds):
        print("  ".join(f"{row[c]:>10}" for c in cols))
    return 0


if __name__ == "__main__":
    sys.exit(main())
