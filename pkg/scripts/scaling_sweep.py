"""n sweep on seed-spreader data: per-doubling runtime ratios and kappa.

    python scripts/scaling_sweep.py --values 10000,20000,40000,80000 --repeats 5
"""
import argparse
import csv
import sys

from gritdbscan.datagen import GenConfig
from gritdbscan.harness import BENCH_COLUMNS, bench_rows, parse_values


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--values", default="10000,20000,40000,80000")
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--mode", choices=["simden", "varden"], default="simden")
    ap.add_argument("--eps", type=float, default=1000.0)
    ap.add_argument("--minpts", type=int, default=10)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", help="also write the raw rows here")
    args = ap.parse_args(argv)

    gen = GenConfig(n=1, d=args.d, mode=args.mode, seed=args.seed)
    rows = list(bench_rows("n", parse_values(args.values, "n"), args.eps, args.minpts,
                           ["grit", "grit-ldf"], args.repeats, gen=gen, seed=args.seed))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
            w.writeheader()
            w.writerows(rows)
    for variant in ("grit", "grit-ldf"):
        mine = [r for r in rows if r["variant"] == variant]
        print(f"{variant}:")
        prev = None
        for r in mine:
            t = float(r["t_total"])
            ratio = f"{t / prev:5.2f}" if prev else "    -"
            print(f"  n={r['n']:>7}  grids={r['grid_count']:>6}  kappa={r['max_kappa']:>2}  "
                  f"t={t:8.3f}s  ratio={ratio}")
            prev = t
    worst = max(float(b["t_total"]) / float(a["t_total"])
                for v in ("grit", "grit-ldf")
                for a, b in zip([r for r in rows if r["variant"] == v][:-1],
                                [r for r in rows if r["variant"] == v][1:]))
    print(f"worst doubling ratio {worst:.2f} (limit 2.5)")
    return 0 if worst <= 2.5 else 1


if __name__ == "__main__":
    sys.exit(main())
