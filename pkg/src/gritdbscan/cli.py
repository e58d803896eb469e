"""Command line: cluster, generate, verify, bench.

Exit codes: 0 success, 1 a verification trial failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from . import cluster as cluster_mod
from .core import Params, UsageError
from .datagen import GenConfig, normalize_to_domain, seed_spreader
from .harness import (
    BENCH_COLUMNS, Instance, bench_rows, check_instance, parse_values, read_points,
    run_campaign, run_variant, save_repro, shrink, write_labels, write_points,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CLI_VARIANTS = ("grit", "grit-ldf", "brute")


def _add_gen_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--mode", choices=["simden", "varden"], default="simden")
    p.add_argument("--restart-probability", type=float, default=0.1)
    p.add_argument("--points-per-step", type=int, default=100)
    p.add_argument("--step-radius", type=float, default=1000.0)
    p.add_argument("--radius-spread", type=float, default=10.0)
    p.add_argument("--noise-fraction", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)


def _gen_config(args, n: int) -> GenConfig:
    return GenConfig(
        n=n, d=args.d, mode=args.mode, restart_probability=args.restart_probability,
        points_per_step=args.points_per_step, step_radius=args.step_radius,
        radius_spread=args.radius_spread, noise_fraction=args.noise_fraction, seed=args.seed,
    )


def cmd_cluster(args) -> int:
    ds = read_points(args.input)
    params = Params(args.eps, args.minpts, args.delta)
    if args.normalize and ds.n:
        ds = normalize_to_domain(ds)
    result, stats = run_variant(ds.points, params, args.variant, seed=args.seed)
    if args.output in (None, "-"):
        write_labels(sys.stdout, result, classes=args.classes)
    else:
        write_labels(args.output, result, classes=args.classes)
    print(f"variant={args.variant}", file=sys.stderr)
    print(f"n={ds.n}", file=sys.stderr)
    print(f"clusters={result.n_clusters}", file=sys.stderr)
    if stats is not None:
        for key, val in stats.as_dict().items():
            if key == "variant":
                continue
            print(f"{key}={val:.6f}" if isinstance(val, float) else f"{key}={val}", file=sys.stderr)
    return EXIT_OK


def cmd_generate(args) -> int:
    ds = seed_spreader(_gen_config(args, args.n))
    if args.normalize:
        ds = normalize_to_domain(ds)
    write_points(args.output, ds)
    return EXIT_OK


def cmd_verify(args) -> int:
    variants = [v.strip() for v in args.variants.split(",") if v.strip()]
    for v in variants:
        if v not in ("grit", "grit-ldf"):
            raise UsageError(f"verify variants must be grit or grit-ldf, got {v!r}")
    if args.trials < 0 or args.max_n < 1:
        raise UsageError("--trials must be >= 0 and --max-n >= 1")
    if args.replay:
        blob = json.loads(Path(args.replay).read_text())
        ok, problems, _, _ = check_instance(Instance.from_json(blob), variants, seed=blob.get("seed", 0))
        print("replay passed" if ok else "replay FAILED: " + "; ".join(problems))
        return EXIT_OK if ok else EXIT_FAIL
    cluster_mod._INJECT_BUG = args.inject_bug
    failed = 0
    start = time.perf_counter()
    try:
        for res in run_campaign(args.trials, args.max_n, args.seed, variants):
            if res.ok:
                continue
            failed += 1
            small = shrink(res.instance, variants, seed=res.index)
            problems = check_instance(small, variants, seed=res.index)[1]
            out = Path(args.repro_dir) / f"verify_fail_seed{args.seed}_trial{res.index}.json"
            out.parent.mkdir(parents=True, exist_ok=True)
            save_repro(out, small, problems, variants, res.index)
            print(f"trial {res.index} FAILED ({len(small.points)} points after shrinking): "
                  f"{'; '.join(problems)}; repro written to {out}", file=sys.stderr)
            if args.stop_on_failure:
                break
    finally:
        cluster_mod._INJECT_BUG = False
    print(f"trials={args.trials} failed={failed} variants={','.join(variants)} "
          f"seconds={time.perf_counter() - start:.1f}")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_bench(args) -> int:
    values = parse_values(args.values, args.axis)
    variants = [v.strip() for v in args.variant.split(",") if v.strip()]
    for v in variants:
        if v not in ("grit", "grit-ldf"):
            raise UsageError(f"bench variants must be grit or grit-ldf, got {v!r}")
    dataset = read_points(args.input) if args.input else None
    if dataset is not None and args.axis == "n":
        raise UsageError("an n sweep generates its own data; drop --input")
    gen = _gen_config(args, args.n) if dataset is None else None
    rows = bench_rows(args.axis, values, args.eps, args.minpts, variants, args.repeats,
                      dataset=dataset, gen=gen, seed=args.seed)
    fh = open(args.output, "w", newline="") if args.output not in (None, "-") else sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
            fh.flush()
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gritdbscan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster a CSV point file")
    p.add_argument("--input", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--minpts", type=int, required=True)
    p.add_argument("--variant", choices=CLI_VARIANTS, default="grit")
    p.add_argument("--delta", type=float, default=0.0, help="slack for the approximate merge test")
    p.add_argument("--output", default="-")
    p.add_argument("--classes", action="store_true", help="add a C/B/N class column")
    p.add_argument("--normalize", action="store_true", help="map columns onto [0, 1e5] first")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("generate", help="write a seed-spreader dataset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--normalize", action="store_true")
    _add_gen_flags(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="random instances checked against brute-force DBSCAN")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-n", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--variants", default="grit,grit-ldf")
    p.add_argument("--repro-dir", default=".")
    p.add_argument("--stop-on-failure", action="store_true")
    p.add_argument("--replay", help="re-check a saved repro file instead of random trials")
    p.add_argument("--inject-bug", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="sweep eps, minpts or n and write timing CSV")
    p.add_argument("--axis", choices=["eps", "minpts", "n"], required=True)
    p.add_argument("--values", required=True, help="comma-separated sweep values")
    p.add_argument("--input", help="CSV dataset (default: generate one)")
    p.add_argument("--n", type=int, default=20000, help="generated size for eps/minpts sweeps")
    p.add_argument("--eps", type=float, default=1000.0)
    p.add_argument("--minpts", type=int, default=10)
    p.add_argument("--variant", default="grit", help="grit, grit-ldf or both comma-separated")
    p.add_argument("--repeats", type=int, default=1, help="runs per row; times are medians")
    p.add_argument("--output", default="-")
    _add_gen_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, OSError) as exc:
        print(f"gritdbscan {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
