"""Randomized oracle campaign with a per-kind breakdown and merge-test totals.

    python scripts/verify_campaign.py --trials 1000 --max-n 200
"""
import argparse
import sys
import time
from collections import Counter

from gritdbscan.harness import run_campaign


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--max-n", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    start = time.perf_counter()
    kinds, failed = Counter(), Counter()
    tests = Counter()
    ldf_more = 0
    for res in run_campaign(args.trials, args.max_n, args.seed):
        kind = res.instance.kind
        kinds[kind] += 1
        if not res.ok:
            failed[kind] += 1
            print(f"trial {res.index} ({kind}): {'; '.join(res.problems)}")
        tests.update(res.merge_tests)
        ldf_more += res.merge_tests["grit-ldf"] > res.merge_tests["grit"]
    for kind in sorted(kinds):
        print(f"{kind:8s} trials={kinds[kind]:5d} failed={failed[kind]}")
    print(f"merge tests: grit={tests['grit']} grit-ldf={tests['grit-ldf']}; "
          f"grit-ldf did more on {ldf_more} of {args.trials} instances")
    print(f"{time.perf_counter() - start:.1f}s")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
