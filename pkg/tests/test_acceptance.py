"""Acceptance criteria, one test each, run at their stated sizes and tolerances.

Every test prints a single ``criterion N ...: PASS|FAIL`` line; the lines are
repeated in the pytest terminal summary.
"""
import csv
import math
import time
import warnings

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, FIG_CELLS, FIG_EPS
from gritdbscan.cli import main
from gritdbscan.cluster import grit_dbscan
from gritdbscan.core import Dataset, Params
from gritdbscan.datagen import GenConfig, seed_spreader
from gritdbscan.gridtree import build, frontiers, neighbors
from gritdbscan.harness import run_campaign
from gritdbscan.merge import fast_merge, fast_merge_approx
from gritdbscan.oracle import brute_min_dist, brute_neighbor_grids, equivalent
from gritdbscan.partition import partition
from instances import adversarial_pairs, neighbor_core_pairs, pair_at_distance

N_SWEEP = [10_000, 20_000, 40_000, 80_000]
BENCH_EPS, BENCH_MINPTS = 1000.0, 10
MERGE_SEEDS = range(5)


def record(num, name, ok, detail):
    line = f"criterion {num} {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def _min_dists(xs, other):
    return np.sqrt(((xs[:, None, :] - other[None, :, :]) ** 2).sum(axis=2)).min(axis=1)


@pytest.fixture(scope="module")
def merge_runs():
    """Criterion 2's merge runs, with every prune observed for criterion 3."""
    rng = np.random.default_rng(2024)
    pairs = list(neighbor_core_pairs(rng, 10_000)) + list(adversarial_pairs(rng, 1_000))
    log = dict(wrong=[], prunes=0, removed=0, unsound=0, lambdas=0, lam_max=0.0, lam_bad=0)

    def watch(removed, other, lam):
        log["prunes"] += 1
        log["lambdas"] += len(lam)
        log["lam_max"] = max(log["lam_max"], float(lam.max()))
        log["lam_bad"] += int((lam >= 5 * math.pi / 6 + 1e-9).sum())
        if len(removed):
            log["removed"] += len(removed)
            log["unsound"] += int((_min_dists(removed, other) <= eps).sum())

    start = time.perf_counter()
    for i, (a, b, eps) in enumerate(pairs):
        truth = brute_min_dist(a, b) <= eps
        for seed in MERGE_SEEDS:
            if fast_merge(a, b, eps, seed=seed, observer=watch)[0] != truth:
                log["wrong"].append((i, seed))
    log["seconds"] = time.perf_counter() - start
    log["pairs"] = len(pairs)
    return log


def test_criterion_1_exact_equivalence(capsys):
    start = time.perf_counter()
    code = main(["verify", "--trials", "1000", "--max-n", "200", "--seed", "0",
                 "--variants", "grit,grit-ldf", "--repro-dir", "."])
    took = time.perf_counter() - start
    out = capsys.readouterr().out.strip()
    record(1, "oracle equivalence", code == 0, f"exit {code}; {out}; {took:.1f}s")


def test_criterion_2_merge_decisions(merge_runs):
    wrong = merge_runs["wrong"]
    record(2, "FastMerging decisions", not wrong,
           f"{merge_runs['pairs']} pairs x {len(MERGE_SEEDS)} seeds, {len(wrong)} wrong, "
           f"{merge_runs['seconds']:.1f}s")


def test_criterion_3_pruning_soundness(merge_runs):
    bad = merge_runs["unsound"] + merge_runs["lam_bad"]
    record(3, "pruning soundness", bad == 0 and merge_runs["prunes"] > 0,
           f"{merge_runs['prunes']} prune calls, {merge_runs['removed']} removed points, "
           f"{merge_runs['unsound']} unsound; {merge_runs['lambdas']} lambdas, max "
           f"{merge_runs['lam_max']:.4f} vs 5pi/6 = {5 * math.pi / 6:.4f}")


def test_criterion_4_tree_queries():
    rng = np.random.default_rng(44)
    wrong_set = unsorted = fast_slow = 0
    for _ in range(10_000):
        d = int(rng.integers(2, 7))
        span = int(rng.integers(1, 12))
        cells = np.unique(rng.integers(0, span + 1, (int(rng.integers(1, 60)), d)), axis=0)
        gs = partition(Dataset(cells + 0.5), math.sqrt(d))
        mp = int(rng.integers(1, 6))
        fast, slow = build(gs, mp, fast_path=True), build(gs, mp, fast_path=False)
        if rng.random() < 0.5:
            q = gs.grid_id(int(rng.integers(len(gs))))
        else:
            q = tuple(int(v) for v in rng.integers(-2, gs.eta + 3, d))
        got = neighbors(fast, q, with_offsets=True)
        wrong_set += {k for k, _ in got} != brute_neighbor_grids(gs, q)
        offs = [o for _, o in got]
        unsorted += offs != sorted(offs)
        fast_slow += got != neighbors(slow, q, with_offsets=True)
    record(4, "grid-tree queries", wrong_set == unsorted == fast_slow == 0,
           f"10000 queries: {wrong_set} set mismatches, {unsorted} unsorted, {fast_slow} fast/slow diffs")


def test_criterion_5_worked_example(fig_dataset):
    gs = partition(fig_dataset, FIG_EPS)
    tree = build(gs, min_pts=3)
    names = {v: k for k, v in FIG_CELLS.items()}
    table = {k: f"t{v.serial}" for (s, k), v in tree.table.items() if s == 0}
    found = neighbors(tree, (3, 3))
    strict = {names[gs.grid_id(k)] for k in found if gs.grid_id(k) != (3, 3)}
    level1 = sorted(t.serial for t, _ in frontiers(tree, (3, 3))[0])
    checks = {
        "grids": len(gs) == 9,
        "eta": gs.eta == 5,
        "table": table == {0: "t1", 1: "t1", 2: "t1", 3: "t3", 4: "t6", 5: "t9"} and len(tree.table) == 6,
        "level1": level1 == [3, 6, 9, 13],
        "query": strict == {"g3", "g5", "g7", "g8", "g9"},
    }
    record(5, "worked example", all(checks.values()),
           f"|G|={len(gs)}, eta={gs.eta}, root table {table}, Nei(g6)\\g6={sorted(strict)}")


def test_criterion_6_approximate_merge():
    rng = np.random.default_rng(66)
    eps = 1.0
    violations = in_band = 0
    for i in range(10_000):
        delta = float(rng.choice([1e-3, 1e-2, 0.05, 0.2]))
        if i % 2:
            a, b, eps = next(neighbor_core_pairs(rng, 1, per_dataset=1))
        else:
            a, b = pair_at_distance(rng, float(rng.uniform(eps - 0.1, eps + 2 * delta)), eps)
        m = brute_min_dist(a, b)
        yes, st = fast_merge_approx(a, b, eps, delta, seed=i)
        if eps < m <= eps + delta:
            in_band += 1
            if yes and not math.dist(*st.witness) <= eps + delta:
                violations += 1
        elif yes != (m <= eps):
            violations += 1
    record(6, "approximate merge contract", violations == 0,
           f"10000 instances, {in_band} inside the slack band, {violations} violations")


@pytest.fixture(scope="module")
def sweep(tmp_path_factory):
    out = tmp_path_factory.mktemp("bench") / "n_sweep.csv"
    start = time.perf_counter()
    code = main(["bench", "--axis", "n", "--values", ",".join(map(str, N_SWEEP)), "--d", "3",
                 "--mode", "simden", "--eps", str(BENCH_EPS), "--minpts", str(BENCH_MINPTS),
                 "--repeats", "5", "--variant", "grit,grit-ldf", "--output", str(out)])
    rows = list(csv.DictReader(out.open()))
    datasets = {n: seed_spreader(GenConfig(n=n, d=3)) for n in N_SWEEP}
    return dict(code=code, rows=rows, datasets=datasets, seconds=time.perf_counter() - start)


def test_criterion_7_scaling(sweep):
    params = Params(BENCH_EPS, BENCH_MINPTS)
    clusters = {n: grit_dbscan(ds, params)[0].n_clusters for n, ds in sweep["datasets"].items()}
    ratios = {}
    for variant in ("grit", "grit-ldf"):
        t = [float(r["t_total"]) for r in sweep["rows"] if r["variant"] == variant]
        ratios[variant] = [b / a for a, b in zip(t, t[1:])]
    ok = (sweep["code"] == 0 and all(r <= 2.5 for rs in ratios.values() for r in rs)
          and min(clusters.values()) >= 5)
    shown = "; ".join(f"{v} " + ", ".join(f"{r:.2f}" for r in rs) for v, rs in ratios.items())
    record(7, "near-linear scaling", ok,
           f"doubling ratios {shown}; clusters {list(clusters.values())}; {sweep['seconds']:.0f}s")


def test_criterion_8_kappa(sweep):
    kappa = max(int(r["max_kappa"]) for r in sweep["rows"])
    if kappa > 32:
        warnings.warn(f"max merge iterations {kappa} exceeds 32")
    record(8, "kappa observation", True, f"max_kappa={kappa}" + (" (above 32)" if kappa > 32 else ""))


@pytest.fixture(scope="module")
def variant_runs(sweep):
    """grit vs grit-ldf on every instance of criteria 1 and 7."""
    runs = []
    for res in run_campaign(1000, 200, seed=0, variants=("grit", "grit-ldf")):
        a, b = res.clusterings["grit"], res.clusterings["grit-ldf"]
        inst = res.instance
        runs.append((f"trial {res.index}", equivalent(a, b, inst.points, inst.eps),
                     res.merge_tests["grit"], res.merge_tests["grit-ldf"]))
    params = Params(BENCH_EPS, BENCH_MINPTS)
    for n, ds in sweep["datasets"].items():
        a, sa = grit_dbscan(ds, params, variant="grit")
        b, sb = grit_dbscan(ds, params, variant="grit-ldf")
        runs.append((f"n={n}", equivalent(a, b, ds.points, BENCH_EPS), sa.merge_tests, sb.merge_tests))
    return runs


def test_criterion_9_variant_equivalence(variant_runs):
    bad = [name for name, eq, _, _ in variant_runs if not eq]
    record("9a", "grit/grit-ldf equivalence", not bad,
           f"{len(variant_runs)} instances, {len(bad)} inequivalent {bad[:5]}")


def test_criterion_9_merge_test_counts(variant_runs):
    more = [(name, g, l) for name, _, g, l in variant_runs if l > g]
    tot_g = sum(g for _, _, g, _ in variant_runs)
    tot_l = sum(l for _, _, _, l in variant_runs)
    record("9b", "grit-ldf merge tests <= grit", not more,
           f"{len(more)}/{len(variant_runs)} instances where grit-ldf tests more, e.g. {more[:3]}; "
           f"totals grit={tot_g} grit-ldf={tot_l}")
