"""File formats, the randomized oracle campaign and the parameter sweep."""
from __future__ import annotations

import csv
import gc
import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from .cluster import grit_dbscan
from .core import NOISE, Clustering, Dataset, Params, PointClass, UsageError
from .datagen import GenConfig, seed_spreader
from .oracle import brute_dbscan, equivalent

BENCH_COLUMNS = [
    "variant", "d", "n", "eps", "minpts", "grid_count", "eta", "max_kappa", "dist_evals",
    "t_partition", "t_index", "t_core", "t_merge", "t_assign", "t_total",
]
TIME_COLUMNS = ["t_partition", "t_index", "t_core", "t_merge", "t_assign", "t_total"]


def read_points(path) -> Dataset:
    """Headerless CSV, one point per line, the same number of fields on every line."""
    rows = []
    width = None
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not f.strip() for f in row):
                continue
            try:
                vals = [float(f) for f in row]
            except ValueError:
                raise UsageError(f"{path}:{lineno}: non-numeric field in {row!r}") from None
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise UsageError(f"{path}:{lineno}: expected {width} fields, got {len(vals)}")
            rows.append(vals)
    if not rows:
        return Dataset(np.empty((0, 0)))
    return Dataset(np.array(rows, dtype=np.float64))


def write_points(path, dataset: Dataset) -> None:
    with open(path, "w") as fh:
        for row in dataset.points.tolist():
            fh.write(",".join(repr(v) for v in row) + "\n")


def write_labels(path_or_fh, clustering: Clustering, classes: bool = False) -> None:
    lines = []
    for lab, cls in zip(clustering.labels.tolist(), clustering.classes.tolist()):
        lines.append(f"{lab},{PointClass(cls).letter}" if classes else str(lab))
    text = "".join(line + "\n" for line in lines)
    if hasattr(path_or_fh, "write"):
        path_or_fh.write(text)
    else:
        Path(path_or_fh).write_text(text)


def read_labels(path) -> Clustering:
    labels, classes = [], []
    for line in Path(path).read_text().splitlines():
        head, _, cls = line.partition(",")
        lab = int(head)
        labels.append(lab)
        if cls:
            classes.append("CBN".index(cls))
        else:
            classes.append(PointClass.NOISE if lab == NOISE else PointClass.CORE)
    return Clustering(np.array(labels, dtype=np.int64), np.array(classes, dtype=np.int8))


def run_variant(points, params: Params, variant: str, seed=0):
    if variant == "brute":
        return brute_dbscan(points, params), None
    return grit_dbscan(points, params, variant=variant, seed=seed)


# --- randomized equivalence campaign -------------------------------------------------

@dataclass
class Instance:
    points: np.ndarray
    eps: float
    min_pts: int
    kind: str

    def to_json(self) -> dict:
        return {"points": self.points.tolist(), "eps": self.eps, "minpts": self.min_pts, "kind": self.kind}

    @classmethod
    def from_json(cls, blob: dict) -> "Instance":
        return cls(np.array(blob["points"], dtype=np.float64).reshape(len(blob["points"]), -1),
                   float(blob["eps"]), int(blob["minpts"]), blob.get("kind", "replay"))


def random_instance(rng: np.random.Generator, max_n: int) -> Instance:
    """Small instance with d in {2, 3, 5}: uniform, blobs or an integer lattice.

    The lattice kind uses integer eps so that many pairs sit at distance
    exactly eps and the closed-ball threshold is exercised.
    """
    d = int(rng.choice([2, 3, 5]))
    n = int(rng.integers(1, max_n + 1))
    kind = str(rng.choice(["uniform", "blobs", "lattice"]))
    if kind == "uniform":
        pts = rng.uniform(0, 10, (n, d))
        eps = float(rng.uniform(0.3, 4.0))
    elif kind == "blobs":
        centers = rng.uniform(0, 20, (int(rng.integers(1, 6)), d))
        pts = centers[rng.integers(len(centers), size=n)] + rng.normal(0, rng.uniform(0.3, 2.0), (n, d))
        eps = float(rng.uniform(0.3, 3.0))
    else:
        pts = rng.integers(0, 8, (n, d)).astype(np.float64)
        eps = float(rng.integers(1, 4))
    return Instance(pts, eps, int(rng.integers(1, 11)), kind)


@dataclass
class TrialResult:
    index: int
    instance: Instance
    ok: bool
    problems: list[str] = field(default_factory=list)
    merge_tests: dict[str, int] = field(default_factory=dict)
    clusterings: dict[str, Clustering] = field(default_factory=dict)


def check_instance(inst: Instance, variants, seed=0) -> tuple[bool, list[str], dict, dict]:
    params = Params(inst.eps, inst.min_pts)
    ref = brute_dbscan(inst.points, params)
    problems, tests, results = [], {}, {}
    for v in variants:
        got, stats = run_variant(inst.points, params, v, seed=seed)
        results[v] = got
        if stats is not None:
            tests[v] = stats.merge_tests
        try:
            got.check()
        except AssertionError as exc:
            problems.append(f"{v}: {exc}")
        eq = equivalent(ref, got, inst.points, inst.eps)
        if not eq:
            problems.append(f"{v}: {eq.report()}")
    return not problems, problems, tests, results


def run_campaign(trials: int, max_n: int, seed: int = 0,
                 variants=("grit", "grit-ldf")) -> Iterator[TrialResult]:
    """Yield one result per random instance; trial t uses generator seed (seed, t)."""
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        inst = random_instance(rng, max_n)
        ok, problems, tests, results = check_instance(inst, variants, seed=t)
        yield TrialResult(t, inst, ok, problems, tests, results)


def shrink(inst: Instance, variants, seed=0) -> Instance:
    """Greedily drop points while the instance keeps failing."""
    cur = inst
    chunk = max(len(cur.points) // 2, 1)
    while chunk >= 1:
        i, progressed = 0, False
        while i < len(cur.points):
            keep = np.ones(len(cur.points), dtype=bool)
            keep[i:i + chunk] = False
            cand = Instance(cur.points[keep], cur.eps, cur.min_pts, cur.kind)
            if len(cand.points) and not check_instance(cand, variants, seed)[0]:
                cur, progressed = cand, True
            else:
                i += chunk
        if not progressed:
            chunk //= 2
    return cur


def save_repro(path, inst: Instance, problems, variants, seed) -> None:
    blob = inst.to_json()
    blob.update(problems=problems, variants=list(variants), seed=seed)
    Path(path).write_text(json.dumps(blob, indent=1))


# --- parameter sweeps ---------------------------------------------------------------

def parse_values(text: str, axis: str) -> list:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse sweep values {text!r}") from None
    if not vals:
        raise UsageError("sweep needs at least one value")
    if axis in ("minpts", "n"):
        if any(v != int(v) or v < 1 for v in vals):
            raise UsageError(f"{axis} values must be positive integers")
        return [int(v) for v in vals]
    if any(not v > 0 for v in vals):
        raise UsageError("eps values must be positive")
    return vals


def bench_rows(axis: str, values, eps: float, min_pts: int, variants, repeats: int,
               dataset: Dataset | None = None, gen: GenConfig | None = None, seed: int = 0):
    """One row per (value, variant): counters from the last run, median times.

    Repeats go round-robin over all rows, so a stretch of machine load is
    spread over every row instead of inflating one of them. As with timeit,
    the cyclic garbage collector is paused while a run is timed.
    """
    if axis not in ("eps", "minpts", "n"):
        raise UsageError(f"sweep axis must be eps, minpts or n, got {axis!r}")
    if axis == "n" and gen is None:
        raise UsageError("an n sweep needs a generator config")
    if repeats < 1:
        raise UsageError("repeats must be at least 1")
    base = dataset if dataset is not None else (seed_spreader(gen) if axis != "n" else None)
    jobs = []
    for v in values:
        ds, e, mp = base, eps, min_pts
        if axis == "n":
            ds = seed_spreader(GenConfig(**{**gen.__dict__, "n": int(v)}))
        elif axis == "eps":
            e = float(v)
        else:
            mp = int(v)
        for variant in variants:
            jobs.append((ds, Params(e, mp), variant))
    times = [{c: [] for c in TIME_COLUMNS} for _ in jobs]
    last = [None] * len(jobs)
    for _ in range(repeats):
        for i, (ds, params, variant) in enumerate(jobs):
            gc.collect()
            gc.disable()
            try:
                _, stats = grit_dbscan(ds, params, variant=variant, seed=seed)
            finally:
                gc.enable()
            sd = stats.as_dict()
            for c in TIME_COLUMNS:
                times[i][c].append(sd[c])
            last[i] = stats
    for (ds, params, variant), stats, t in zip(jobs, last, times):
        row = {
            "variant": variant, "d": ds.d, "n": ds.n, "eps": params.eps, "minpts": params.min_pts,
            "grid_count": stats.grid_count, "eta": stats.eta, "max_kappa": stats.max_kappa,
            "dist_evals": stats.distance_evaluations,
        }
        row.update({c: f"{statistics.median(t[c]):.6f}" for c in TIME_COLUMNS})
        yield row
