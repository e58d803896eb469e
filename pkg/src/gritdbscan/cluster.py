"""The full grid-tree DBSCAN pipeline.

partition -> grid tree -> Nei(g) per grid -> core points -> merge core
grids -> border/noise assignment. Merging comes in two flavours: a
breadth-first expansion over unclassified core grids ("bfs"), and a
low-density-first pass over core grids sorted by core count that keeps
components in a union-find and skips pairs already joined ("ldf").
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass

import numpy as np

from .core import NOISE, Clustering, Params, PointClass, UsageError, as_dataset
from .gridtree import GridTree, all_neighbors, build
from .merge import fast_merge
from .partition import GridSet, counting_sort, partition

VARIANTS = {"bfs": "bfs", "grit": "bfs", "ldf": "ldf", "grit-ldf": "ldf"}

# Flipped only by the verification harness to prove it catches a wrong
# core-count comparison.
_INJECT_BUG = False


@dataclass
class CoreFlags:
    is_core: np.ndarray
    core_members: list[np.ndarray]
    distance_evaluations: int = 0

    @property
    def counts(self) -> np.ndarray:
        return np.array([len(c) for c in self.core_members], dtype=np.int64)

    def is_core_grid(self, k: int) -> bool:
        return len(self.core_members[k]) > 0


@dataclass
class GridClusterMap:
    grid_cluster: np.ndarray
    n_clusters: int
    merge_tests: int = 0
    skipped_tests: int = 0
    max_kappa: int = 0
    distance_evaluations: int = 0


@dataclass
class RunStats:
    variant: str = "bfs"
    t_partition: float = 0.0
    t_index: float = 0.0
    t_core: float = 0.0
    t_merge: float = 0.0
    t_assign: float = 0.0
    distance_evaluations: int = 0
    max_kappa: int = 0
    grid_count: int = 0
    eta: int = 0
    merge_tests: int = 0
    n_clusters: int = 0

    @property
    def t_total(self) -> float:
        return self.t_partition + self.t_index + self.t_core + self.t_merge + self.t_assign

    def as_dict(self) -> dict:
        out = asdict(self)
        out["t_total"] = self.t_total
        return out


class UnionFind:
    """Disjoint sets with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def _dists(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=2))


def identify_core_points(points: np.ndarray, grids: GridSet, nei: list[list[int]],
                         params: Params) -> CoreFlags:
    """Flag p as core iff at least minPts points (p included) lie within eps.

    Grids holding minPts points or more are all-core without any distance
    work. Points of sparser grids count neighbours grid by grid in the
    order of ``nei`` and stop once they reach minPts.
    """
    mp, eps = params.min_pts, params.eps
    is_core = np.zeros(len(points), dtype=bool)
    evals = 0
    for k in range(len(grids)):
        mem = grids.members(k)
        if len(mem) >= mp:
            is_core[mem] = True
            continue
        own = points[mem]
        count = np.zeros(len(mem), dtype=np.int64)
        live = np.arange(len(mem))
        for nb in nei[k]:
            dd = _dists(own[live], points[grids.members(nb)])
            evals += dd.size
            count[live] += (dd <= eps).sum(axis=1)
            live = live[count[live] < mp]
            if not live.size:
                break
        is_core[mem[count > mp if _INJECT_BUG else count >= mp]] = True
    core_members = [m[is_core[m]] for m in (grids.members(k) for k in range(len(grids)))]
    return CoreFlags(is_core, core_members, evals)


def _core_sets(points, flags: CoreFlags) -> list[np.ndarray]:
    return [points[m] for m in flags.core_members]


def merge_core_grids_bfs(points, grids: GridSet, nei, flags: CoreFlags, eps: float,
                         seed=0, delta: float = 0.0) -> GridClusterMap:
    """Breadth-first expansion: a core grid joins when FastMerging says yes."""
    rng = np.random.default_rng(seed)
    sets = _core_sets(points, flags)
    G = len(grids)
    is_core_grid = [len(s) > 0 for s in sets]
    grid_cluster = np.full(G, NOISE, dtype=np.int64)
    out = GridClusterMap(grid_cluster, 0)
    cid = 0
    for g in range(G):
        if not is_core_grid[g] or grid_cluster[g] != NOISE:
            continue
        grid_cluster[g] = cid
        seeds = [g]
        pos = 0
        while pos < len(seeds):
            cur = seeds[pos]
            pos += 1
            for other in nei[cur]:
                if other == cur or not is_core_grid[other] or grid_cluster[other] != NOISE:
                    continue
                yes, st = fast_merge(sets[cur], sets[other], eps, seed=rng, delta=delta)
                out.merge_tests += 1
                out.max_kappa = max(out.max_kappa, st.iterations)
                out.distance_evaluations += st.distance_evaluations
                if yes:
                    grid_cluster[other] = cid
                    seeds.append(other)
        cid += 1
    out.n_clusters = cid
    return out


def radix_sort_counts(counts) -> np.ndarray:
    """Stable ascending order of non-negative integers, base-256 digits."""
    counts = np.asarray(counts, dtype=np.int64)
    order = np.arange(len(counts), dtype=np.int64)
    if not len(counts):
        return order
    top = int(counts.max())
    shift = 0
    while True:
        order = counting_sort((counts >> shift) & 255, order, 256)
        shift += 8
        if top >> shift == 0:
            return order


def merge_core_grids_ldf(points, grids: GridSet, nei, flags: CoreFlags, eps: float,
                         seed=0, delta: float = 0.0) -> GridClusterMap:
    """Low-density-first merging with union-find.

    Core grids are visited by ascending core count. A neighbouring pair is
    tested only when the two grids are in different sets and the
    neighbour has not been visited yet (otherwise the pair was settled
    from the other side).
    """
    rng = np.random.default_rng(seed)
    sets = _core_sets(points, flags)
    G = len(grids)
    counts = flags.counts
    core_grids = np.flatnonzero(counts > 0)
    visit = core_grids[radix_sort_counts(counts[core_grids])]
    uf = UnionFind(G)
    visited = np.zeros(G, dtype=bool)
    out = GridClusterMap(np.full(G, NOISE, dtype=np.int64), 0)
    for g in visit.tolist():
        for other in nei[g]:
            if other == g or counts[other] == 0 or visited[other]:
                continue
            if uf.find(g) == uf.find(other):
                out.skipped_tests += 1
                continue
            yes, st = fast_merge(sets[g], sets[other], eps, seed=rng, delta=delta)
            out.merge_tests += 1
            out.max_kappa = max(out.max_kappa, st.iterations)
            out.distance_evaluations += st.distance_evaluations
            if yes:
                uf.union(g, other)
        visited[g] = True
    ids: dict[int, int] = {}
    for g in core_grids.tolist():
        out.grid_cluster[g] = ids.setdefault(uf.find(g), len(ids))
    out.n_clusters = len(ids)
    return out


def assign_non_core(points, grids: GridSet, nei, flags: CoreFlags, cmap: GridClusterMap,
                    eps: float) -> Clustering:
    """Label core points by grid; a non-core point takes the cluster of the
    first core point within eps found along ``nei``, else it is noise."""
    n = len(points)
    labels = np.full(n, NOISE, dtype=np.int64)
    classes = np.full(n, PointClass.NOISE, dtype=np.int8)
    sets = _core_sets(points, flags)
    for k in range(len(grids)):
        mem = grids.members(k)
        core_mem = flags.core_members[k]
        labels[core_mem] = cmap.grid_cluster[k]
        classes[core_mem] = PointClass.CORE
        pending = mem[~flags.is_core[mem]]
        if not pending.size:
            continue
        for nb in nei[k]:
            if not len(sets[nb]):
                continue
            if nb == k:
                hit = np.ones(len(pending), dtype=bool)
            else:
                hit = (_dists(points[pending], sets[nb]) <= eps).any(axis=1)
            labels[pending[hit]] = cmap.grid_cluster[nb]
            classes[pending[hit]] = PointClass.BORDER
            pending = pending[~hit]
            if not pending.size:
                break
    return Clustering(labels, classes)


def grit_dbscan(dataset, params: Params, variant: str = "bfs", seed=0) -> tuple[Clustering, RunStats]:
    """Exact DBSCAN via grids, a grid tree and pruned merge tests.

    ``params.delta > 0`` switches the merge test to its approximate form.
    """
    if variant not in VARIANTS:
        raise UsageError(f"unknown variant {variant!r}; choose from {sorted(VARIANTS)}")
    kind = VARIANTS[variant]
    ds = as_dataset(dataset)
    stats = RunStats(variant=variant)
    if ds.n == 0:
        return Clustering(np.empty(0, np.int64), np.empty(0, np.int8)), stats
    pts = ds.points

    t0 = time.perf_counter()
    grids = partition(ds, params.eps)
    t1 = time.perf_counter()
    tree: GridTree = build(grids, params.min_pts)
    nei = all_neighbors(tree, grids)
    t2 = time.perf_counter()
    flags = identify_core_points(pts, grids, nei, params)
    t3 = time.perf_counter()
    merge = merge_core_grids_bfs if kind == "bfs" else merge_core_grids_ldf
    cmap = merge(pts, grids, nei, flags, params.eps, seed=seed, delta=params.delta)
    t4 = time.perf_counter()
    result = assign_non_core(pts, grids, nei, flags, cmap, params.eps)
    t5 = time.perf_counter()

    stats.t_partition, stats.t_index, stats.t_core = t1 - t0, t2 - t1, t3 - t2
    stats.t_merge, stats.t_assign = t4 - t3, t5 - t4
    stats.distance_evaluations = flags.distance_evaluations + cmap.distance_evaluations
    stats.max_kappa = cmap.max_kappa
    stats.grid_count = len(grids)
    stats.eta = grids.eta
    stats.merge_tests = cmap.merge_tests
    stats.n_clusters = cmap.n_clusters
    return result, stats
