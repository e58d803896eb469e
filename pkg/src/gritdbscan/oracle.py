"""Quadratic reference implementations and the clustering comparator.

Nothing here touches the grid, tree or merge code: the references work
straight from pairwise distances so that a bug in the fast path cannot
hide behind the same bug in its check.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .core import NOISE, Clustering, Params, PointClass, UsageError, as_dataset, distance


def pairwise_within(points: np.ndarray, eps: float) -> np.ndarray:
    """Boolean matrix of dist(p_a, p_b) <= eps, including the diagonal."""
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=2)) <= eps


def brute_dbscan(dataset, params: Params) -> Clustering:
    """Textbook DBSCAN: neighbourhood counts, flood fill over cores, borders last."""
    pts = as_dataset(dataset).points
    n = len(pts)
    if n == 0:
        return Clustering(np.empty(0, np.int64), np.empty(0, np.int8))
    near = pairwise_within(pts, params.eps)
    is_core = near.sum(axis=1) >= params.min_pts

    labels = np.full(n, NOISE, dtype=np.int64)
    cid = 0
    for start in range(n):
        if not is_core[start] or labels[start] != NOISE:
            continue
        labels[start] = cid
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for b in np.flatnonzero(near[a] & is_core):
                if labels[b] == NOISE:
                    labels[b] = cid
                    queue.append(b)
        cid += 1

    classes = np.full(n, PointClass.NOISE, dtype=np.int8)
    classes[is_core] = PointClass.CORE
    for a in np.flatnonzero(~is_core):
        reach = np.flatnonzero(near[a] & is_core)
        if reach.size:
            labels[a] = labels[reach[0]]
            classes[a] = PointClass.BORDER
    return Clustering(labels, classes)


def union_find_core_partition(dataset, params: Params) -> tuple[np.ndarray, np.ndarray]:
    """Second reference: core flags and core-point component roots via union-find."""
    pts = as_dataset(dataset).points
    n = len(pts)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    counts = [0] * n
    pairs = []
    for a in range(n):
        for b in range(a, n):
            if distance(pts[a], pts[b]) <= params.eps:
                counts[a] += 1
                if b != a:
                    counts[b] += 1
                    pairs.append((a, b))
    core = np.array([c >= params.min_pts for c in counts], dtype=bool)
    for a, b in pairs:
        if core[a] and core[b]:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    roots = np.array([find(a) if core[a] else -1 for a in range(n)], dtype=np.int64)
    return core, roots


def brute_min_dist(s_a, s_b) -> float:
    s_a = np.asarray(s_a, dtype=np.float64)
    s_b = np.asarray(s_b, dtype=np.float64)
    if s_a.ndim != 2 or s_b.ndim != 2 or not len(s_a) or not len(s_b):
        raise UsageError("brute_min_dist needs two non-empty point sets")
    best = np.inf
    for y in s_b:
        best = min(best, float(np.sqrt(((s_a - y) ** 2).sum(axis=1)).min()))
    return best


def brute_neighbor_grids(grids, g, eps: float | None = None) -> set[int]:
    """Indices of non-empty grids whose cell is within eps of cell ``g``.

    Cells are half-open, so two cells at box distance exactly eps hold no
    pair of points within eps; the test is therefore strict. It is done on
    the integer form sum(gap^2) < d, gap = max(|g_j - g'_j| - 1, 0), which
    is the box distance divided by the cell side eps / sqrt(d), squared.
    """
    g = np.asarray(g, dtype=np.int64)
    d = grids.ids.shape[1]
    out = set()
    for k in range(len(grids)):
        total = 0
        for a, b in zip(grids.ids[k].tolist(), g.tolist()):
            gap = max(abs(a - b) - 1, 0)
            total += gap * gap
        if total < d:
            out.add(k)
    return out


def box_distance(g1, g2, side: float) -> float:
    return float(np.sqrt(sum((max(abs(int(a) - int(b)) - 1, 0) * side) ** 2 for a, b in zip(g1, g2))))


@dataclass
class Equivalence:
    ok: bool
    problems: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    def report(self) -> str:
        return "equivalent" if self.ok else "; ".join(self.problems)


def _core_partition_map(a_lab, b_lab, core, problems):
    mapping, back = {}, {}
    for i in np.flatnonzero(core):
        la, lb = int(a_lab[i]), int(b_lab[i])
        if mapping.setdefault(la, lb) != lb or back.setdefault(lb, la) != la:
            problems.append(f"core point {i}: cluster {la} vs {lb} breaks the one-to-one relabeling")
            return None
    return mapping


def _borders_valid(c: Clustering, points, eps, name, problems):
    core_idx = np.flatnonzero(c.core)
    for i in np.flatnonzero(c.classes == PointClass.BORDER):
        same = core_idx[c.labels[core_idx] == c.labels[i]]
        if not same.size or not (np.sqrt(((points[same] - points[i]) ** 2).sum(axis=1)) <= eps).any():
            problems.append(f"{name}: border point {i} has no core point of cluster {c.labels[i]} within eps")
            return


def equivalent(a: Clustering, b: Clustering, dataset=None, eps: float | None = None) -> Equivalence:
    """Same DBSCAN result up to cluster renaming and border-point choice.

    Checks identical core flags, identical core partitions under a
    bijective relabeling and identical noise sets. Given the points and
    eps, it also checks that every border point sits within eps of a core
    point of the cluster it was assigned to, in both clusterings.
    """
    if len(a) != len(b):
        raise UsageError(f"clusterings cover {len(a)} and {len(b)} points")
    problems: list[str] = []
    diff = np.flatnonzero(a.core != b.core)
    if diff.size:
        problems.append(f"core flags differ at points {diff[:10].tolist()}")
    else:
        _core_partition_map(a.labels, b.labels, a.core, problems)
    noise_a = a.classes == PointClass.NOISE
    noise_b = b.classes == PointClass.NOISE
    diff = np.flatnonzero(noise_a != noise_b)
    if diff.size:
        problems.append(f"noise sets differ at points {diff[:10].tolist()}")
    for c, name in ((a, "first"), (b, "second")):
        bad = np.flatnonzero((c.labels == NOISE) != (c.classes == PointClass.NOISE))
        if bad.size:
            problems.append(f"{name}: label/class mismatch at points {bad[:10].tolist()}")
    if dataset is not None and eps is not None and not problems:
        pts = as_dataset(dataset).points
        _borders_valid(a, pts, eps, "first", problems)
        _borders_valid(b, pts, eps, "second", problems)
    return Equivalence(not problems, problems)
