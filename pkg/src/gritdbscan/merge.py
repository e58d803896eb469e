"""Exact decision of MinDist(s_i, s_j) <= eps with triangle and angle pruning.

Alternate nearest-point search between the two sets. Each time a pair
(p, q) is found farther than eps apart, points of the searching set that
provably cannot reach the other set are dropped:

* triangle rule: dist(x, p) < dist(p, q) - eps
* angle rule: the angle between pq and px exceeds every y's maximum angle
  arcsin(eps / |py|) + angle(pq, py)

Both rules only remove points whose distance to the whole other set
exceeds eps, so the yes/no answer is exact.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import UsageError

log = logging.getLogger(__name__)

# removed points, the opposing set, the lambda_y values used for the angle rule
PruneObserver = Callable[[np.ndarray, np.ndarray, np.ndarray], None]


@dataclass
class MergeStats:
    iterations: int = 0
    distance_evaluations: int = 0
    pruned_triangle: int = 0
    pruned_angle: int = 0
    witness: Optional[tuple[np.ndarray, np.ndarray]] = None


def _dists(s: np.ndarray, p: np.ndarray) -> np.ndarray:
    return np.sqrt(((s - p) ** 2).sum(axis=1))


def _as_set(s, name: str) -> np.ndarray:
    a = np.asarray(s, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] == 0:
        raise UsageError(f"{name} must be a non-empty (m, d) point set")
    return a


def nearest_in_set(p, s) -> tuple[int, float]:
    """Index in ``s`` of the point nearest to ``p`` (lowest index on ties) and its distance."""
    s = _as_set(s, "s")
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (s.shape[1],):
        raise UsageError(f"point has {p.size} coordinates, set has d={s.shape[1]}")
    dd = _dists(s, p)
    k = int(np.argmin(dd))
    return k, float(dd[k])


def _cos_between(u: np.ndarray, v: np.ndarray, nu: float, nv: np.ndarray) -> np.ndarray:
    return np.clip((v @ u) / (nu * nv), -1.0, 1.0)


def max_angles(p, q, ys, eps: float, dist_py=None) -> np.ndarray:
    """Maximum angle of every row of ``ys`` with respect to ``p``.

    Any x whose angle between pq and px exceeds the value for y lies
    farther than eps from y. Requires |py| > eps and |pq| > 0.
    """
    p = np.asarray(p, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    pq = np.asarray(q, dtype=np.float64) - p
    npq = math.sqrt(float(pq @ pq))
    npy = _dists(ys, p) if dist_py is None else dist_py
    if npq <= 0:
        raise UsageError("p and q coincide")
    if np.any(npy <= eps):
        raise UsageError("max angle needs dist(p, y) > eps")
    first = np.arcsin(np.clip(eps / npy, -1.0, 1.0))
    return first + np.arccos(_cos_between(pq, ys - p, npq, npy))


def max_angle(p, q, y, eps: float) -> float:
    return float(max_angles(p, q, np.asarray(y, dtype=np.float64)[None, :], eps)[0])


def _prune_mask(s_i, s_j, p, q, d_pq, d_p_sj, eps, stats, observer):
    lam = max_angles(p, q, s_j, eps, dist_py=d_p_sj)
    lam_max = float(lam.max())
    d_px = _dists(s_i, p)
    stats.distance_evaluations += len(s_i)
    by_triangle = d_px < d_pq - eps
    pq = q - p
    with np.errstate(invalid="ignore", divide="ignore"):
        theta = np.arccos(_cos_between(pq, s_i - p, d_pq, d_px))
    by_angle = ~by_triangle & (theta > lam_max)
    stats.pruned_triangle += int(by_triangle.sum())
    stats.pruned_angle += int(by_angle.sum())
    removed = by_triangle | by_angle
    if observer is not None:
        observer(s_i[removed], s_j, lam)
    return ~removed


def prune(s_i, s_j, p, q, eps: float, observer: PruneObserver | None = None) -> np.ndarray:
    """Drop points of ``s_i`` that are farther than eps from all of ``s_j``.

    ``p`` must belong to ``s_i`` and ``q`` must be its nearest point in
    ``s_j``, farther than eps away. ``p`` itself is always dropped.
    """
    s_i = _as_set(s_i, "s_i")
    s_j = _as_set(s_j, "s_j")
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    d_p_sj = _dists(s_j, p)
    d_pq = float(np.sqrt(((q - p) ** 2).sum()))
    if d_pq <= eps:
        raise UsageError("prune requires dist(p, q) > eps")
    if d_p_sj.min() < d_pq:
        raise UsageError("q is not the nearest point to p in s_j")
    if not np.any(np.all(s_i == p, axis=1)):
        raise UsageError("p must be a member of s_i")
    keep = _prune_mask(s_i, s_j, p, q, d_pq, d_p_sj, eps, MergeStats(), observer)
    return s_i[keep]


def fast_merge(s_i, s_j, eps: float, seed=0, delta: float = 0.0,
               observer: PruneObserver | None = None) -> tuple[bool, MergeStats]:
    """Decide whether some p in ``s_i`` and q in ``s_j`` satisfy dist(p, q) <= eps.

    With ``delta > 0`` a pair within eps + delta also counts as yes (the
    pruning itself still uses eps). ``seed`` picks the starting point and
    may be an int or a ``numpy.random.Generator``; it never changes the
    answer. Inputs are not modified.
    """
    a = _as_set(s_i, "s_i")
    b = _as_set(s_j, "s_j")
    if a.shape[1] != b.shape[1]:
        raise UsageError("point sets differ in dimension")
    if not eps > 0 or not delta >= 0:
        raise UsageError("eps must be positive and delta non-negative")
    rng = np.random.default_rng(seed)
    reach = eps + delta
    budget = 3 * (len(a) + len(b))
    stats = MergeStats()
    p = a[int(rng.integers(len(a)))]
    while True:
        stats.iterations += 1
        before = stats.distance_evaluations

        d_pb = _dists(b, p)
        stats.distance_evaluations += len(b)
        k = int(np.argmin(d_pb))
        q = b[k]
        if d_pb[k] <= reach:
            stats.witness = (p, q)
            return True, stats
        a = a[_prune_mask(a, b, p, q, float(d_pb[k]), d_pb, eps, stats, observer)]
        if not len(a):
            return False, stats

        d_qa = _dists(a, q)
        stats.distance_evaluations += len(a)
        k = int(np.argmin(d_qa))
        p = a[k]
        if d_qa[k] <= reach:
            stats.witness = (p, q)
            return True, stats
        b = b[_prune_mask(b, a, q, p, float(d_qa[k]), d_qa, eps, stats, observer)]

        if stats.distance_evaluations - before > budget:
            log.warning("merge iteration used %d distance evaluations, budget %d",
                        stats.distance_evaluations - before, budget)
        if not len(b):
            return False, stats


def fast_merge_approx(s_i, s_j, eps: float, delta: float, seed=0,
                      observer: PruneObserver | None = None) -> tuple[bool, MergeStats]:
    """Relaxed merge test: yes below eps, no above eps + delta, either in between."""
    if not delta > 0:
        raise UsageError("delta must be positive for the approximate merge")
    return fast_merge(s_i, s_j, eps, seed=seed, delta=delta, observer=observer)
