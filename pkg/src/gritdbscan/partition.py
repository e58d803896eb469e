"""Lattice partitioning: grid identifiers, LSD radix sort, non-empty grids."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Dataset, UsageError, as_dataset


def grid_id(p, mins, side: float) -> tuple[int, ...]:
    """Identifier of the cell of side ``side`` holding ``p``; cells are half-open."""
    if not side > 0:
        raise UsageError(f"cell side must be positive, got {side!r}")
    return tuple(int(math.floor((float(a) - float(m)) / side)) for a, m in zip(p, mins))


def grid_ids(points: np.ndarray, mins: np.ndarray, side: float) -> np.ndarray:
    """Vectorised :func:`grid_id` over an (n, d) array."""
    if not side > 0:
        raise UsageError(f"cell side must be positive, got {side!r}")
    return np.floor((points - mins) / side).astype(np.int64)


def counting_sort(keys: np.ndarray, order: np.ndarray, n_buckets: int) -> np.ndarray:
    """Stable counting sort of ``order`` by ``keys[order]``.

    ``keys`` must hold integers in ``[0, n_buckets)``.
    """
    k = keys[order]
    counts = np.bincount(k, minlength=n_buckets)
    # first output slot of every bucket
    starts = np.zeros(n_buckets, dtype=np.int64)
    np.cumsum(counts[:-1], out=starts[1:])
    out = np.empty_like(order)
    slot = starts.tolist()
    for pos, key in zip(order.tolist(), k.tolist()):
        out[slot[key]] = pos
        slot[key] += 1
    return out


def radix_sort_points(ids, eta: int | None = None) -> np.ndarray:
    """Permutation sorting identifier rows lexicographically.

    Least-significant digit first: one stable counting-sort pass per
    dimension, last dimension first. Runs in O(d * (n + eta)).
    """
    ids = np.asarray(ids, dtype=np.int64)
    n = ids.shape[0]
    order = np.arange(n, dtype=np.int64)
    if n == 0:
        return order
    if ids.ndim != 2:
        raise UsageError("identifiers must form an (n, d) array")
    if eta is None:
        eta = int(ids.max())
    if ids.min() < 0:
        raise UsageError("identifier coordinates must be non-negative")
    for j in range(ids.shape[1] - 1, -1, -1):
        order = counting_sort(ids[:, j], order, eta + 1)
    return order


@dataclass(frozen=True)
class GridSet:
    """The non-empty grids of a dataset, in lexicographic identifier order.

    Grid ``k`` has identifier ``ids[k]`` and members
    ``order[starts[k]:starts[k + 1]]``.
    """

    ids: np.ndarray
    starts: np.ndarray
    order: np.ndarray
    side: float
    mins: np.ndarray
    eta: int
    eps: float

    def __len__(self) -> int:
        return self.ids.shape[0]

    @property
    def d(self) -> int:
        return self.ids.shape[1]

    def members(self, k: int) -> np.ndarray:
        return self.order[self.starts[k]:self.starts[k + 1]]

    def sizes(self) -> np.ndarray:
        return np.diff(self.starts)

    def grid_id(self, k: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.ids[k])

    @property
    def grids(self) -> list[tuple[tuple[int, ...], np.ndarray]]:
        return [(self.grid_id(k), self.members(k)) for k in range(len(self))]

    def point_grid(self) -> np.ndarray:
        """Grid index of every point."""
        out = np.empty(self.order.shape[0], dtype=np.int64)
        out[self.order] = np.repeat(np.arange(len(self)), self.sizes())
        return out

    def index_of(self) -> dict[tuple[int, ...], int]:
        return {self.grid_id(k): k for k in range(len(self))}


def partition(dataset, eps: float) -> GridSet:
    """Split a dataset into non-empty cells of side eps / sqrt(d)."""
    if not eps > 0:
        raise UsageError(f"eps must be positive, got {eps!r}")
    ds: Dataset = as_dataset(dataset)
    d = max(ds.d, 1)
    side = eps / math.sqrt(d)
    if ds.n == 0:
        return GridSet(
            ids=np.empty((0, ds.d), dtype=np.int64),
            starts=np.zeros(1, dtype=np.int64),
            order=np.empty(0, dtype=np.int64),
            side=side, mins=np.zeros(ds.d), eta=0, eps=float(eps),
        )
    pts = ds.points
    mins = pts.min(axis=0)
    ids = grid_ids(pts, mins, side)
    eta = int(ids.max())
    order = radix_sort_points(ids, eta)
    sorted_ids = ids[order]
    # a new grid starts wherever the identifier differs from its predecessor
    change = np.ones(ds.n, dtype=bool)
    change[1:] = (sorted_ids[1:] != sorted_ids[:-1]).any(axis=1)
    starts = np.flatnonzero(change)
    return GridSet(
        ids=sorted_ids[starts],
        starts=np.append(starts, ds.n).astype(np.int64),
        order=order,
        side=side,
        mins=mins,
        eta=eta,
        eps=float(eps),
    )

