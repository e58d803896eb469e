"""Domain types and the Euclidean metric shared by every other module."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

NOISE = -1


class UsageError(ValueError):
    """Raised when a caller violates an operation's preconditions."""


class PointClass(enum.IntEnum):
    CORE = 0
    BORDER = 1
    NOISE = 2

    @property
    def letter(self) -> str:
        return "CBN"[self.value]


@dataclass(frozen=True)
class Dataset:
    """n points in d-dimensional space, held as an (n, d) float64 array.

    An empty dataset is allowed and keeps whatever column count it was
    given; a non-empty one needs d >= 2 and finite coordinates.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, copy=True)
        if pts.ndim == 1 and pts.size == 0:
            pts = pts.reshape(0, 0)
        if pts.ndim != 2:
            raise UsageError(f"points must be a 2-D array, got shape {pts.shape}")
        if pts.shape[0] > 0:
            if pts.shape[1] < 2:
                raise UsageError(f"dimension must be at least 2, got d={pts.shape[1]}")
            if not np.isfinite(pts).all():
                raise UsageError("all coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[float]]) -> "Dataset":
        rows = [tuple(r) for r in rows]
        if rows and len({len(r) for r in rows}) != 1:
            raise UsageError("ragged rows: every point needs the same number of coordinates")
        return cls(np.array(rows, dtype=np.float64).reshape(len(rows), -1 if rows else 0))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.n


def as_dataset(data) -> Dataset:
    return data if isinstance(data, Dataset) else Dataset(np.asarray(data, dtype=np.float64))


@dataclass(frozen=True)
class Params:
    eps: float
    min_pts: int
    delta: float = 0.0

    def __post_init__(self):
        if not (self.eps > 0 and math.isfinite(self.eps)):
            raise UsageError(f"eps must be a positive finite number, got {self.eps!r}")
        if int(self.min_pts) != self.min_pts or self.min_pts < 1:
            raise UsageError(f"minPts must be an integer >= 1, got {self.min_pts!r}")
        if not self.delta >= 0:
            raise UsageError(f"delta must be non-negative, got {self.delta!r}")
        object.__setattr__(self, "min_pts", int(self.min_pts))


@dataclass
class Clustering:
    """Per-point cluster label (NOISE for noise) and PointClass code."""

    labels: np.ndarray
    classes: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)
        self.classes = np.asarray(self.classes, dtype=np.int8)
        if self.labels.shape != self.classes.shape:
            raise UsageError("labels and classes must have the same length")

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def core(self) -> np.ndarray:
        return self.classes == PointClass.CORE

    @property
    def n_clusters(self) -> int:
        lab = self.labels[self.labels != NOISE]
        return int(np.unique(lab).size)

    def check(self) -> None:
        """Assert the structural invariants of a finished clustering."""
        noise_lab = self.labels == NOISE
        noise_cls = self.classes == PointClass.NOISE
        if not np.array_equal(noise_lab, noise_cls):
            raise AssertionError("label NOISE must coincide with class Noise")
        carried = set(np.unique(self.labels[~noise_lab]).tolist())
        by_core = set(np.unique(self.labels[self.core]).tolist())
        if carried - by_core:
            raise AssertionError(f"clusters without a core point: {sorted(carried - by_core)}")


def _check_dims(p, q):
    if len(p) != len(q):
        raise UsageError(f"dimension mismatch: {len(p)} vs {len(q)}")


def squared_distance(p, q) -> float:
    _check_dims(p, q)
    s = 0.0
    for a, b in zip(p, q):
        t = float(a) - float(b)
        s += t * t
    return s


def distance(p, q) -> float:
    return math.sqrt(squared_distance(p, q))
