"""Exact DBSCAN on a grid tree with pruned merge tests."""
from .core import NOISE, Clustering, Dataset, Params, PointClass, UsageError, distance, squared_distance
from .cluster import RunStats, grit_dbscan
from .oracle import brute_dbscan, equivalent

__all__ = [
    "NOISE", "Clustering", "Dataset", "Params", "PointClass", "UsageError",
    "distance", "squared_distance", "RunStats", "grit_dbscan", "brute_dbscan", "equivalent",
]
