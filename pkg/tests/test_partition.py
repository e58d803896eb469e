import math
from collections import defaultdict

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from gritdbscan.core import Dataset, UsageError
from gritdbscan.partition import counting_sort, grid_id, grid_ids, partition, radix_sort_points


def test_grid_id_examples():
    assert grid_id((3.0, -1.0), (3.0, -1.0), 0.5) == (0, 0)
    assert grid_id((1.5, 0.2), (0.0, 0.0), math.sqrt(2) / math.sqrt(2)) == (1, 0)
    with pytest.raises(UsageError):
        grid_id((0, 0), (0, 0), 0.0)


def test_grid_id_inverse_sampling():
    rng = np.random.default_rng(3)
    side = 0.37
    mins = np.array([-2.0, 5.0, 1.0])
    cells = rng.integers(0, 50, (10_000, 3))
    # keep clear of the cell faces so rounding in the sample itself cannot move it
    frac = rng.uniform(0.001, 0.999, (10_000, 3))
    pts = mins + (cells + frac) * side
    assert np.array_equal(grid_ids(pts, mins, side), cells)


def test_counting_sort_is_stable():
    keys = np.array([2, 0, 2, 1, 0])
    assert counting_sort(keys, np.arange(5), 3).tolist() == [1, 4, 3, 0, 2]


def test_radix_sort_examples():
    ids = np.array([[0, 1], [0, 2], [1, 0]])
    assert radix_sort_points(ids).tolist() == [0, 1, 2]
    same = np.tile([4, 4, 4], (6, 1))
    assert radix_sort_points(same).tolist() == list(range(6))
    with pytest.raises(UsageError):
        radix_sort_points(np.array([[0, -1]]))


@given(arrays(np.int64, st.tuples(st.integers(0, 60), st.integers(1, 5)), elements=st.integers(0, 12)))
def test_radix_sort_matches_comparison_sort(ids):
    order = radix_sort_points(ids)
    expect = sorted(range(len(ids)), key=lambda i: (tuple(ids[i]), i))
    assert order.tolist() == expect


def test_partition_worked_example(fig_dataset):
    from conftest import FIG_CELLS, FIG_EPS
    gs = partition(fig_dataset, FIG_EPS)
    assert len(gs) == 9
    assert gs.eta == 5
    assert [gs.grid_id(k) for k in range(9)] == list(FIG_CELLS.values())


def test_partition_identical_points():
    gs = partition(Dataset(np.full((7, 3), 2.5)), 1.0)
    assert len(gs) == 1
    assert sorted(gs.members(0).tolist()) == list(range(7))


def test_partition_empty():
    gs = partition(Dataset(np.empty((0, 0))), 1.0)
    assert len(gs) == 0


@settings(max_examples=60, deadline=None)
@given(
    arrays(np.float64, st.tuples(st.integers(1, 80), st.integers(2, 4)),
           elements=st.floats(-50, 50, allow_nan=False)),
    st.floats(0.1, 20),
)
def test_partition_matches_map_and_group(pts, eps):
    gs = partition(Dataset(pts), eps)
    side = eps / math.sqrt(pts.shape[1])
    mins = pts.min(axis=0)
    groups = defaultdict(set)
    for i, p in enumerate(pts):
        groups[grid_id(p, mins, side)].add(i)
    got = {gs.grid_id(k): set(gs.members(k).tolist()) for k in range(len(gs))}
    assert got == dict(groups)
    keys = [gs.grid_id(k) for k in range(len(gs))]
    assert keys == sorted(keys)
    assert gs.eta == max(max(k) for k in keys)
    assert np.array_equal(gs.point_grid()[gs.members(0)], np.zeros(len(gs.members(0))))
    # every member lies in a cell of diameter eps
    for k in range(len(gs)):
        m = pts[gs.members(k)]
        assert np.sqrt(((m[:, None] - m[None]) ** 2).sum(axis=2)).max() <= eps * (1 + 1e-12)
