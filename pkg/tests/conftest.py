import math

import numpy as np
import pytest

from gritdbscan.core import Dataset

# Nine non-empty cells of side 1 (eps = sqrt(2) in the plane), named g1..g9
# in lexicographic order. One point sits at x = 0 and one at y = 0 so the
# lattice origin is (0, 0).
FIG_CELLS = {
    "g1": (0, 1), "g2": (1, 1), "g3": (1, 3), "g4": (2, 0), "g5": (2, 4),
    "g6": (3, 3), "g7": (3, 4), "g8": (3, 5), "g9": (5, 2),
}
FIG_OFFSETS = {
    "g1": [(0.0, 0.5), (0.6, 0.2)],
    "g2": [(0.3, 0.3), (0.7, 0.8)],
    "g3": [(0.2, 0.9), (0.5, 0.5), (0.9, 0.1)],
    "g4": [(0.5, 0.0), (0.4, 0.6)],
    "g5": [(0.1, 0.1), (0.8, 0.4)],
    "g6": [(0.5, 0.5), (0.25, 0.75), (0.9, 0.2)],
    "g7": [(0.3, 0.6), (0.6, 0.3)],
    "g8": [(0.5, 0.5)],
    "g9": [(0.2, 0.4), (0.7, 0.9)],
}
FIG_EPS = math.sqrt(2.0)

ACCEPTANCE_LINES: list[str] = []


def fig_points() -> np.ndarray:
    rows = []
    for name, (gx, gy) in FIG_CELLS.items():
        for ox, oy in FIG_OFFSETS[name]:
            rows.append((gx + ox, gy + oy))
    return np.array(rows)


@pytest.fixture
def fig_dataset() -> Dataset:
    return Dataset(fig_points())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
