"""Grid tree over non-empty grids and the windowed neighbouring-grid query.

The tree has d + 1 levels. Level j + 1 nodes carry the j-th identifier
coordinate as key, so every root-to-leaf path spells a grid identifier and
the leaf points at that grid. Siblings are chained through ``next`` in
increasing key order.

For nodes with more than ``min_pts`` children a lookup table maps
``(node serial, key)`` to the first child whose key lies within
``window = ceil(sqrt(d))`` of ``key``; the query then walks ``next`` links
instead of scanning all children.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import UsageError
from .partition import GridSet


class TreeNode:
    __slots__ = ("serial", "key", "children", "next", "grid")

    def __init__(self, serial: int, key: int | None):
        self.serial = serial
        self.key = key
        self.children: list[TreeNode] = []
        self.next: TreeNode | None = None
        self.grid: int | None = None

    def __repr__(self):
        return f"TreeNode(t{self.serial}, key={self.key})"


def ceil_sqrt(d: int) -> int:
    r = math.isqrt(d)
    return r if r * r == d else r + 1


@dataclass
class GridTree:
    root: TreeNode
    d: int
    eta: int
    min_pts: int
    table: dict[tuple[int, int], TreeNode] = field(default_factory=dict)
    fast_path: bool = True
    n_nodes: int = 1
    n_leaves: int = 0

    @property
    def window(self) -> int:
        return ceil_sqrt(self.d)

    def nodes(self):
        """All nodes in depth-first, creation order."""
        stack = [self.root]
        while stack:
            t = stack.pop()
            yield t
            stack.extend(reversed(t.children))

    def readout(self) -> list[tuple[tuple[int, ...], int]]:
        """(identifier spelled by the path, grid index) for every leaf, left to right."""
        out = []

        def walk(t, prefix):
            if not t.children:
                out.append((prefix, t.grid))
            for c in t.children:
                walk(c, prefix + (c.key,))

        if self.n_leaves:
            walk(self.root, ())
        return out


def build(grids: GridSet, min_pts: int, fast_path: bool = True) -> GridTree:
    """Insert one root-to-leaf path per grid, then fill the lookup table.

    Grids must arrive in lexicographic identifier order; a key smaller than
    the current last child at the branching level means they did not.
    """
    d = grids.d
    serial = 0
    root = TreeNode(serial, None)
    tree = GridTree(root=root, d=d, eta=grids.eta, min_pts=int(min_pts), fast_path=fast_path)
    for k, gid in enumerate(grids.ids.tolist()):
        t = root
        for j in range(d):
            tc = t.children[-1] if t.children else None
            if tc is None or tc.key != gid[j]:
                if tc is not None and tc.key > gid[j]:
                    raise UsageError(f"grids not in lexicographic order at grid {k}: {tuple(gid)}")
                for l in range(j, d):
                    serial += 1
                    nd = TreeNode(serial, gid[l])
                    t.children.append(nd)
                    if tc is not None and l == j:
                        tc.next = nd
                    t = nd
                t.grid = k
                break
            t = tc
        else:
            raise UsageError(f"duplicate grid identifier {tuple(gid)}")
    tree.n_nodes = serial + 1
    tree.n_leaves = len(grids)
    if fast_path:
        _fill_table(tree)
    return tree


def _fill_table(tree: GridTree) -> None:
    w, eta, table = tree.window, tree.eta, tree.table
    for t in tree.nodes():
        if len(t.children) <= tree.min_pts:
            continue
        pos = 0
        for nd in t.children:
            pos = max(pos, nd.key - w)
            while pos <= nd.key + w and pos <= eta:
                table[(t.serial, pos)] = nd
                pos += 1


def children_in_window(node: TreeNode, key: int, tree: GridTree) -> list[TreeNode]:
    """Children of ``node`` whose keys lie in [key - window, key + window]."""
    w = tree.window
    hi = key + w
    if tree.fast_path and len(node.children) > tree.min_pts:
        nd = tree.table.get((node.serial, key))
        if nd is not None:
            out = []
            while nd is not None and nd.key <= hi:
                out.append(nd)
                nd = nd.next
            return out
        if 0 <= key <= tree.eta:
            # every in-range key with a child in its window has an entry
            return []
    lo = key - w
    out = []
    for c in node.children:
        if c.key > hi:
            break
        if c.key >= lo:
            out.append(c)
    return out


def _descend(tree: GridTree, g, trace: list | None = None) -> list[tuple[TreeNode, int, bool]]:
    # frontier entries: (node, offset, path so far equals the query prefix)
    d = tree.d
    if len(g) != d:
        raise UsageError(f"query has {len(g)} coordinates, tree has d={d}")
    frontier = [(tree.root, 0, True)] if tree.n_leaves else []
    for gj in g:
        gj = int(gj)
        nxt = []
        for node, off, exact in frontier:
            for c in children_in_window(node, gj, tree):
                gap = abs(c.key - gj) - 1
                o = off + gap * gap if gap > 0 else off
                if o < d:
                    nxt.append((c, o, exact and c.key == gj))
        frontier = nxt
        if trace is not None:
            trace.append([(t, o) for t, o, _ in frontier])
    return frontier


def frontiers(tree: GridTree, g) -> list[list[tuple[TreeNode, int]]]:
    """Per-level surviving nodes and their accumulated offsets for query ``g``.

    Offsets are integers: offset * side^2 lower-bounds the squared distance
    from cell ``g`` to any cell below the node, so nodes reaching d are cut.
    """
    trace: list = []
    _descend(tree, g, trace)
    return trace


def neighbors(tree: GridTree, g, with_offsets: bool = False) -> list:
    """Non-empty grids whose cell lies within eps of cell ``g``.

    Sorted by offset (counting sort over the d possible values); ``g``
    itself, when non-empty, comes first.
    """
    buckets: list[list] = [[] for _ in range(tree.d)]
    own = []
    for leaf, off, exact in _descend(tree, g):
        (own if exact else buckets[off]).append((leaf.grid, off))
    ordered = own + [item for b in buckets for item in b]
    if with_offsets:
        return ordered
    return [k for k, _ in ordered]


def all_neighbors(tree: GridTree, grids: GridSet) -> list[list[int]]:
    """Nei(g) for every grid, self first."""
    return [neighbors(tree, gid) for gid in grids.ids.tolist()]
