"""Segment tree and range trees.

``LazySegTree`` keeps, per node, a query aggregate (``qagg``) and the update
aggregate (``uagg``) of all updates whose canonical decomposition stopped at
that node.  Updates never propagate downwards; a node recomputes

    qagg = uagg (+ or max) min(qagg(left), qagg(right))

so the root always holds the minimum leaf cost.  Two modes exist: ``"sum"``
(``uagg`` is an accumulator) and ``"max"`` (``uagg`` is a sorted multiset whose
maximum, or 0 when empty, is the node's contribution).

``RangeTree2D`` answers quarter-plane maximum queries over a fixed point set
with mutable weights in O(log^2 n).  ``RangeTreeD`` is a static
multi-level range tree with per-dimension intervals, min/max weight queries
and report-and-delete.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from typing import Iterable, Sequence

from sortedcontainers import SortedList

from .errors import InvariantViolation

NEG_INF = -math.inf
POS_INF = math.inf


class LazySegTree:
    def __init__(self, leaf_count: int, mode: str = "sum"):
        if leaf_count <= 0:
            raise ValueError("leaf_count must be positive")
        if mode not in ("sum", "max"):
            raise ValueError(f"unknown mode {mode!r}")
        self.leaf_count = leaf_count
        self.mode = mode
        self.qagg = [0] * (4 * leaf_count)
        if mode == "sum":
            self.uagg: list = [0] * (4 * leaf_count)
        else:
            self.uagg = [None] * (4 * leaf_count)

    def _own(self, node: int):
        if self.mode == "sum":
            return self.uagg[node]
        bag = self.uagg[node]
        return bag[-1] if bag else 0

    def _pull(self, node: int, leaf: bool) -> None:
        own = self._own(node)
        if leaf:
            self.qagg[node] = own
            return
        below = min(self.qagg[2 * node], self.qagg[2 * node + 1])
        self.qagg[node] = own + below if self.mode == "sum" else max(own, below)

    def _apply(self, node: int, value, remove: bool) -> None:
        if self.mode == "sum":
            self.uagg[node] += -value if remove else value
            return
        bag = self.uagg[node]
        if remove:
            if bag is None or value not in bag:
                raise InvariantViolation(f"removing weight {value!r} that was never inserted")
            bag.remove(value)
        else:
            if bag is None:
                bag = self.uagg[node] = SortedList()
            bag.add(value)

    def update(self, lo: int, hi: int, value, remove: bool = False) -> None:
        """Apply ``value`` to every leaf in ``[lo, hi]`` (or undo it when ``remove``)."""
        if not 0 <= lo <= hi < self.leaf_count:
            raise IndexError(f"bad interval [{lo}, {hi}]")
        self._update(1, 0, self.leaf_count - 1, lo, hi, value, remove)

    def _update(self, node, l, r, lo, hi, value, remove):
        if lo <= l and r <= hi:
            self._apply(node, value, remove)
            self._pull(node, l == r)
            return
        mid = (l + r) // 2
        if lo <= mid:
            self._update(2 * node, l, mid, lo, hi, value, remove)
        if hi > mid:
            self._update(2 * node + 1, mid + 1, r, lo, hi, value, remove)
        self._pull(node, False)

    def global_min(self):
        return self.qagg[1]

    def argmin(self) -> int:
        """Index of a leaf whose cost equals the root minimum."""
        node, l, r = 1, 0, self.leaf_count - 1
        while l < r:
            mid = (l + r) // 2
            if self.qagg[2 * node] <= self.qagg[2 * node + 1]:
                node, r = 2 * node, mid
            else:
                node, l = 2 * node + 1, mid + 1
        return l

    def value(self, p: int):
        """Current cost of leaf ``p`` (aggregate of the updates on its root path)."""
        node, l, r = 1, 0, self.leaf_count - 1
        acc = self._own(1)
        while l < r:
            mid = (l + r) // 2
            if p <= mid:
                node, r = 2 * node, mid
            else:
                node, l = 2 * node + 1, mid + 1
            own = self._own(node)
            acc = acc + own if self.mode == "sum" else max(acc, own)
        return acc

    def state(self):
        """Hashable snapshot of all node aggregates, for equality checks."""
        if self.mode == "sum":
            return tuple(self.qagg), tuple(self.uagg)
        return tuple(self.qagg), tuple(tuple(b) if b else () for b in self.uagg)


def seg_update(tree: LazySegTree, lo: int, hi: int, delta, direction: str = "add") -> None:
    if direction not in ("add", "remove"):
        raise ValueError(f"unknown direction {direction!r}")
    tree.update(lo, hi, delta, remove=direction == "remove")


def seg_global_min(tree: LazySegTree):
    return tree.global_min()


class _MaxArray:
    """Point-update / prefix-max array tree."""

    __slots__ = ("size", "data")

    def __init__(self, n: int):
        size = 1
        while size < max(n, 1):
            size *= 2
        self.size = size
        self.data = [NEG_INF] * (2 * size)

    def set(self, i: int, w) -> None:
        i += self.size
        self.data[i] = w
        i >>= 1
        while i:
            self.data[i] = max(self.data[2 * i], self.data[2 * i + 1])
            i >>= 1

    def prefix_max(self, k: int):
        best = NEG_INF
        l, r = self.size, self.size + k
        while l < r:
            if l & 1:
                best = max(best, self.data[l])
                l += 1
            if r & 1:
                r -= 1
                best = max(best, self.data[r])
            l >>= 1
            r >>= 1
        return best


class RangeTree2D:
    """Dominance (quarter-plane) maximum over a fixed point set with mutable weights."""

    def __init__(self, points: Sequence[tuple[float, float]]):
        self.points = [tuple(p) for p in points]
        n = len(self.points)
        self.weights = [NEG_INF] * n
        self.order = sorted(range(n), key=lambda i: (self.points[i][0], i))
        self.rank = [0] * n
        for r, i in enumerate(self.order):
            self.rank[i] = r
        self.xs = [self.points[i][0] for i in self.order]
        size = 1
        while size < max(n, 1):
            size *= 2
        self.size = size
        self.node_ys: list[list] = [[] for _ in range(2 * size)]
        self.node_tree: list[_MaxArray | None] = [None] * (2 * size)
        self.node_pos: list[dict] = [dict() for _ in range(2 * size)]
        members: list[list[int]] = [[] for _ in range(2 * size)]
        for r, i in enumerate(self.order):
            members[size + r] = [i]
        for node in range(size - 1, 0, -1):
            members[node] = members[2 * node] + members[2 * node + 1]
        for node in range(1, 2 * size):
            ids = sorted(members[node], key=lambda i: (self.points[i][1], i))
            self.node_ys[node] = [self.points[i][1] for i in ids]
            self.node_pos[node] = {pid: k for k, pid in enumerate(ids)}
            if ids:
                self.node_tree[node] = _MaxArray(len(ids))

    def set_weight(self, i: int, w) -> None:
        self.weights[i] = w
        node = self.size + self.rank[i]
        while node:
            self.node_tree[node].set(self.node_pos[node][i], w)
            node >>= 1

    def quarterplane_max(self, qx, qy):
        """Max weight over points with x <= qx and y <= qy (-inf if none)."""
        cnt = bisect_right(self.xs, qx)
        best = NEG_INF
        l, r = self.size, self.size + cnt
        while l < r:
            if l & 1:
                best = max(best, self._node_max(l, qy))
                l += 1
            if r & 1:
                r -= 1
                best = max(best, self._node_max(r, qy))
            l >>= 1
            r >>= 1
        return best

    def _node_max(self, node: int, qy):
        tree = self.node_tree[node]
        if tree is None:
            return NEG_INF
        return tree.prefix_max(bisect_right(self.node_ys[node], qy))


def quarterplane_max(tree: RangeTree2D, qx, qy):
    return tree.quarterplane_max(qx, qy)


def set_weight(tree: RangeTree2D, i: int, w) -> None:
    tree.set_weight(i, w)


def _normalize(interval) -> tuple[float, float, bool, bool]:
    if interval is None:
        return (NEG_INF, POS_INF, False, False)
    if len(interval) == 2:
        lo, hi = interval
        return (NEG_INF if lo is None else lo, POS_INF if hi is None else hi, False, False)
    lo, hi, lo_open, hi_open = interval
    return (NEG_INF if lo is None else lo, POS_INF if hi is None else hi, bool(lo_open), bool(hi_open))


class _Level:
    """One level of the multi-level range tree, keyed on coordinate ``dim``."""

    __slots__ = ("dim", "last", "ids", "keys", "pos", "size", "sub", "mn", "mx", "alive")

    def __init__(self, ids: list[int], dim: int, coords, weights, d: int):
        self.dim = dim
        self.last = dim == d - 1
        self.ids = sorted(ids, key=lambda i: (coords[i][dim], i))
        self.keys = [coords[i][dim] for i in self.ids]
        self.pos = {pid: k for k, pid in enumerate(self.ids)}
        m = len(self.ids)
        size = 1
        while size < max(m, 1):
            size *= 2
        self.size = size
        if self.last:
            self.mn = [POS_INF] * (2 * size)
            self.mx = [NEG_INF] * (2 * size)
            self.alive = [0] * (2 * size)
            for k, pid in enumerate(self.ids):
                self.mn[size + k] = self.mx[size + k] = weights[pid]
                self.alive[size + k] = 1
            for node in range(size - 1, 0, -1):
                self._pull(node)
            self.sub = None
        else:
            self.sub = [None] * (2 * size)
            for node in range(1, 2 * size):
                lo, hi = self._span(node)
                lo, hi = min(lo, m), min(hi, m)
                if lo < hi:
                    self.sub[node] = _Level(self.ids[lo:hi], dim + 1, coords, weights, d)

    def _span(self, node: int) -> tuple[int, int]:
        depth = node.bit_length() - 1
        width = self.size >> depth
        start = (node - (1 << depth)) * width
        return start, start + width

    def _pull(self, node: int) -> None:
        a, b = 2 * node, 2 * node + 1
        self.mn[node] = min(self.mn[a], self.mn[b])
        self.mx[node] = max(self.mx[a], self.mx[b])
        self.alive[node] = self.alive[a] + self.alive[b]

    def _canonical(self, ranges) -> list[int]:
        lo, hi, lo_open, hi_open = ranges[self.dim]
        a = bisect_right(self.keys, lo) if lo_open else bisect_left(self.keys, lo)
        b = bisect_left(self.keys, hi) if hi_open else bisect_right(self.keys, hi)
        nodes = []
        l, r = a + self.size, b + self.size
        while l < r:
            if l & 1:
                nodes.append(l)
                l += 1
            if r & 1:
                r -= 1
                nodes.append(r)
            l >>= 1
            r >>= 1
        return nodes

    def minmax(self, ranges, want_max: bool):
        best = NEG_INF if want_max else POS_INF
        for node in self._canonical(ranges):
            if self.last:
                val = self.mx[node] if want_max else self.mn[node]
            else:
                val = self.sub[node].minmax(ranges, want_max)
            best = max(best, val) if want_max else min(best, val)
        return best

    def report(self, ranges, out: list[int]) -> None:
        for node in self._canonical(ranges):
            if self.last:
                self._collect(node, out)
            else:
                self.sub[node].report(ranges, out)

    def _collect(self, node: int, out: list[int]) -> None:
        if not self.alive[node]:
            return
        if node >= self.size:
            out.append(self.ids[node - self.size])
            return
        self._collect(2 * node, out)
        self._collect(2 * node + 1, out)

    def delete(self, pid: int) -> None:
        node = self.size + self.pos[pid]
        if self.last:
            self.mn[node], self.mx[node], self.alive[node] = POS_INF, NEG_INF, 0
            node >>= 1
            while node:
                self._pull(node)
                node >>= 1
            return
        while node:
            self.sub[node].delete(pid)
            node >>= 1


class RangeTreeD:
    """d-dimensional orthogonal range tree over weighted points.

    Ranges are one interval per dimension: ``None`` (unbounded), ``(lo, hi)``
    closed, or ``(lo, hi, lo_open, hi_open)``; ``None`` endpoints mean infinity.
    """

    def __init__(self, points: Sequence[Sequence[float]], weights: Sequence[float] | None = None):
        self.points = [tuple(p) for p in points]
        self.d = len(self.points[0]) if self.points else 1
        if any(len(p) != self.d for p in self.points):
            raise ValueError("points must share a dimension")
        self.weights = list(weights) if weights is not None else [0] * len(self.points)
        self.deleted: set[int] = set()
        self.root = (
            _Level(list(range(len(self.points))), 0, self.points, self.weights, self.d)
            if self.points
            else None
        )

    def _ranges(self, ranges) -> list:
        ranges = list(ranges)
        if len(ranges) != self.d:
            raise ValueError(f"expected {self.d} intervals, got {len(ranges)}")
        return [_normalize(r) for r in ranges]

    def min_weight(self, ranges):
        return POS_INF if self.root is None else self.root.minmax(self._ranges(ranges), False)

    def max_weight(self, ranges):
        return NEG_INF if self.root is None else self.root.minmax(self._ranges(ranges), True)

    def report(self, ranges) -> list[int]:
        out: list[int] = []
        if self.root is not None:
            self.root.report(self._ranges(ranges), out)
        return sorted(out)

    def delete(self, pid: int) -> None:
        if pid in self.deleted:
            return
        self.deleted.add(pid)
        self.root.delete(pid)

    def report_and_delete(self, ranges) -> list[int]:
        found = self.report(ranges)
        for pid in found:
            self.delete(pid)
        return found


def drange_minmax(tree: RangeTreeD, ranges, mode: str = "min"):
    if mode == "min":
        return tree.min_weight(ranges)
    if mode == "max":
        return tree.max_weight(ranges)
    raise ValueError(f"unknown mode {mode!r}")


def report_and_delete(tree: RangeTreeD, box) -> list[int]:
    return tree.report_and_delete(box)


def box_ranges(lo: Iterable[float], hi: Iterable[float]) -> list[tuple]:
    """Closed box as per-dimension intervals."""
    return [(a, b, False, False) for a, b in zip(lo, hi)]
