"""Cheapest placement of an ``L1 x L2`` rectangle among weighted obstacles.

A placement is given by its upper-right corner ``(X, Y)``.  The placed
rectangle pays for every obstacle whose interior it overlaps (positive-area
intersection), so obstacle ``[xa, xb]`` is hit exactly when ``X`` lies in the
open interval ``(xa, xb + L)`` (and likewise for ``Y``).  Corners range over
the closed domain ``[xaR + L, xbR]``.

The sweep runs over *leaves*: the distinct breakpoints inside the domain and
the open cells between consecutive breakpoints, so both point-like and
cell-like optima are seen.  Each obstacle covers a contiguous leaf range in
both axes; the second axis lives in a :class:`LazySegTree`.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass

from .errors import InstanceError
from .ranges import LazySegTree

AGGREGATES = ("sum", "prod", "max")


@dataclass
class Rect:
    xa: tuple[float, float]
    xb: tuple[float, float]
    w: float


@dataclass
class RectInstance:
    R: tuple[tuple[float, float], tuple[float, float]]  # per-dimension (low, high)
    rects: list[Rect]
    L: tuple[float, float] | None = None

    def __post_init__(self):
        self.R = tuple(tuple(iv) for iv in self.R)
        if len(self.R) != 2:
            raise InstanceError("the bounding rectangle needs two intervals")
        for lo, hi in self.R:
            if lo > hi:
                raise InstanceError("bounding rectangle has a negative extent")
        fixed = []
        for r in self.rects:
            if not isinstance(r, Rect):
                r = Rect(tuple(r["xa"]), tuple(r["xb"]), r["w"])
            if len(r.xa) != 2 or len(r.xb) != 2:
                raise InstanceError("rectangles must be planar")
            if not r.w > 0:
                raise InstanceError("weights must be positive")
            for j in range(2):
                if r.xa[j] > r.xb[j]:
                    raise InstanceError("rectangle with xa > xb")
                if r.xa[j] < self.R[j][0] or r.xb[j] > self.R[j][1]:
                    raise InstanceError("rectangle lies outside the bounding rectangle")
            fixed.append(r)
        self.rects = fixed
        if self.L is not None:
            self.check_sizes(self.L)

    def check_sizes(self, L) -> None:
        for j in range(2):
            if not L[j] > 0:
                raise InstanceError("target sizes must be positive")
            if L[j] > self.R[j][1] - self.R[j][0]:
                raise InstanceError("target rectangle does not fit inside the bounding rectangle")

    @classmethod
    def from_json(cls, obj: dict) -> "RectInstance":
        try:
            R = tuple(tuple(iv) for iv in obj["R"])
            rects = [Rect(tuple(r["xa"]), tuple(r["xb"]), r["w"]) for r in obj.get("rects", [])]
            L = tuple(obj["L"]) if obj.get("L") is not None else None
            return cls(R, rects, L)
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceError(f"bad cover payload: {exc}") from exc

    def to_json(self) -> dict:
        out = {
            "R": [list(iv) for iv in self.R],
            "rects": [{"xa": list(r.xa), "xb": list(r.xb), "w": r.w} for r in self.rects],
        }
        if self.L is not None:
            out["L"] = list(self.L)
        return out


@dataclass
class Placement:
    cost: float
    corner: tuple[float, float]


class _Axis:
    """Breakpoints of one axis inside the corner domain, and their leaf layout."""

    def __init__(self, lo, hi, coords):
        self.lo, self.hi = lo, hi
        self.pts = sorted({lo, hi} | {c for c in coords if lo <= c <= hi})
        self.leaves = 2 * len(self.pts) - 1

    def span(self, a, b) -> tuple[int, int]:
        """Leaves inside the open interval (a, b)."""
        if b <= self.lo or a >= self.hi or a >= b:
            return 1, 0
        start = 0 if a < self.lo else 2 * bisect_left(self.pts, a) + 1
        end = self.leaves - 1 if b > self.hi else 2 * bisect_left(self.pts, b) - 1
        return start, end

    def coord(self, leaf: int):
        if leaf % 2 == 0:
            return self.pts[leaf // 2]
        return (self.pts[leaf // 2] + self.pts[leaf // 2 + 1]) / 2


def _axes(inst: RectInstance, L, rects):
    axes = []
    for j in range(2):
        lo, hi = inst.R[j][0] + L[j], inst.R[j][1]
        coords = [r.xa[j] for r in rects] + [r.xb[j] + L[j] for r in rects]
        axes.append(_Axis(lo, hi, coords))
    return axes


def _sweep(inst: RectInstance, L, rects, values, mode: str) -> Placement:
    ax, ay = _axes(inst, L, rects)
    adds: list[list[int]] = [[] for _ in range(ax.leaves)]
    drops: list[list[int]] = [[] for _ in range(ax.leaves + 1)]
    yspan = []
    for k, r in enumerate(rects):
        xs, xe = ax.span(r.xa[0], r.xb[0] + L[0])
        ys, ye = ay.span(r.xa[1], r.xb[1] + L[1])
        yspan.append((ys, ye))
        if xs > xe or ys > ye or r.xa[0] == r.xb[0] or r.xa[1] == r.xb[1]:
            continue  # never overlapped with positive area
        adds[xs].append(k)
        drops[xe + 1].append(k)
    tree = LazySegTree(ay.leaves, mode)
    best = None
    for t in range(ax.leaves):
        # obstacles leaving before this leaf go first, then those entering
        for k in drops[t]:
            tree.update(*yspan[k], values[k], remove=True)
        for k in adds[t]:
            tree.update(*yspan[k], values[k])
        val = tree.global_min()
        if best is None or val < best.cost:
            best = Placement(val, (ax.coord(t), ay.coord(tree.argmin())))
    return best


def min_placement_cost(inst: RectInstance, agg: str = "sum", L=None) -> Placement:
    """Minimum aggregate over obstacles hit, and a corner achieving it."""
    if agg not in AGGREGATES:
        raise InstanceError(f"unknown aggregate {agg!r}")
    L = inst.L if L is None else L
    if L is None:
        raise InstanceError("target sizes L are required")
    inst.check_sizes(L)
    rects = inst.rects
    if agg == "prod":
        res = _sweep(inst, L, rects, [math.log(r.w) for r in rects], "sum")
        return Placement(math.exp(res.cost), res.corner)
    return _sweep(inst, L, rects, [r.w for r in rects], "sum" if agg == "sum" else "max")


def _free_corner_exists(inst: RectInstance, L, threshold) -> bool:
    heavy = [r for r in inst.rects if r.w > threshold]
    return _sweep(inst, L, heavy, [1] * len(heavy), "sum").cost == 0


def min_unavoidable_weight(inst: RectInstance, L=None) -> float:
    """Smallest W such that some corner avoids every obstacle heavier than W (0 if a free corner exists)."""
    L = inst.L if L is None else L
    inst.check_sizes(L)
    cands = [0] + sorted({r.w for r in inst.rects})
    lo, hi = 0, len(cands) - 1  # the largest candidate always works
    while lo < hi:
        mid = (lo + hi) // 2
        if _free_corner_exists(inst, L, cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


@dataclass
class BudgetResult:
    L1: float
    feasible: bool
    placement: Placement | None


def max_rect_under_budget(inst: RectInstance, f: float, B: float, tol: float, agg: str = "sum") -> BudgetResult:
    """Largest ``L1`` (with ``L2 = f * L1``) whose cheapest placement costs at most ``B``."""
    if not f > 0 or not tol > 0:
        raise InstanceError("aspect ratio and tolerance must be positive")
    (x0, x1), (y0, y1) = inst.R
    top = min(x1 - x0, (y1 - y0) / f)
    if not top > 0:
        return BudgetResult(0.0, False, None)

    def probe(l1):
        return min_placement_cost(inst, agg, (l1, f * l1))

    at_top = probe(top)
    if at_top.cost <= B:
        return BudgetResult(top, True, at_top)
    small = min(tol, top / 2)
    at_small = probe(small)
    if at_small.cost > B:
        return BudgetResult(0.0, False, None)
    lo, hi, best = small, top, at_small
    while hi - lo > tol:
        mid = (lo + hi) / 2
        res = probe(mid)
        if res.cost <= B:
            lo, best = mid, res
        else:
            hi = mid
    return BudgetResult(lo, True, best)


def placement_cost_at(inst: RectInstance, corner, L, agg: str = "sum", slack: float = 1e-9) -> float:
    """Direct geometric evaluation of one placement.

    Overlaps thinner than ``slack`` times the bounding extent are rounding noise
    from ``X - L`` and do not count.
    """
    X, Y = corner
    eps = slack * max(1.0, *(abs(c) for iv in inst.R for c in iv))
    hit = []
    for r in inst.rects:
        ox = min(X, r.xb[0]) - max(X - L[0], r.xa[0])
        oy = min(Y, r.xb[1]) - max(Y - L[1], r.xa[1])
        if ox > eps and oy > eps:
            hit.append(r.w)
    if agg == "sum":
        return sum(hit)
    if agg == "max":
        return max(hit, default=0)
    return math.prod(hit)


def brute_force_min_cost(inst: RectInstance, agg: str = "sum", L=None) -> float:
    """Evaluate every grid corner and every midpoint between neighbouring grid lines."""
    L = inst.L if L is None else L
    grids = []
    for j in range(2):
        lo, hi = inst.R[j][0] + L[j], inst.R[j][1]
        raw = {lo, hi}
        for r in inst.rects:
            raw.update((r.xa[j], r.xb[j] + L[j]))
        line = sorted(c for c in raw if lo <= c <= hi)
        cand = set(line)
        cand.update((a + b) / 2 for a, b in zip(line, line[1:]))
        grids.append(sorted(cand))
    return min(placement_cost_at(inst, (X, Y), L, agg) for X in grids[0] for Y in grids[1])
