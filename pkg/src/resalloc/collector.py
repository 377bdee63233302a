"""Collecting timed resources on a graph with known travel times.

A recipient ``(t, v, c)`` can be collected only by being at vertex ``v`` at
time ``t``.  The player starts at vertex 0 at time 0.  All variants compute

    cmax[k] = c_k + max{cmax[p] : p < k, tr[v_p][v_k] <= t_k - t_p}

over recipients sorted by ``(t, v)``, with a virtual origin recipient
``(0, 0, 0)`` in front.  They differ in how the inner maximum is found.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_right
from dataclasses import dataclass, field

from .errors import InstanceError, ResourceLimitError
from .ranges import RangeTree2D

NEG_INF = -math.inf
EXHAUSTIVE_MAX_M = 16


@dataclass
class CollectorInstance:
    tr: list[list[int]] | None
    recipients: list[tuple[int, int, int]]
    Tmax: int | None = None
    x: list[int] | None = None
    merged: list[tuple[int, int, int]] = field(init=False, repr=False)

    def __post_init__(self):
        if self.tr is None:
            if self.x is None:
                raise InstanceError("give a travel matrix or line coordinates")
            self.tr = [[abs(a - b) for b in self.x] for a in self.x]
        n = len(self.tr)
        if n == 0 or any(len(row) != n for row in self.tr):
            raise InstanceError("travel matrix must be square and non-empty")
        for i, row in enumerate(self.tr):
            for j, v in enumerate(row):
                if int(v) != v or v < 0:
                    raise InstanceError("travel times must be non-negative integers")
                if i == j and v != 0:
                    raise InstanceError("travel time from a vertex to itself must be 0")
        if self.x is not None:
            if len(self.x) != n:
                raise InstanceError("one coordinate per vertex is required")
            if any(self.tr[i][j] != abs(self.x[i] - self.x[j]) for i in range(n) for j in range(n)):
                raise InstanceError("travel matrix disagrees with the line coordinates")
        if self.Tmax is not None and self.Tmax < max(max(row) for row in self.tr):
            raise InstanceError("Tmax is smaller than some travel time")
        pooled: dict[tuple[int, int], int] = {}
        for rec in self.recipients:
            t, v, c = (int(z) for z in rec)
            if t < 0 or c < 0 or not 0 <= v < n:
                raise InstanceError(f"bad recipient {rec!r}")
            pooled[(t, v)] = pooled.get((t, v), 0) + c
        self.merged = sorted((t, v, c) for (t, v), c in pooled.items())

    @property
    def n(self) -> int:
        return len(self.tr)

    @classmethod
    def from_json(cls, obj: dict) -> "CollectorInstance":
        try:
            recs = [(r["t"], r["v"], r["c"]) for r in obj.get("recipients", [])]
            return cls(obj.get("tr"), recs, obj.get("Tmax"), obj.get("x"))
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceError(f"bad collector payload: {exc}") from exc

    def to_json(self) -> dict:
        out = {"tr": self.tr, "recipients": [{"t": t, "v": v, "c": c} for t, v, c in self.recipients]}
        if self.Tmax is not None:
            out["Tmax"] = self.Tmax
        if self.x is not None:
            out["x"] = self.x
        return out


def _answer(cmax) -> int:
    best = max([0] + [c for c in cmax if c > NEG_INF])
    return int(best)


def cmax_quadratic(inst: CollectorInstance) -> list[float]:
    recs = [(0, 0, 0)] + inst.merged
    cmax = [0.0] * len(recs)
    for k in range(1, len(recs)):
        tk, vk, ck = recs[k]
        best = NEG_INF
        for p in range(k):
            tp, vp, _ = recs[p]
            if inst.tr[vp][vk] <= tk - tp and cmax[p] > best:
                best = cmax[p]
        cmax[k] = ck + best
    return cmax[1:]


def solve_quadratic(inst: CollectorInstance) -> int:
    return _answer(cmax_quadratic(inst))


def cmax_per_vertex(inst: CollectorInstance) -> list[float]:
    """Binary search per vertex over its chronological list of collected values."""
    times: list[list[int]] = [[] for _ in range(inst.n)]
    values: list[list[float]] = [[] for _ in range(inst.n)]
    times[0].append(0)
    values[0].append(0)
    out = []
    for tk, vk, ck in inst.merged:
        best = NEG_INF
        for i in range(inst.n):
            j = bisect_right(times[i], tk - inst.tr[i][vk])
            if j and values[i][j - 1] > best:
                best = values[i][j - 1]
        val = ck + best
        if values[vk] and val < values[vk][-1]:
            raise AssertionError("per-vertex values must be non-decreasing in time")
        times[vk].append(tk)
        values[vk].append(val)
        out.append(val)
    return out


def solve_per_vertex(inst: CollectorInstance) -> int:
    return _answer(cmax_per_vertex(inst))


def solve_small_tmax(inst: CollectorInstance, Tmax: int | None = None) -> int:
    """Per-vertex sliding windows of the best value held ``t`` steps before the last arrival."""
    Tmax = inst.Tmax if Tmax is None else Tmax
    if Tmax is None:
        raise InstanceError("solve_small_tmax needs Tmax")
    if Tmax < max(max(row) for row in inst.tr):
        raise InstanceError("Tmax is smaller than some travel time")
    n = inst.n
    last = [0] * n
    window = [[NEG_INF] * (Tmax + 1) for _ in range(n)]
    window[0][0] = 0
    best_all = 0
    for tk, vk, ck in inst.merged:
        cm = NEG_INF
        for i in range(n):
            latest = tk - inst.tr[i][vk]
            if last[i] < latest:
                nc = window[i][0]
            else:
                nc = window[i][last[i] - latest]
            cm = max(cm, ck + nc)
        row = window[vk]
        gap = tk - last[vk]
        offset = Tmax + 1 if gap > Tmax else gap
        nc = row[0]
        for t in range(Tmax, offset - 1, -1):
            row[t] = row[t - offset]
        for t in range(0, min(offset, Tmax + 1)):
            row[t] = nc
        last[vk] = tk
        row[0] = cm
        if cm > best_all:
            best_all = cm
    return int(best_all)


def solve_line(inst: CollectorInstance) -> int:
    """Vertices on a line: predecessors are exactly the dominated points after a 45-degree shear."""
    if inst.x is None:
        raise InstanceError("solve_line needs line coordinates")
    x = inst.x
    pts = [(0 + x[0], 0 - x[0])] + [(t + x[v], t - x[v]) for t, v, _ in inst.merged]
    tree = RangeTree2D(pts)
    tree.set_weight(0, 0)
    best_all = 0
    for k, (tk, vk, ck) in enumerate(inst.merged, start=1):
        prev = tree.quarterplane_max(*pts[k])
        val = ck + prev
        if val > NEG_INF:
            tree.set_weight(k, val)
            best_all = max(best_all, val)
    return int(best_all)


def exhaustive_best(inst: CollectorInstance) -> int:
    """Try every chronological subsequence of recipients."""
    recs = inst.merged
    if len(recs) > EXHAUSTIVE_MAX_M:
        raise ResourceLimitError(f"exhaustive search limited to {EXHAUSTIVE_MAX_M} recipients")
    best = 0
    for r in range(1, len(recs) + 1):
        for combo in itertools.combinations(recs, r):
            t0, v0 = 0, 0
            total = 0
            for t, v, c in combo:
                if inst.tr[v0][v] > t - t0:
                    break
                total += c
                t0, v0 = t, v
            else:
                best = max(best, total)
    return best


SOLVERS = {
    "quadratic": solve_quadratic,
    "per_vertex": solve_per_vertex,
    "small_tmax": solve_small_tmax,
    "line": solve_line,
}
