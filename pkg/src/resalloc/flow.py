"""Integer max-flow and min-cost max-flow.

Both engines work on a :class:`FlowNetwork` that keeps edges in insertion
order, so callers can read back the flow on "their" edges by index.
Infinite capacities are given as ``None`` and resolved to the sentinel
``1 + sum of finite capacities``, which keeps everything integral.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field

from .errors import InstanceError


@dataclass
class FlowNetwork:
    node_count: int
    source: int
    sink: int
    edges: list[tuple[int, int, int | None, int]] = field(default_factory=list)

    def add_edge(self, u: int, v: int, capacity: int | None, cost: int = 0) -> int:
        """Append an edge and return its index. ``capacity=None`` means infinite."""
        self.edges.append((u, v, capacity, cost))
        return len(self.edges) - 1

    @property
    def infinity(self) -> int:
        return 1 + sum(c for _, _, c, _ in self.edges if c is not None)

    def validate(self) -> None:
        if self.node_count <= 0:
            raise InstanceError("node_count must be positive")
        for x in (self.source, self.sink):
            if not 0 <= x < self.node_count:
                raise InstanceError(f"terminal {x} out of range")
        if self.source == self.sink:
            raise InstanceError("source and sink coincide")
        for idx, (u, v, cap, cost) in enumerate(self.edges):
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise InstanceError(f"edge {idx} has an endpoint out of range")
            if cap is not None and (int(cap) != cap or cap < 0):
                raise InstanceError(f"edge {idx} has an invalid capacity {cap!r}")
            if int(cost) != cost:
                raise InstanceError(f"edge {idx} has a non-integer cost")


@dataclass
class FlowResult:
    value: int
    cost: int
    edge_flows: list[int]


class _Residual:
    # paired arcs: arc 2k is edge k forward, arc 2k+1 its reverse
    def __init__(self, net: FlowNetwork, use_cost: bool):
        net.validate()
        inf = net.infinity
        n = net.node_count
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []
        self.cost: list[int] = []
        for u, v, c, w in net.edges:
            c = inf if c is None else int(c)
            w = int(w) if use_cost else 0
            self.head[u].append(len(self.to))
            self.to.append(v)
            self.cap.append(c)
            self.cost.append(w)
            self.head[v].append(len(self.to))
            self.to.append(u)
            self.cap.append(0)
            self.cost.append(-w)
        self.original = [self.cap[2 * k] for k in range(len(net.edges))]

    def edge_flows(self) -> list[int]:
        return [self.original[k] - self.cap[2 * k] for k in range(len(self.original))]


def max_flow(net: FlowNetwork) -> FlowResult:
    """Maximum s-t flow by Dinic's algorithm; edge costs are ignored."""
    g = _Residual(net, use_cost=False)
    s, t = net.source, net.sink
    inf = net.infinity
    total = 0
    while True:
        level = [-1] * g.n
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for a in g.head[u]:
                if g.cap[a] > 0 and level[g.to[a]] < 0:
                    level[g.to[a]] = level[u] + 1
                    queue.append(g.to[a])
        if level[t] < 0:
            break
        it = [0] * g.n

        def push(u: int, limit: int) -> int:
            if u == t:
                return limit
            arcs = g.head[u]
            while it[u] < len(arcs):
                a = arcs[it[u]]
                v = g.to[a]
                if g.cap[a] > 0 and level[v] == level[u] + 1:
                    got = push(v, min(limit, g.cap[a]))
                    if got:
                        g.cap[a] -= got
                        g.cap[a ^ 1] += got
                        return got
                it[u] += 1
            return 0

        while True:
            f = push(s, inf)
            if not f:
                break
            total += f
    return FlowResult(value=total, cost=0, edge_flows=g.edge_flows())


def _initial_potentials(g: _Residual, s: int) -> list[int]:
    """Bellman-Ford over arcs with residual capacity; rejects negative cycles."""
    dist: list[int | None] = [None] * g.n
    dist[s] = 0
    for _ in range(g.n):
        changed = False
        for u in range(g.n):
            du = dist[u]
            if du is None:
                continue
            for a in g.head[u]:
                if g.cap[a] > 0:
                    v = g.to[a]
                    nd = du + g.cost[a]
                    if dist[v] is None or nd < dist[v]:
                        dist[v] = nd
                        changed = True
        if not changed:
            break
    else:
        raise InstanceError("negative-cost cycle reachable from the source")
    # unreachable nodes never enter a shortest path; any finite value works
    return [0 if d is None else d for d in dist]


def min_cost_max_flow(net: FlowNetwork) -> FlowResult:
    """Successive shortest paths with Johnson potentials.

    One Bellman-Ford pass absorbs negative input costs; every later
    augmentation runs Dijkstra on non-negative reduced costs.
    """
    g = _Residual(net, use_cost=True)
    s, t = net.source, net.sink
    pot = _initial_potentials(g, s)
    value = 0
    cost = 0
    while True:
        dist: list[int | None] = [None] * g.n
        prev_arc = [-1] * g.n
        dist[s] = 0
        heap = [(0, s)]
        while heap:
            d, u = heapq.heappop(heap)
            if d != dist[u]:
                continue
            for a in g.head[u]:
                if g.cap[a] <= 0:
                    continue
                v = g.to[a]
                nd = d + g.cost[a] + pot[u] - pot[v]
                if dist[v] is None or nd < dist[v]:
                    dist[v] = nd
                    prev_arc[v] = a
                    heapq.heappush(heap, (nd, v))
        if dist[t] is None:
            break
        for v in range(g.n):
            if dist[v] is not None:
                pot[v] += dist[v]
        push = None
        v = t
        while v != s:
            a = prev_arc[v]
            push = g.cap[a] if push is None else min(push, g.cap[a])
            v = g.to[a ^ 1]
        v = t
        while v != s:
            a = prev_arc[v]
            g.cap[a] -= push
            g.cap[a ^ 1] += push
            cost += push * g.cost[a]
            v = g.to[a ^ 1]
        value += push
    return FlowResult(value=value, cost=cost, edge_flows=g.edge_flows())


def check_flow(net: FlowNetwork, result: FlowResult, check_cost: bool = False) -> str | None:
    """Return the first violated flow constraint, or None."""
    inf = net.infinity
    if len(result.edge_flows) != len(net.edges):
        return "edge_flows length mismatch"
    balance = [0] * net.node_count
    cost = 0
    for (u, v, c, w), f in zip(net.edges, result.edge_flows):
        cap = inf if c is None else c
        if not 0 <= f <= cap:
            return f"capacity violated on edge {u}->{v}"
        balance[u] -= f
        balance[v] += f
        cost += f * w
    for x in range(net.node_count):
        if x not in (net.source, net.sink) and balance[x] != 0:
            return f"conservation violated at node {x}"
    if -balance[net.source] != result.value:
        return "value differs from net source outflow"
    if check_cost and cost != result.cost:
        return "cost differs from the edge-flow cost"
    return None
