"""Storage scheduling for tree-shaped workflows.

Every activity produces one unit of output that waits for its parent either in
the free store S1 (at most ``D`` units resident) or in the paid store S2
(cost ``C(v)``).  ``cmin[v][q]`` is the cheapest way to run the subtree of
``v`` when ``q`` S1 units are free, ignoring where ``v``'s own output goes.

Occupancy model: an output sitting in S1 holds one unit from the moment its
producer finishes until its parent starts.  A vertex that keeps ``x`` son
outputs in S1 therefore needs ``x <= q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import InstanceError, ResourceLimitError
from .flow import FlowNetwork, min_cost_max_flow

INF = math.inf
S1, S2 = "S1", "S2"


@dataclass
class WorkflowInstance:
    parents: list[int | None]
    costs: list[int]
    D: int
    K: int | None = None
    children: list[list[int]] = field(init=False, repr=False)
    root: int = field(init=False)

    def __post_init__(self):
        self.parents = [None if p is None or p < 0 else int(p) for p in self.parents]
        self.costs = [int(c) for c in self.costs]
        self.validate()
        self.children = [[] for _ in range(self.n)]
        for v, p in enumerate(self.parents):
            if p is not None:
                self.children[p].append(v)
        if self.K is None:
            self.K = max((len(c) for c in self.children), default=0)
        if any(len(c) > self.K for c in self.children):
            raise InstanceError(f"a vertex has more than K={self.K} sons")

    @property
    def n(self) -> int:
        return len(self.parents)

    def validate(self) -> None:
        n = len(self.parents)
        if n == 0:
            raise InstanceError("empty tree")
        if len(self.costs) != n:
            raise InstanceError("costs and parents differ in length")
        if int(self.D) != self.D or self.D < 0:
            raise InstanceError("D must be a non-negative integer")
        roots = [v for v, p in enumerate(self.parents) if p is None]
        if len(roots) != 1:
            raise InstanceError(f"expected exactly one root, found {len(roots)}")
        self.root = roots[0]
        for v, p in enumerate(self.parents):
            if p is not None and not 0 <= p < n:
                raise InstanceError(f"parent of {v} out of range")
        # every vertex must reach the root without revisiting anything
        for v in range(n):
            seen = 0
            u = v
            while self.parents[u] is not None:
                u = self.parents[u]
                seen += 1
                if seen > n:
                    raise InstanceError("parent pointers contain a cycle")

    @classmethod
    def from_json(cls, obj: dict) -> "WorkflowInstance":
        try:
            inst = cls(list(obj["parents"]), list(obj["costs"]), int(obj["D"]), obj.get("K"))
        except (KeyError, TypeError) as exc:
            raise InstanceError(f"bad tree-storage payload: {exc}") from exc
        if "n" in obj and obj["n"] != inst.n:
            raise InstanceError("n disagrees with the parents array")
        if "root" in obj and obj["root"] != inst.root:
            raise InstanceError("root disagrees with the parents array")
        return inst

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "root": self.root,
            "parents": [-1 if p is None else p for p in self.parents],
            "costs": list(self.costs),
            "D": self.D,
        }


@dataclass
class StoragePlan:
    execution_order: list[int]
    placement: list[str | None]
    total_cost: int

    def to_json(self) -> dict:
        return {"order": self.execution_order, "placements": self.placement, "cost": self.total_cost}


def _postorder(inst: WorkflowInstance) -> list[int]:
    out, stack = [], [(inst.root, False)]
    while stack:
        v, expanded = stack.pop()
        if expanded:
            out.append(v)
            continue
        stack.append((v, True))
        for c in reversed(inst.children[v]):
            stack.append((c, False))
    return out


def _sorted_sons(inst: WorkflowInstance, dn: list[int], v: int) -> list[int]:
    return sorted(inst.children[v], key=lambda c: (-dn[c], c))


def compute_dn(inst: WorkflowInstance) -> list[int]:
    """S1 units needed to run each subtree without touching S2."""
    dn = [0] * inst.n
    for v in _postorder(inst):
        sons = _sorted_sons(inst, dn, v)
        best = len(sons)
        for j, s in enumerate(sons):
            best = max(best, dn[s] + j)
        dn[v] = best
    return dn


def _zero_cost_order(inst, dn, v, order, placement) -> None:
    # all sons into S1, largest DN first
    for s in _sorted_sons(inst, dn, v):
        _zero_cost_order(inst, dn, s, order, placement)
        placement[s] = S1
    order.append(v)


def solve_uniform(inst: WorkflowInstance) -> tuple[int, StoragePlan]:
    """Equal positive costs: one DP layer at level D per vertex."""
    non_root = [inst.costs[v] for v in range(inst.n) if v != inst.root]
    if non_root and (min(non_root) != max(non_root) or non_root[0] <= 0):
        raise InstanceError("solve_uniform needs equal positive costs; use solve_general")
    dn = compute_dn(inst)
    D = inst.D
    cost_d = [0] * inst.n
    choice: dict[int, tuple[list[int], list[int]]] = {}
    for v in _postorder(inst):
        if D >= dn[v]:
            continue
        sons = _sorted_sons(inst, dn, v)
        ns = len(sons)
        table = [[INF] * (ns + 1) for _ in range(ns + 1)]
        table[0][0] = 0
        for j in range(1, ns + 1):
            y = sons[j - 1]
            to_s2 = inst.costs[y] + cost_d[y]
            for p in range(0, j + 1):
                best = INF
                if p < j and table[j - 1][p] < INF:
                    best = table[j - 1][p] + to_s2
                if p >= 1 and p <= D and table[j - 1][p - 1] < INF:
                    avail = D - p + 1
                    if p == 1 or avail >= dn[y]:
                        here = 0 if avail >= dn[y] else cost_d[y]
                        best = min(best, table[j - 1][p - 1] + here)
                table[j][p] = best
        p_best = min(range(ns + 1), key=lambda p: (table[ns][p], p))
        cost_d[v] = table[ns][p_best]
        # backtrack which sons went to S1
        in_s1, s2 = [], []
        p = p_best
        for j in range(ns, 0, -1):
            y = sons[j - 1]
            via_s2 = table[j - 1][p] + inst.costs[y] + cost_d[y] if p < j else INF
            if via_s2 == table[j][p]:
                s2.append(y)
            else:
                in_s1.append(y)
                p -= 1
        in_s1.reverse()
        s2.reverse()
        choice[v] = (s2, in_s1)

    order: list[int] = []
    placement: list[str | None] = [None] * inst.n

    def build(v: int, q: int) -> None:
        if q >= dn[v]:
            _zero_cost_order(inst, dn, v, order, placement)
            return
        s2, in_s1 = choice[v]
        for y in s2:
            build(y, q)
            placement[y] = S2
        for p, y in enumerate(in_s1, start=1):
            build(y, q - p + 1)
            placement[y] = S1
        order.append(v)

    build(inst.root, D)
    total = cost_d[inst.root]
    plan = StoragePlan(order, placement, _plan_cost(inst, placement))
    if plan.total_cost != total:
        raise InstanceError("internal: reconstructed plan cost differs from the DP value")
    return total, plan


def _assignment(inst, cmin, v, q, x):
    """Min-cost assignment of v's sons to S1 slots 1..x or to S2 at level q."""
    sons = inst.children[v]
    ns = len(sons)
    net = FlowNetwork(node_count=ns + x + 3, source=0, sink=ns + x + 2)
    s2_node = ns + x + 1
    slot_edges = []
    for a, y in enumerate(sons, start=1):
        net.add_edge(0, a, 1, 0)
        for p in range(1, x + 1):
            e = net.add_edge(a, ns + p, 1, cmin[y][q - p + 1])
            slot_edges.append((e, y, p))
        e = net.add_edge(a, s2_node, 1, cmin[y][q] + inst.costs[y])
        slot_edges.append((e, y, 0))
    for p in range(1, x + 1):
        net.add_edge(ns + p, net.sink, 1, 0)
    net.add_edge(s2_node, net.sink, ns - x, 0)
    res = min_cost_max_flow(net)
    if res.value != ns:
        return INF, None
    s2, slots = [], {}
    for e, y, p in slot_edges:
        if res.edge_flows[e]:
            if p == 0:
                s2.append(y)
            else:
                slots[p] = y
    return res.cost, (s2, [slots[p] for p in range(1, x + 1)])


def cmin_table(inst: WorkflowInstance) -> tuple[list[list[int]], dict]:
    """Full ``cmin[v][q]`` for q in 0..D plus the chosen (S2 sons, S1 order) per cell."""
    D = inst.D
    cmin = [[0] * (D + 1) for _ in range(inst.n)]
    choice: dict[tuple[int, int], tuple[list[int], list[int]]] = {}
    for v in _postorder(inst):
        sons = inst.children[v]
        if not sons:
            continue
        for q in range(D + 1):
            best, pick = INF, None
            for x in range(0, min(len(sons), q) + 1):
                c, how = _assignment(inst, cmin, v, q, x)
                if c < best:
                    best, pick = c, how
            cmin[v][q] = best
            choice[(v, q)] = pick
    return cmin, choice


def solve_general(inst: WorkflowInstance) -> tuple[int, StoragePlan]:
    """Arbitrary-sign costs via one min-cost assignment per (vertex, q, x)."""
    cmin, choice = cmin_table(inst)
    order: list[int] = []
    placement: list[str | None] = [None] * inst.n

    def build(v: int, q: int) -> None:
        if not inst.children[v]:
            order.append(v)
            return
        s2, in_s1 = choice[(v, q)]
        for y in s2:
            build(y, q)
            placement[y] = S2
        for p, y in enumerate(in_s1, start=1):
            build(y, q - p + 1)
            placement[y] = S1
        order.append(v)

    build(inst.root, inst.D)
    total = cmin[inst.root][inst.D]
    plan = StoragePlan(order, placement, _plan_cost(inst, placement))
    if plan.total_cost != total:
        raise InstanceError("internal: reconstructed plan cost differs from the DP value")
    return total, plan


def _plan_cost(inst: WorkflowInstance, placement) -> int:
    return sum(inst.costs[v] for v in range(inst.n) if placement[v] == S2)


def validate_plan(inst: WorkflowInstance, plan: StoragePlan) -> str | None:
    """Replay a plan; return the first violated constraint or None."""
    order = list(plan.execution_order)
    if sorted(order) != list(range(inst.n)):
        return "execution order is not a permutation of the vertices"
    if len(plan.placement) != inst.n:
        return "placement length mismatch"
    for v in range(inst.n):
        if v != inst.root and plan.placement[v] not in (S1, S2):
            return f"vertex {v} has no storage placement"
    done = [False] * inst.n
    resident = 0
    for v in order:
        if not all(done[c] for c in inst.children[v]):
            return "dependency violated"
        resident -= sum(1 for c in inst.children[v] if plan.placement[c] == S1)
        if v != inst.root and plan.placement[v] == S1:
            resident += 1
        if resident > inst.D:
            return "capacity exceeded"
        done[v] = True
    if _plan_cost(inst, plan.placement) != plan.total_cost:
        return "declared total cost mismatch"
    return None


BRUTE_FORCE_MAX_N = 12


def brute_force_cost(inst: WorkflowInstance) -> int:
    """Cheapest cost over every topological order and every placement."""
    n = inst.n
    if n > BRUTE_FORCE_MAX_N:
        raise ResourceLimitError(f"brute force limited to {BRUTE_FORCE_MAX_N} vertices")
    son_mask = [0] * n
    for v in range(n):
        for c in inst.children[v]:
            son_mask[v] |= 1 << c
    full = (1 << n) - 1

    @lru_cache(maxsize=None)
    def best(done: int, s1: int) -> float:
        if done == full:
            return 0
        out = INF
        for v in range(n):
            bit = 1 << v
            if done & bit or son_mask[v] & ~done:
                continue
            freed = s1 & ~son_mask[v]
            if v == inst.root:
                out = min(out, best(done | bit, freed))
                continue
            if bin(freed).count("1") + 1 <= inst.D:
                out = min(out, best(done | bit, freed | bit))
            out = min(out, inst.costs[v] + best(done | bit, freed))
        return out

    return best(0, 0)
