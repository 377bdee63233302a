"""Distributing assets to banks so that every bank's perceived value reaches its debt.

Banks are 0-based in this module.  In typed form, bank ``b`` perceives an
asset of type ``T`` as worth 2 when bit ``d-1-b`` of ``T`` is set (bank 0
reads the most significant bit) and 1 otherwise.  The general form gives
``vals[b][a]`` for every bank and asset directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import InstanceError, ResourceLimitError
from .flow import FlowNetwork, max_flow

NEG = np.iinfo(np.int64).min // 4
DEFAULT_TABLE_BUDGET = 20_000_000
ORACLE_MAX_ASSIGNMENTS = 2_000_000


@dataclass
class DebtInstance:
    P: list[int]
    C: list[int] | None = None
    vals: list[list[int]] | None = None

    def __post_init__(self):
        self.P = [int(p) for p in self.P]
        if any(p < 0 for p in self.P) or not self.P:
            raise InstanceError("debts must be a non-empty list of non-negative integers")
        if (self.C is None) == (self.vals is None):
            raise InstanceError("give exactly one of C (typed form) or vals (general form)")
        if self.C is not None:
            self.C = [int(c) for c in self.C]
            if len(self.C) != 1 << self.d:
                raise InstanceError(f"typed form needs 2^d = {1 << self.d} counts")
            if any(c < 0 for c in self.C):
                raise InstanceError("asset counts must be non-negative")
        else:
            self.vals = [[int(v) for v in row] for row in self.vals]
            if len(self.vals) != self.d:
                raise InstanceError("vals needs one row per bank")
            if len({len(row) for row in self.vals}) > 1:
                raise InstanceError("every bank must value the same assets")
            if any(v <= 0 for row in self.vals for v in row):
                raise InstanceError("perceived values must be positive integers")

    @property
    def d(self) -> int:
        return len(self.P)

    @property
    def typed(self) -> bool:
        return self.C is not None

    @property
    def asset_count(self) -> int:
        return sum(self.C) if self.typed else len(self.vals[0])

    def val(self, bank: int, T: int) -> int:
        return 2 if (T >> (self.d - 1 - bank)) & 1 else 1

    def asset_types(self) -> list[int]:
        """Type of every asset when typed assets are listed by ascending type."""
        return [T for T, c in enumerate(self.C) for _ in range(c)]

    def to_general(self) -> "DebtInstance":
        if not self.typed:
            return self
        types = self.asset_types()
        return DebtInstance(list(self.P), vals=[[self.val(b, T) for T in types] for b in range(self.d)])

    @classmethod
    def from_json(cls, obj: dict) -> "DebtInstance":
        try:
            if "C" in obj:
                inst = cls(list(obj["P"]), C=list(obj["C"]))
                if "d" in obj and obj["d"] != inst.d:
                    raise InstanceError("d disagrees with the length of P")
                return inst
            return cls(list(obj["P"]), vals=[list(r) for r in obj["vals"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceError(f"bad debt payload: {exc}") from exc

    def to_json(self) -> dict:
        if self.typed:
            return {"d": self.d, "P": self.P, "C": self.C}
        return {"P": self.P, "vals": self.vals}


@dataclass
class Distribution:
    """Typed form: ``assignment[T][b]`` counts; general form: bank index per asset."""

    assignment: list
    perceived: list[int]
    covered: bool
    reason: str | None = None

    def to_json(self) -> dict:
        return {"assignment": self.assignment, "perceived": self.perceived, "covered": self.covered}


def _finish_typed(inst: DebtInstance, alloc: list[list[int]], label: str) -> Distribution:
    perceived = [sum(alloc[T][b] * inst.val(b, T) for T in range(len(alloc))) for b in range(inst.d)]
    covered = all(s >= p for s, p in zip(perceived, inst.P))
    return Distribution(alloc, perceived, covered, None if covered else f"infeasible under the {label} strategy")


def _dump_leftovers(alloc, C) -> None:
    for T, c in enumerate(C):
        alloc[T][0] += c
        C[T] = 0


def _precheck(inst: DebtInstance) -> bool:
    """Cheap necessary condition: best-case total perceived value covers the total debt."""
    if inst.typed:
        best = sum(c * (2 if T else 1) for T, c in enumerate(inst.C))
    else:
        best = sum(max(col) for col in zip(*inst.vals)) if inst.vals[0] else 0
    return best >= sum(inst.P)


def solve_flow(inst: DebtInstance) -> Distribution:
    """Max-flow on 2-valued placements, then a greedy top-up, then a leftover dump."""
    if not inst.typed:
        raise InstanceError("solve_flow needs the typed form")
    d, ntypes = inst.d, 1 << inst.d
    C = list(inst.C)
    P = list(inst.P)
    alloc = [[0] * d for _ in range(ntypes)]
    net = FlowNetwork(node_count=ntypes + d + 2, source=ntypes + d, sink=ntypes + d + 1)
    middle = []
    for T in range(ntypes):
        net.add_edge(net.source, T, C[T])
        for b in range(d):
            if inst.val(b, T) == 2:
                middle.append((net.add_edge(T, ntypes + b, None), T, b))
    for b in range(d):
        net.add_edge(ntypes + b, net.sink, P[b] // 2)
    res = max_flow(net)
    for e, T, b in middle:
        f = res.edge_flows[e]
        alloc[T][b] += f
        C[T] -= f
        P[b] -= 2 * f
    for b in range(d):
        while P[b] > 0:
            avail = [T for T in range(ntypes) if C[T] > 0]
            if not avail:
                break
            T = max(avail, key=lambda t: (inst.val(b, t), -t))
            alloc[T][b] += 1
            C[T] -= 1
            P[b] -= inst.val(b, T)
    _dump_leftovers(alloc, C)
    return _finish_typed(inst, alloc, "flow")


def solve_d1(inst: DebtInstance) -> Distribution:
    if not inst.typed or inst.d != 1:
        raise InstanceError("solve_d1 needs a typed instance with d=1")
    alloc = [[c] for c in inst.C]
    return _finish_typed(inst, alloc, "single-bank")


def solve_d2(inst: DebtInstance) -> Distribution:
    """Dedicated types first, then type 11 in steps of 2, then any remaining asset."""
    if not inst.typed or inst.d != 2:
        raise InstanceError("solve_d2 needs a typed instance with d=2")
    C = list(inst.C)
    P = inst.P
    S = [0, 0]
    alloc = [[0, 0] for _ in range(4)]

    def give(T, b, k):
        alloc[T][b] += k
        C[T] -= k
        S[b] += k * inst.val(b, T)

    give(0b10, 0, min(C[0b10], P[0] // 2))
    give(0b01, 1, min(C[0b01], P[1] // 2))
    for b in range(2):
        while C[0b11] > 0 and S[b] <= P[b] - 2:
            give(0b11, b, 1)
    # final fill: any remaining type, most valuable to this bank first
    for b in range(2):
        while S[b] < P[b]:
            avail = [T for T in range(4) if C[T] > 0]
            if not avail:
                break
            give(max(avail, key=lambda t: (inst.val(b, t), -t)), b, 1)
    _dump_leftovers(alloc, C)
    return _finish_typed(inst, alloc, "d=2 staged")


T100, T010, T001 = 0b100, 0b010, 0b001
T110, T011, T101, T111 = 0b110, 0b011, 0b101, 0b111
GIVEMAX_SEQUENCE = ((T110, 1), (T011, 1), (T011, 2), (T101, 2), (T101, 0))


def _give_max(S, C, P, T, b) -> int:
    """Give type T to bank b while every copy stays fully useful; return the count given."""
    room = P[b] - S[b]
    k = C[T] if 2 * C[T] <= room else room // 2
    S[b] += 2 * k
    C[T] -= k
    return k


def solve_d3(inst: DebtInstance) -> Distribution:
    """Five stages: dedicated types, utility scan over 110 to bank 0, type 111, general fill, dump."""
    if not inst.typed or inst.d != 3:
        raise InstanceError("solve_d3 needs a typed instance with d=3")
    C = list(inst.C)
    P = inst.P
    S = [0, 0, 0]
    alloc = [[0] * 3 for _ in range(8)]

    for b, T in enumerate((T100, T010, T001)):
        k = C[T] if 2 * C[T] <= P[b] else P[b] // 2
        S[b] = 2 * k
        C[T] -= k
        alloc[T][b] += k

    best = None
    for x in range(0, min(C[T110], (P[0] - S[0]) // 2) + 1):
        S2 = list(S)
        C2 = list(C)
        S2[0] += 2 * x
        C2[T110] -= x
        given = [(T110, 0, x)]
        for T, b in GIVEMAX_SEQUENCE:
            given.append((T, b, _give_max(S2, C2, P, T, b)))
        utility = sum(S2[b] - S[b] for b in range(3))
        if best is None or utility > best[0]:
            best = (utility, S2, C2, given)
    _, S, C, given = best
    for T, b, k in given:
        alloc[T][b] += k

    for b in range(3):
        if S[b] < P[b]:
            alloc[T111][b] += _give_max(S, C, P, T111, b)

    for b in range(3):
        if S[b] >= P[b]:
            continue
        for T in range(8):
            if S[b] >= P[b]:
                break
            v = inst.val(b, T)
            if S[b] + C[T] * v <= P[b]:
                k = C[T]
            else:
                k = (P[b] - S[b]) // v
                if S[b] + k * v < P[b] and C[T] > k:
                    k += 1
            S[b] += k * v
            C[T] -= k
            alloc[T][b] += k

    _dump_leftovers(alloc, C)
    return _finish_typed(inst, alloc, "d=3 staged")


def _values(inst: DebtInstance) -> np.ndarray:
    g = inst.to_general()
    return np.asarray(g.vals, dtype=np.int64).reshape(inst.d, -1)


def _check_budget(P, Q, budget):
    cells = int(np.prod([p + 1 for p in P], dtype=np.float64)) * (Q + 1)
    if cells > budget:
        raise ResourceLimitError(f"knapsack tables need {cells} cells, budget is {budget}")


def _clamped_shift_or(table: np.ndarray, axis: int, v: int) -> np.ndarray:
    """out[w] = OR of table[w'] with min(w'+v, P) == w along ``axis``."""
    t = np.moveaxis(table, axis, 0)
    top = t.shape[0] - 1
    out = np.zeros_like(t)
    if v <= top:
        out[v:top] = t[: top - v]
    out[top] = t[max(top - v, 0):].any(axis=0)
    return np.moveaxis(out, 0, axis)


def _clamped_shift_max(table: np.ndarray, axis: int, v: int) -> np.ndarray:
    t = np.moveaxis(table, axis, 0)
    top = t.shape[0] - 1
    out = np.full_like(t, NEG)
    if v <= top:
        out[v:top] = t[: top - v]
    out[top] = t[max(top - v, 0):].max(axis=0)
    out[out < NEG // 2] = NEG
    return np.moveaxis(out, 0, axis)


def _general_distribution(inst: DebtInstance, banks: list[int]) -> Distribution:
    vals = _values(inst)
    perceived = [int(sum(vals[b, a] for a in range(len(banks)) if banks[a] == b)) for b in range(inst.d)]
    covered = all(s >= p for s, p in zip(perceived, inst.P))
    return Distribution(banks, perceived, covered, None if covered else "no covering distribution exists")


def knapsack_ok(inst: DebtInstance, budget: int = DEFAULT_TABLE_BUDGET) -> tuple[bool, Distribution | None]:
    """Boolean reachability over clamped per-bank totals; assignment by backtracking."""
    vals = _values(inst)
    d, Q = vals.shape
    P = inst.P
    if not _precheck(inst):
        return False, None
    _check_budget(P, Q, budget)
    tables = [np.zeros([p + 1 for p in P], dtype=bool)]
    tables[0][(0,) * d] = True
    for a in range(Q):
        old = tables[-1]
        new = old.copy()
        for j in range(d):
            new |= _clamped_shift_or(old, j, int(vals[j, a]))
        tables.append(new)
    target = tuple(P)
    if not tables[Q][target]:
        return False, None
    banks = [0] * Q
    w = list(target)
    for a in range(Q - 1, -1, -1):
        old = tables[a]
        if old[tuple(w)]:
            continue  # asset a was skipped; any bank may take it
        for j in range(d):
            v = int(vals[j, a])
            cands = range(w[j] - v, w[j] - v + 1) if w[j] < P[j] else range(max(P[j] - v, 0), P[j] + 1)
            hit = None
            for src in cands:
                if src < 0:
                    continue
                probe = list(w)
                probe[j] = src
                if old[tuple(probe)]:
                    hit = probe
                    break
            if hit is not None:
                banks[a] = j
                w = hit
                break
        else:
            raise AssertionError("backtracking lost the reachable path")
    return True, _general_distribution(inst, banks)


def knapsack_valmax(inst: DebtInstance, budget: int = DEFAULT_TABLE_BUDGET) -> tuple[bool, Distribution | None]:
    """Best value for the last bank over clamped totals of the others."""
    vals = _values(inst)
    d, Q = vals.shape
    P = inst.P
    if not _precheck(inst):
        return False, None
    _check_budget(P[:-1], Q, budget)
    shape = [p + 1 for p in P[:-1]]
    first = np.full(shape, NEG, dtype=np.int64)
    first[(0,) * (d - 1)] = 0
    tables = [first]
    for a in range(Q):
        old = tables[-1]
        last = int(vals[d - 1, a])
        new = np.where(old > NEG, old + max(last, 0), NEG)
        for j in range(d - 1):
            new = np.maximum(new, _clamped_shift_max(old, j, int(vals[j, a])))
        tables.append(new)
    target = tuple(P[:-1])
    if tables[Q][target] < P[-1] or tables[Q][target] <= NEG:
        return False, None
    banks = [0] * Q
    w = list(target)
    for a in range(Q - 1, -1, -1):
        old = tables[a]
        here = tables[a + 1][tuple(w)]
        last = int(vals[d - 1, a])
        if old[tuple(w)] > NEG and old[tuple(w)] + max(last, 0) == here:
            banks[a] = d - 1
            continue
        for j in range(d - 1):
            v = int(vals[j, a])
            cands = [w[j] - v] if w[j] < P[j] else range(max(P[j] - v, 0), P[j] + 1)
            hit = None
            for src in cands:
                if src < 0:
                    continue
                probe = list(w)
                probe[j] = src
                if old[tuple(probe)] == here:
                    hit = probe
                    break
            if hit is not None:
                banks[a] = j
                w = hit
                break
        else:
            raise AssertionError("backtracking lost the optimal path")
    return True, _general_distribution(inst, banks)


def valmax_table(inst: DebtInstance, budget: int = DEFAULT_TABLE_BUDGET) -> np.ndarray:
    """Final Val_max table (for inspection and tests)."""
    vals = _values(inst)
    d, Q = vals.shape
    _check_budget(inst.P[:-1], Q, budget)
    table = np.full([p + 1 for p in inst.P[:-1]], NEG, dtype=np.int64)
    table[(0,) * (d - 1)] = 0
    for a in range(Q):
        new = np.where(table > NEG, table + int(vals[d - 1, a]), NEG)
        for j in range(d - 1):
            new = np.maximum(new, _clamped_shift_max(table, j, int(vals[j, a])))
        table = new
    return table


def exhaustive_feasible(inst: DebtInstance) -> tuple[bool, list[int] | None]:
    """Scan all d^Q assignments; return the first covering one."""
    vals = _values(inst)
    d, Q = vals.shape
    if d ** Q > ORACLE_MAX_ASSIGNMENTS:
        raise ResourceLimitError(f"{d}^{Q} assignments exceed the oracle cap")
    for banks in itertools.product(range(d), repeat=Q):
        tot = [0] * d
        for a, b in enumerate(banks):
            tot[b] += int(vals[b, a])
        if all(t >= p for t, p in zip(tot, inst.P)):
            return True, list(banks)
    return False, None


def check_distribution(inst: DebtInstance, dist: Distribution) -> str | None:
    """Recompute perceived sums from the assignment; return the first problem or None."""
    if inst.typed:
        alloc = dist.assignment
        if len(alloc) != len(inst.C) or any(len(row) != inst.d for row in alloc):
            return "assignment shape mismatch"
        for T, row in enumerate(alloc):
            if any(k < 0 for k in row) or sum(row) != inst.C[T]:
                return f"assets of type {T} not assigned exactly once"
        perceived = [sum(alloc[T][b] * inst.val(b, T) for T in range(len(alloc))) for b in range(inst.d)]
    else:
        banks = dist.assignment
        if len(banks) != inst.asset_count or any(not 0 <= b < inst.d for b in banks):
            return "every asset must go to exactly one bank"
        perceived = [0] * inst.d
        for a, b in enumerate(banks):
            perceived[b] += inst.vals[b][a]
    if perceived != list(dist.perceived):
        return "reported perceived sums differ from the assignment"
    if dist.covered != all(s >= p for s, p in zip(perceived, inst.P)):
        return "coverage flag is wrong"
    return None


def solve_typed(inst: DebtInstance) -> Distribution:
    """Dispatch to the direct procedure for d <= 3 and the flow strategy beyond."""
    if inst.d == 1:
        return solve_d1(inst)
    if inst.d == 2:
        return solve_d2(inst)
    if inst.d == 3:
        return solve_d3(inst)
    return solve_flow(inst)
