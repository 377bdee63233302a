"""One-dimensional Push-*: walk, push and jump to the last square at minimum energy.

Squares are numbered 1..N.  A jump of 1..K squares is allowed only right after
K-1 consecutive walks in the same direction; pushes move a whole contiguous
block run by one square.

The solver is a forward DP over ``E[i][j]``: robot on square ``i`` (just
landed, no walk streak), squares ``i-j..i-1`` empty with a block or the board
edge at ``i-j-1``, and every square right of ``i`` in its initial state.  From
such a state the robot may push the run at its left ``y`` times, push the run
at its right ``x`` times (in either order), then walk ``K-1`` squares and jump
past every block it disturbed.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .errors import InstanceError, ResourceLimitError

INF = math.inf
ORACLE_MAX_N = 16


@dataclass
class PushInstance:
    board: str
    W: int
    P: int
    J: int
    K: int

    def __post_init__(self):
        b = self.board
        if len(b) < 2:
            raise InstanceError("board needs at least two squares")
        if b[0] != "R" or any(ch not in ".B" for ch in b[1:]):
            raise InstanceError("board must be 'R' followed by '.' and 'B' squares")
        if b[-1] != ".":
            raise InstanceError("the last square must start empty")
        for name in ("W", "P", "J"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise InstanceError(f"{name} must be a non-negative integer")
        if int(self.K) != self.K or self.K < 2:
            raise InstanceError("K must be an integer >= 2")

    @property
    def N(self) -> int:
        return len(self.board)

    def block(self, sq: int) -> bool:
        """Initial content of 1-based square ``sq``."""
        return self.board[sq - 1] == "B"

    @classmethod
    def from_json(cls, obj: dict) -> "PushInstance":
        try:
            return cls(str(obj["board"]), int(obj["W"]), int(obj["P"]), int(obj["J"]), int(obj["K"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceError(f"bad push payload: {exc}") from exc

    def to_json(self) -> dict:
        return {"board": self.board, "W": self.W, "P": self.P, "J": self.J, "K": self.K}


def compute_dmin(inst: PushInstance, length: int | None = None) -> list[float]:
    """Cheapest cost to travel ``d`` squares one way over empty squares, for d = 0..length."""
    n = inst.N if length is None else length
    W, J, K = inst.W, inst.J, inst.K
    dmin = [0] + [d * W for d in range(1, n + 1)]
    pattern = (K - 1) * W + J
    for d in range(1, n + 1):
        best = dmin[d]
        for q in range(1, K + 1):
            if K - 1 + q == d:
                best = min(best, pattern)
        for k in range(1, d):
            best = min(best, dmin[k] + dmin[d - k])
        dmin[d] = best
    return dmin


@dataclass
class PushTables:
    next: list[int]
    nleft: list[int]
    nright: list[int]
    neleft: list[int]
    nteleft: list[int]


def compute_tables(inst: PushInstance) -> PushTables:
    """Auxiliary per-square arrays (1-based, index 0 unused)."""
    N = inst.N
    nxt = [0] * (N + 2)
    nxt[N] = N + 1
    for i in range(N - 1, 0, -1):
        nxt[i] = i + 1 if inst.block(i + 1) else nxt[i + 1]
    nleft = [0] * (N + 2)
    nteleft = [0] * (N + 2)
    neleft = [0] * (N + 2)
    for i in range(1, N + 1):
        nleft[i] = nleft[i - 1] + inst.block(i)
        nteleft[i] = nteleft[i - 1] + (not inst.block(i))
        neleft[i] = 0 if i == 1 or inst.block(i - 1) else neleft[i - 1] + 1
    nright = [0] * (N + 2)
    for i in range(N, 0, -1):
        nright[i] = nright[i + 1] + inst.block(i)
    return PushTables(nxt, nleft, nright, neleft, nteleft)


def solve(inst: PushInstance) -> float:
    """Minimum energy to bring the robot to square N (``inf`` if impossible)."""
    N, W, P, J, K = inst.N, inst.W, inst.P, inst.J, inst.K
    tab = compute_tables(inst)
    dmin = compute_dmin(inst, 2 * N)
    jump_tail = (K - 1) * W + J
    E = [[INF] * (N + 1) for _ in range(N + 2)]
    E[1][0] = 0
    best = INF
    for i in range(1, N + 1):
        for j in range(0, i):
            base = E[i][j]
            if base == INF:
                continue
            if i == N:
                best = min(best, base)
                continue
            lo = i - j
            room_left = lo - 1 - tab.nleft[i]
            nx = tab.next[i]
            if nx == N + 1:
                # open road: optionally back up (or push left) for a longer run
                travel = N - i
                cost = dmin[travel]
                for x in range(1, j + 1):
                    cost = min(cost, dmin[x] + dmin[x + travel])
                for y in range(1, room_left + 1):
                    cost = min(cost, dmin[j] + y * P + dmin[j + y + travel])
                best = min(best, base + cost)
                continue
            hi = nx - 1
            empties_right = [k for k in range(nx, N + 1) if not inst.block(k)]

            def exits(a, b, pos, disturbed, pre):
                # walk K-1 squares ending at s in [a, b], then jump past ``disturbed``
                for s in range(a + K - 1, b + 1):
                    r = s - K + 1
                    head = pre + dmin[abs(pos - r)] + jump_tail
                    for q in range(1, K + 1):
                        land = s + q
                        if land > N:
                            break
                        if land <= disturbed or inst.block(land):
                            continue
                        jl = min(tab.neleft[land], land - disturbed - 1)
                        if base + head < E[land][jl]:
                            E[land][jl] = base + head

            for x in range(0, len(empties_right) + 1):
                disturbed = hi if x == 0 else empties_right[x - 1]
                b = hi + x
                for y in range(0, room_left + 1):
                    a = lo - y
                    if x == 0 and y == 0:
                        exits(a, b, i, disturbed, 0)
                    elif x == 0:
                        exits(a, b, a, disturbed, dmin[i - lo] + y * P)
                    elif y == 0:
                        exits(a, b, b, disturbed, dmin[hi - i] + x * P)
                    else:
                        right_first = dmin[hi - i] + x * P + dmin[hi + x - lo] + y * P
                        exits(a, b, a, disturbed, right_first)
                        left_first = dmin[i - lo] + y * P + dmin[hi - a] + x * P
                        exits(a, b, b, disturbed, left_first)
    return best


def oracle_solve(inst: PushInstance) -> float:
    """Dijkstra over (robot square, block mask, walk streak)."""
    N, K = inst.N, inst.K
    if N > ORACLE_MAX_N:
        raise ResourceLimitError(f"oracle limited to N <= {ORACLE_MAX_N}")
    blocks0 = 0
    for sq in range(1, N + 1):
        if inst.block(sq):
            blocks0 |= 1 << sq
    start = (1, blocks0, 0, 0)
    dist = {start: 0}
    heap = [(0, start)]
    while heap:
        d, state = heapq.heappop(heap)
        if d != dist.get(state):
            continue
        pos, mask, sdir, slen = state
        if pos == N:
            return d
        for step in (1, -1):
            nb = pos + step
            if not 1 <= nb <= N:
                continue
            if not mask >> nb & 1:
                run = slen + 1 if sdir == step else 1
                nxt = (nb, mask, step, min(run, K - 1))
                _relax(dist, heap, nxt, d + inst.W)
            else:
                # find the first empty square beyond the block run
                e = nb
                while 1 <= e <= N and mask >> e & 1:
                    e += step
                if 1 <= e <= N:
                    new_mask = (mask & ~(1 << nb)) | (1 << e)
                    _relax(dist, heap, (nb, new_mask, 0, 0), d + inst.P)
            if sdir == step and slen >= K - 1:
                for q in range(1, K + 1):
                    land = pos + step * q
                    if 1 <= land <= N and not mask >> land & 1:
                        _relax(dist, heap, (land, mask, 0, 0), d + inst.J)
    return INF


def _relax(dist, heap, state, cost) -> None:
    if cost < dist.get(state, INF):
        dist[state] = cost
        heapq.heappush(heap, (cost, state))
