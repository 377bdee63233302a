"""Constructive move sequences for two single-player puzzles, with replay checkers.

Gathering: ``Move(u, v, w)`` takes one unit from each of ``u`` and ``v`` and
puts both into ``w``; the goal is a single non-empty recipient.

Token ordering: a board of ``2N+2`` cells holds N red and N blue tokens and
two adjacent holes; ``Move(i)`` lifts the tokens at ``i, i+1`` into the
holes.  The goal is ``R^N __ B^N``.

Recipient and board indices are 0-based in every public result.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

from .errors import InstanceError, InvariantViolation, ResourceLimitError

GATHERED = "already-gathered"
SOLVED = "gathered"
UNSOLVABLE = "unsolvable"


@dataclass
class GatherResult:
    status: str
    moves: list[tuple[int, int, int]] = field(default_factory=list)
    final: list[int] | None = None

    @property
    def solvable(self) -> bool:
        return self.status != UNSOLVABLE


def _nonzero_profile(r: list[int]) -> list[int]:
    return sorted(x for x in r if x > 0)


def gather(r: list[int]) -> GatherResult:
    """Two-stage gathering: pair up units into the last recipient, then drain the straggler."""
    r = [int(x) for x in r]
    n = len(r)
    if n < 4:
        raise InstanceError("gathering needs at least 4 recipients")
    if any(x < 0 for x in r):
        raise InstanceError("resource counts must be non-negative")
    profile = _nonzero_profile(r)
    if len(profile) <= 1:
        return GatherResult(GATHERED, [], list(r))
    if profile == [1, 2]:
        return GatherResult(UNSOLVABLE, [], None)
    moves: list[tuple[int, int, int]] = []

    def move(u, v, w):
        if r[u] <= 0 or r[v] <= 0 or len({u, v, w}) != 3:
            raise InvariantViolation(f"illegal move {(u, v, w)} on {r}")
        r[u] -= 1
        r[v] -= 1
        r[w] += 2
        moves.append((u, v, w))

    if profile == [1, 1, 1]:
        # the staged procedure would strand a {2,1} pair here
        u, v, w = (i for i in range(n) if r[i] > 0)
        move(u, v, w)
        return GatherResult(SOLVED, moves, list(r))

    last = n - 1
    i = j = 0
    while i < last and j < last:
        while r[i] == 0 and i < last:
            i += 1
        while (j <= i or r[j] == 0) and j < last:
            j += 1
        if i < j < last:
            move(i, j, last)

    k = next((q for q in range(last) if r[q] > 0), None)
    if k is not None:
        if k == 0:
            a, b = 1, 2
        elif k == last - 1:
            a, b = last - 1 - 1, last - 1 - 2
        else:
            a, b = k - 1, k + 1
        if r[k] > r[last]:
            dest, k = k, last
        else:
            dest = last
        while r[k] > 0 and r[dest] > 0:
            if r[k] >= 2:
                move(k, dest, a)
                move(k, dest, b)
                move(a, b, dest)
                move(a, b, dest)
            else:
                move(k, dest, a)
                k, a = a, k
    if len(_nonzero_profile(r)) > 1:
        raise InvariantViolation(f"gathering ended with several non-empty recipients: {r}")
    return GatherResult(SOLVED, moves, list(r))


def replay_gather(r: list[int], moves) -> tuple[list[int] | None, str | None]:
    """Apply moves with legality checks; return (final state, None) or (None, violation)."""
    r = [int(x) for x in r]
    for idx, mv in enumerate(moves):
        u, v, w = mv
        if len({u, v, w}) != 3 or not all(0 <= z < len(r) for z in (u, v, w)):
            return None, f"move {idx} does not name three distinct recipients"
        if r[u] <= 0 or r[v] <= 0:
            return None, f"move {idx} takes from an empty recipient"
        r[u] -= 1
        r[v] -= 1
        r[w] += 2
    return r, None


def gather_solvable_bfs(r: list[int], max_states: int = 200_000) -> bool:
    """Ground truth: can some move sequence leave at most one non-empty recipient?"""
    start = tuple(int(x) for x in r)
    n = len(start)
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        if sum(1 for x in s if x > 0) <= 1:
            return True
        for u in range(n):
            if not s[u]:
                continue
            for v in range(u + 1, n):
                if not s[v]:
                    continue
                for w in range(n):
                    if w in (u, v):
                        continue
                    t = list(s)
                    t[u] -= 1
                    t[v] -= 1
                    t[w] += 2
                    t = tuple(t)
                    if t not in seen:
                        if len(seen) >= max_states:
                            raise ResourceLimitError("gather BFS exceeded its state budget")
                        seen.add(t)
                        queue.append(t)
    return False


EMPTY = "_"


def _parse_board(board: str) -> tuple[int, list[str]]:
    cells = list(board)
    L = len(cells)
    if L < 8 or L % 2:
        raise InstanceError("board length must be 2N+2 with N >= 3")
    N = (L - 2) // 2
    counts = Counter(cells)
    if set(counts) - {"R", "B", EMPTY}:
        raise InstanceError("board cells must be R, B or _")
    if counts["R"] != N or counts["B"] != N or counts[EMPTY] != 2:
        raise InstanceError("board needs N red tokens, N blue tokens and two holes")
    p = cells.index(EMPTY)
    if p + 1 >= L or cells[p + 1] != EMPTY:
        raise InstanceError("the two holes must be adjacent")
    return N, cells


def token_target(N: int) -> str:
    return "R" * N + EMPTY * 2 + "B" * N


def sort_tokens(board: str) -> list[int]:
    """Move sequence (0-based ``i`` of each ``Move(i)``) that sorts the board."""
    N, flat = _parse_board(board)
    L = 2 * N + 2
    cell = [None] + flat  # 1-based below
    p = flat.index(EMPTY) + 1
    moves: list[int] = []

    def move(z: int) -> None:
        nonlocal p
        if not (1 <= z < L) or cell[z] == EMPTY or cell[z + 1] == EMPTY:
            raise InvariantViolation(f"illegal token move at {z}")
        cell[p], cell[p + 1] = cell[z], cell[z + 1]
        cell[z] = cell[z + 1] = EMPTY
        p = z
        moves.append(z - 1)

    i, next_r = 1, 0
    while i <= N:
        if cell[i] == "R":
            i += 1
            continue
        if cell[i] == "B":
            if cell[i + 1] != EMPTY:
                move(i)
            else:
                move(i + 3)
            continue
        if next_r <= i:
            next_r = i + 1
        while next_r <= L and cell[next_r] != "R":
            next_r += 1
        if next_r > L:
            raise InvariantViolation("no red token left to the right of the hole")
        if next_r < L:
            move(next_r)
        else:
            move(L - 1)
            move(N + 2)
            move(N - 1)
            move(N + 1)
            break
    if p > N + 2:
        move(N + 1)
    elif p == N + 2:
        move(N + 4)
        move(N + 1)
    return moves


def replay_tokens(board: str, moves) -> tuple[str | None, str | None]:
    """Apply ``Move(i)`` steps (0-based); return (final board, None) or (None, violation)."""
    _, cells = _parse_board(board)
    L = len(cells)
    for idx, z in enumerate(moves):
        if not 0 <= z < L - 1:
            return None, f"move {idx} is off the board"
        if cells[z] == EMPTY or cells[z + 1] == EMPTY:
            return None, f"move {idx} lifts from an empty cell"
        p = cells.index(EMPTY)
        if cells[p + 1] != EMPTY:
            return None, f"move {idx}: holes are not adjacent"
        cells[p], cells[p + 1] = cells[z], cells[z + 1]
        cells[z] = cells[z + 1] = EMPTY
    return "".join(cells), None


def tokens_reachable_bfs(board: str) -> bool:
    """Breadth-first search over board encodings; small boards only."""
    N, _ = _parse_board(board)
    if N > 5:
        raise ResourceLimitError("token BFS limited to N <= 5")
    target = token_target(N)
    seen = {board}
    queue = deque([board])
    while queue:
        s = queue.popleft()
        if s == target:
            return True
        p = s.index(EMPTY)
        for z in range(len(s) - 1):
            if s[z] == EMPTY or s[z + 1] == EMPTY:
                continue
            c = list(s)
            c[p], c[p + 1] = c[z], c[z + 1]
            c[z] = c[z + 1] = EMPTY
            t = "".join(c)
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return False
