"""Fast evaluation of two one-dimensional binary automata.

Linear rule (circular): the next state is ``c_minus1*left xor c_0*self xor
c_plus1*right``.  Over GF(2) the step operator squares to the same rule with
neighbour offsets doubled, so ``m`` steps cost one pass per set bit of ``m``.

Swap rule (non-circular): every adjacent ``10`` pair becomes ``01``.  Zero
``i`` performs a sequence of *move*/*wait* actions; zero ``i``'s sequence is
derived from zero ``i-1``'s by popping the actions it spends catching up and
pushing a wait plus one move run.  The stack is kept persistent (a tree of
entries with skew-binary jump pointers) so every zero's sequence remains
queryable after later zeros have popped entries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._jit import njit
from .errors import InstanceError


def _parse_bits(state) -> np.ndarray:
    if isinstance(state, str):
        if any(ch not in "01" for ch in state):
            raise InstanceError("state strings may only contain 0 and 1")
        return np.frombuffer(state.encode(), dtype=np.uint8) - ord("0")
    arr = np.asarray(state, dtype=np.uint8)
    if arr.ndim != 1 or (arr > 1).any():
        raise InstanceError("state must be a 1-D array of bits")
    return arr.copy()


def bits_to_str(state: np.ndarray) -> str:
    return (np.asarray(state, dtype=np.uint8) + ord("0")).tobytes().decode()


def _xor_step(q, shift, cm, c0, cp):
    # memory-bound: whole-array rolls beat a compiled per-cell loop here
    out = np.zeros_like(q)
    if cm:
        out ^= np.roll(q, shift)
    if c0:
        out ^= q
    if cp:
        out ^= np.roll(q, -shift)
    return out


@dataclass
class LinearAutomaton:
    state: np.ndarray
    c_minus1: int
    c_0: int
    c_plus1: int

    def __post_init__(self):
        self.state = _parse_bits(self.state)
        if self.state.size == 0:
            raise InstanceError("automaton needs at least one cell")
        for c in (self.c_minus1, self.c_0, self.c_plus1):
            if c not in (0, 1):
                raise InstanceError("coefficients must be 0 or 1")

    @property
    def n(self) -> int:
        return int(self.state.size)


def linear_evaluate(a: LinearAutomaton, m: int) -> np.ndarray:
    """State after ``m`` steps; one doubled-offset pass per set bit of ``m``."""
    m = int(m)
    if m < 0:
        raise InstanceError("m must be non-negative")
    q = a.state.copy()
    n = a.n
    k = 0
    while m:
        if m & 1:
            q = _xor_step(q, pow(2, k, n), a.c_minus1, a.c_0, a.c_plus1)
        m >>= 1
        k += 1
    return q


def linear_naive(a: LinearAutomaton, m: int) -> np.ndarray:
    """Step-by-step reference simulation."""
    q = a.state.copy()
    for _ in range(int(m)):
        q = _xor_step(q, 1, a.c_minus1, a.c_0, a.c_plus1)
    return q


@njit
def _build_log(zeros):
    nz = zeros.shape[0]
    cap = 2 * nz + 2
    parent = np.zeros(cap, dtype=np.int64)
    jump = np.zeros(cap, dtype=np.int64)
    depth = np.zeros(cap, dtype=np.int64)
    cum = np.zeros(cap, dtype=np.int64)  # actions in entries root..node
    waits = np.zeros(cap, dtype=np.int64)  # waits in entries root..node
    top_of = np.zeros(nz, dtype=np.int64)
    nact_of = np.zeros(nz, dtype=np.int64)
    # node 0 is the empty-stack sentinel
    size = 1

    top = 0
    if nz == 0:
        return parent, jump, depth, cum, waits, top_of, nact_of
    # zero 0 performs c(0) moves
    parent[1] = 0
    jump[1] = 0
    depth[1] = 1
    cum[1] = zeros[0]
    waits[1] = 0
    size = 2
    top = 1
    top_of[0] = 1
    nact_of[0] = zeros[0]
    for i in range(1, nz):
        if zeros[i] == i:
            top_of[i] = 0
            nact_of[i] = 0
            continue
        d = zeros[i] - zeros[i - 1] - 1
        t = d
        while top != 0 and d > 0:
            p = parent[top]
            if waits[top] - waits[p] == 1:
                d -= 1
                top = p
            else:
                t += cum[top] - cum[p]
                top = p
        for kind in range(2):
            if kind == 0 and top == 0:
                continue
            x = size
            size += 1
            p = top
            parent[x] = p
            depth[x] = depth[p] + 1
            jp = jump[p]
            if p != 0 and depth[p] - depth[jp] == depth[jp] - depth[jump[jp]]:
                jump[x] = jump[jp]
            else:
                jump[x] = p
            if kind == 0:
                cum[x] = cum[p] + 1
                waits[x] = waits[p] + 1
            else:
                cum[x] = cum[p] + t
                waits[x] = waits[p]
            top = x
        top_of[i] = top
        nact_of[i] = cum[top]
    return parent, jump, depth, cum, waits, top_of, nact_of


@njit
def _positions(zeros, top_of, nact_of, parent, jump, cum, waits, idx, ms):
    out = np.empty(idx.shape[0], dtype=np.int64)
    for k in range(idx.shape[0]):
        i = idx[k]
        m = ms[k]
        nact = nact_of[i]
        if m >= nact:
            out[k] = i
            continue
        thr = nact - m
        u = top_of[i]
        # shallowest ancestor whose prefix action count still reaches thr
        while u != 0 and cum[parent[u]] >= thr:
            if cum[jump[u]] >= thr:
                u = jump[u]
            else:
                u = parent[u]
        nw = waits[top_of[i]] - waits[u]
        out[k] = zeros[i] - m + nw
    return out


@dataclass
class SwapLog:
    """Persistent action stack for every zero plus the stabilization time."""

    n: int
    zeros: np.ndarray
    parent: np.ndarray
    jump: np.ndarray
    depth: np.ndarray
    cum: np.ndarray
    waits: np.ndarray
    top_of: np.ndarray
    nact_of: np.ndarray
    T: int

    def actions(self, i: int) -> list[tuple[str, int]]:
        """Zero ``i``'s compressed log, last action first, as (kind, count) pairs."""
        out = []
        u = int(self.top_of[i])
        while u != 0:
            p = int(self.parent[u])
            if self.waits[u] - self.waits[p] == 1:
                out.append(("wait", 0))
            else:
                out.append(("move", int(self.cum[u] - self.cum[p])))
            u = p
        out.reverse()
        return out


def swap_build_log(state) -> SwapLog:
    bits = _parse_bits(state)
    zeros = np.flatnonzero(bits == 0).astype(np.int64)
    parent, jump, depth, cum, waits, top_of, nact_of = _build_log(zeros)
    T = int(nact_of.max()) if zeros.size else 0
    return SwapLog(int(bits.size), zeros, parent, jump, depth, cum, waits, top_of, nact_of, T)


def swap_positions(log: SwapLog, idx, ms) -> np.ndarray:
    """Vectorized cell of zero ``idx[k]`` after ``ms[k]`` steps."""
    idx = np.asarray(idx, dtype=np.int64)
    ms = np.asarray([min(int(m), log.T) for m in np.atleast_1d(ms)], dtype=np.int64)
    if ms.size == 1 and idx.size != 1:
        ms = np.full(idx.size, ms[0], dtype=np.int64)
    if ms.size != idx.size:
        raise InstanceError("give one m, or one m per zero index")
    if ((idx < 0) | (idx >= log.zeros.size)).any():
        raise InstanceError("zero index out of range")
    if (ms < 0).any():
        raise InstanceError("m must be non-negative")
    return _positions(log.zeros, log.top_of, log.nact_of, log.parent, log.jump, log.cum, log.waits, idx, ms)


def swap_position(log: SwapLog, i: int, m: int) -> int:
    if not 0 <= i < log.zeros.size:
        raise InstanceError(f"zero index {i} out of range")
    if m < 0:
        raise InstanceError("m must be non-negative")
    if m >= log.nact_of[i]:
        return int(i)
    return int(swap_positions(log, [i], [m])[0])


def swap_state(state, m: int, log: SwapLog | None = None) -> np.ndarray:
    """Full state after ``m`` steps, assembled from the zero positions."""
    if log is None:
        log = swap_build_log(state)
    out = np.ones(log.n, dtype=np.uint8)
    nz = log.zeros.size
    if nz:
        out[swap_positions(log, np.arange(nz), [m])] = 0
    return out


def swap_step(q: np.ndarray) -> np.ndarray:
    """One synchronous step of the swap rule."""
    q = np.asarray(q, dtype=np.uint8)
    hit = (q[:-1] == 1) & (q[1:] == 0)
    out = q.copy()
    out[:-1][hit] = 0
    out[1:][hit] = 1
    return out


def swap_naive(state, m: int) -> np.ndarray:
    q = _parse_bits(state)
    for _ in range(int(m)):
        nxt = swap_step(q)
        if np.array_equal(nxt, q):
            break
        q = nxt
    return q


def swap_naive_fixed_point(state) -> int:
    """First m at which the naive simulation stops changing."""
    q = _parse_bits(state)
    m = 0
    while True:
        nxt = swap_step(q)
        if np.array_equal(nxt, q):
            return m
        q = nxt
        m += 1


def warm_up() -> None:
    """Compile the kernels once so timing excludes JIT compilation."""
    log = swap_build_log("1010")
    swap_positions(log, [0, 1], [1])
    linear_evaluate(LinearAutomaton("101", 1, 1, 1), 3)
