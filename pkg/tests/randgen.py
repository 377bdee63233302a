"""Random instance families shared by the unit and acceptance tests."""

import random

from resalloc.collector import CollectorInstance
from resalloc.cover import Rect, RectInstance
from resalloc.debt import DebtInstance
from resalloc.push import PushInstance
from resalloc.tree_storage import WorkflowInstance


def tree(rng: random.Random, n_max=8, K=3, D_max=4, cost_range=(-5, 5), uniform=False):
    n = rng.randint(1, n_max)
    parents, sons = [None], [0]
    for v in range(1, n):
        p = rng.choice([u for u in range(v) if sons[u] < K])
        sons[p] += 1
        sons.append(0)
        parents.append(p)
    if uniform:
        c = rng.randint(1, 5)
        costs = [c] * n
    else:
        costs = [rng.randint(*cost_range) for _ in range(n)]
    return WorkflowInstance(parents, costs, rng.randint(0, D_max), K)


def debt_typed(rng, d=None, q_max=8, p_max=6):
    d = d or rng.randint(1, 3)
    C = [0] * (1 << d)
    for _ in range(rng.randint(0, q_max)):
        C[rng.randrange(1 << d)] += 1
    return DebtInstance([rng.randint(0, p_max) for _ in range(d)], C=C)


def debt_general(rng, d=None, q_max=8, p_max=6, v_max=3):
    d = d or rng.randint(1, 3)
    Q = rng.randint(0, q_max)
    return DebtInstance(
        [rng.randint(0, p_max) for _ in range(d)], vals=[[rng.randint(1, v_max) for _ in range(Q)] for _ in range(d)]
    )


def push(rng, n_max=12, k_choices=(2, 3)):
    N = rng.randint(2, n_max)
    density = rng.random() * 0.5
    board = "R" + "".join("B" if rng.random() < density else "." for _ in range(N - 2)) + "."
    return PushInstance(board, rng.randint(0, 5), rng.randint(0, 5), rng.randint(0, 5), rng.choice(k_choices))


def collector_general(rng, n_max=8, m_max=30, tr_max=6, with_tmax=True):
    N = rng.randint(1, n_max)
    tr = [[0 if i == j else rng.randint(1, tr_max) for j in range(N)] for i in range(N)]
    M = rng.randint(0, m_max)
    recs = [(rng.randint(0, 3 * M + 5), rng.randrange(N), rng.randint(0, 9)) for _ in range(M)]
    return CollectorInstance(tr, recs, Tmax=tr_max if with_tmax else None)


def collector_line(rng, n_max=10, m_max=200, span=20):
    N = rng.randint(1, n_max)
    x = rng.sample(range(span + 1), N)
    M = rng.randint(0, m_max)
    recs = [(rng.randint(0, 2 * M + 5), rng.randrange(N), rng.randint(0, 9)) for _ in range(M)]
    return CollectorInstance(None, recs, Tmax=max(max(x) - min(x), 1), x=x)


def rects(rng, n_max=12, with_L=True):
    W, H = rng.randint(4, 20), rng.randint(4, 20)
    out = []
    for _ in range(rng.randint(0, n_max)):
        x0, y0 = rng.randint(0, W - 1), rng.randint(0, H - 1)
        out.append(Rect((x0, y0), (rng.randint(x0 + 1, W), rng.randint(y0 + 1, H)), rng.randint(1, 9)))
    L = (rng.randint(1, W), rng.randint(1, H)) if with_L else None
    return RectInstance(((0, W), (0, H)), out, L)


def points(rng, n, d=2, span=12):
    return [tuple(rng.randint(0, span) for _ in range(d)) for _ in range(n)]


def box_sizes(rng, K, d=2, lo=1, hi=8, identical=None):
    if identical is None:
        identical = rng.random() < 0.5
    if identical:
        s = tuple(rng.randint(lo, hi) for _ in range(d))
        return [s] * K
    return [tuple(rng.randint(lo, hi) for _ in range(d)) for _ in range(K)]


def token_board(rng, N):
    cells = ["R"] * N + ["B"] * N
    rng.shuffle(cells)
    p = rng.randint(0, 2 * N)
    cells[p:p] = ["_", "_"]
    return "".join(cells)
