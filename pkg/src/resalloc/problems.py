"""Per-problem glue for the command line: parse, solve, oracle, validate, generate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from . import automata, collector, cover, debt, games, kcenter, push, tree_storage
from .errors import InstanceError, ResourceLimitError
from .prng import SplitMix64

LINEAR_ORACLE_MAX_WORK = 5_000_000
SWAP_ORACLE_MAX_N = 4000


@dataclass
class Outcome:
    value: Any
    certificate: Any = None
    reason: str | None = None


@dataclass
class Problem:
    name: str
    parse: Callable[[dict], Any]
    solve: Callable[[Any, dict], Outcome]
    oracle: Callable[[Any, dict], Any]
    validate: Callable[[Any, Outcome, dict], str | None] | None
    generate: Callable[[SplitMix64, dict], dict]
    same: Callable[[Any, Any, Any, dict], bool] = lambda inst, a, b, opts: a == b


def _size(size: dict, key: str, default):
    return type(default)(size.get(key, default))


# ------------------------------------------------------------- tree storage


def _tree_parse(payload):
    return tree_storage.WorkflowInstance.from_json(payload)


def _tree_solve(inst, opts):
    if opts.get("method") == "uniform":
        cost, plan = tree_storage.solve_uniform(inst)
    else:
        cost, plan = tree_storage.solve_general(inst)
    return Outcome(cost, plan.to_json())


def _tree_validate(inst, out, opts):
    cert = out.certificate
    plan = tree_storage.StoragePlan(list(cert["order"]), list(cert["placements"]), cert["cost"])
    if plan.total_cost != out.value:
        return "reported value differs from the plan cost"
    return tree_storage.validate_plan(inst, plan)


def _tree_generate(rng, size):
    n = _size(size, "N", rng.randint(1, 8))
    K = _size(size, "K", 3)
    D = _size(size, "D", rng.randint(0, 4))
    lo, hi = _size(size, "cost_min", -5), _size(size, "cost_max", 5)
    parents = [-1]
    sons = [0]
    for v in range(1, n):
        open_ = [u for u in range(v) if sons[u] < K]
        p = rng.choice(open_)
        sons[p] += 1
        sons.append(0)
        parents.append(p)
    costs = [rng.randint(lo, hi) for _ in range(n)]
    return {"parents": parents, "costs": costs, "D": D, "K": K}


# --------------------------------------------------------------------- debt


def _debt_parse(payload):
    return debt.DebtInstance.from_json(payload)


def _dist_json(dist, form):
    out = dist.to_json()
    out["form"] = form
    return out


def _debt_solve(inst, opts):
    if inst.typed:
        dist = debt.solve_typed(inst)
        if dist.covered:
            return Outcome(True, _dist_json(dist, "typed"))
        ok, gen = debt.knapsack_ok(inst.to_general())
        if ok:
            return Outcome(True, _dist_json(gen, "general"))
        return Outcome(None, _dist_json(dist, "typed"), "no covering distribution exists")
    ok, gen = debt.knapsack_ok(inst)
    if ok:
        return Outcome(True, _dist_json(gen, "general"))
    return Outcome(None, None, "no covering distribution exists")


def _debt_oracle(inst, opts):
    ok, _ = debt.exhaustive_feasible(inst)
    return True if ok else None


def _debt_validate(inst, out, opts):
    cert = out.certificate
    if cert is None:
        return None if out.value is None else "covering verdict without a distribution"
    target = inst if cert["form"] == "typed" else inst.to_general()
    dist = debt.Distribution(cert["assignment"], cert["perceived"], cert["covered"])
    msg = debt.check_distribution(target, dist)
    if msg is None and dist.covered != (out.value is True):
        msg = "verdict disagrees with the distribution"
    return msg


def _debt_generate(rng, size):
    d = _size(size, "d", rng.randint(1, 3))
    Q = _size(size, "Q", rng.randint(0, 8))
    pmax = _size(size, "P_max", 6)
    P = [rng.randint(0, pmax) for _ in range(d)]
    if rng.randint(0, 1):
        C = [0] * (1 << d)
        for _ in range(Q):
            C[rng.randint(0, (1 << d) - 1)] += 1
        return {"d": d, "P": P, "C": C}
    return {"P": P, "vals": [[rng.randint(1, 3) for _ in range(Q)] for _ in range(d)]}


# ---------------------------------------------------------------- automaton


def _auto_parse(payload):
    try:
        kind = payload["kind"]
        m = int(payload["m"])
        state = str(payload["state"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(f"bad automaton payload: {exc}") from exc
    if m < 0:
        raise InstanceError("m must be non-negative")
    if kind == "linear":
        coeffs = payload.get("coeffs")
        if not isinstance(coeffs, list) or len(coeffs) != 3:
            raise InstanceError("linear automaton needs coeffs [c-1, c0, c+1]")
        return ("linear", automata.LinearAutomaton(state, *coeffs), m)
    if kind == "swap":
        if not state:
            raise InstanceError("swap automaton needs at least one cell")
        return ("swap", automata._parse_bits(state), m)
    raise InstanceError("kind must be linear or swap")


def _auto_solve(inst, opts):
    kind, a, m = inst
    if kind == "linear":
        return Outcome(automata.bits_to_str(automata.linear_evaluate(a, m)))
    log = automata.swap_build_log(a)
    return Outcome(automata.bits_to_str(automata.swap_state(a, m, log)), {"T": log.T})


def _auto_oracle(inst, opts):
    kind, a, m = inst
    if kind == "linear":
        if a.n * m > LINEAR_ORACLE_MAX_WORK:
            raise ResourceLimitError("naive linear simulation over its work cap")
        return automata.bits_to_str(automata.linear_naive(a, m))
    if a.size > SWAP_ORACLE_MAX_N:
        raise ResourceLimitError(f"naive swap simulation limited to n <= {SWAP_ORACLE_MAX_N}")
    return automata.bits_to_str(automata.swap_naive(a, m))


def _auto_validate(inst, out, opts):
    kind, a, _ = inst
    if kind == "swap" and int(np.count_nonzero(a == 0)) != out.value.count("0"):
        return "number of zero cells changed"
    if len(out.value) != (a.n if kind == "linear" else a.size):
        return "state length changed"
    return None


def _auto_generate(rng, size):
    kind = size.get("kind") or rng.choice(["linear", "swap"])
    if kind == "linear":
        n = _size(size, "n", rng.randint(1, 64))
        m = _size(size, "m", rng.randint(0, 256))
        coeffs = [rng.randint(0, 1) for _ in range(3)]
        state = "".join(str(rng.randint(0, 1)) for _ in range(n))
        return {"kind": "linear", "state": state, "coeffs": coeffs, "m": m}
    n = _size(size, "n", rng.randint(1, 200))
    m = _size(size, "m", rng.randint(0, n))
    state = "".join(str(rng.randint(0, 1)) for _ in range(n))
    return {"kind": "swap", "state": state, "m": m}


# --------------------------------------------------------------------- push


def _push_solve(inst, opts):
    e = push.solve(inst)
    return Outcome(None, None, "the last square is unreachable") if e == push.INF else Outcome(int(e))


def _push_oracle(inst, opts):
    e = push.oracle_solve(inst)
    return None if e == push.INF else int(e)


def _push_generate(rng, size):
    N = _size(size, "N", rng.randint(2, 12))
    density = rng.randint(1, 4)
    board = "R" + "".join("B" if rng.randint(0, 9) < density else "." for _ in range(N - 2)) + "."
    return {
        "board": board,
        "W": rng.randint(0, 5),
        "P": rng.randint(0, 5),
        "J": rng.randint(0, 5),
        "K": rng.randint(2, 3),
    }


# ---------------------------------------------------------------- collector


def _col_parse(payload):
    inst = collector.CollectorInstance.from_json(payload)
    method = payload.get("method", "line" if inst.x is not None else "quadratic")
    if method not in collector.SOLVERS:
        raise InstanceError(f"unknown collector method {method!r}")
    if method == "line" and inst.x is None:
        raise InstanceError("the line method needs coordinates x")
    if method == "small_tmax" and inst.Tmax is None:
        raise InstanceError("the small_tmax method needs Tmax")
    return inst, method


def _col_solve(inst, opts):
    inst, method = inst
    return Outcome(int(collector.SOLVERS[method](inst)))


def _col_oracle(inst, opts):
    return collector.exhaustive_best(inst[0])


def _col_generate(rng, size):
    M = _size(size, "M", rng.randint(0, 12))
    line = size.get("line", rng.randint(0, 1))
    if int(line):
        N = _size(size, "N", rng.randint(1, 6))
        xs = list(range(0, 3 * N))
        rng.shuffle(xs)
        x = xs[:N]
        tr = None
        hi = max(x) - min(x)
    else:
        N = _size(size, "N", rng.randint(1, 5))
        x = None
        tr = [[0 if i == j else rng.randint(1, 6) for j in range(N)] for i in range(N)]
        hi = 6
    span = _size(size, "T", 4 * max(M, 1))
    recs = [{"t": rng.randint(0, span), "v": rng.randint(0, N - 1), "c": rng.randint(0, 9)} for _ in range(M)]
    payload = {"recipients": recs}
    if tr is not None:
        payload["tr"] = tr
    if x is not None:
        payload["x"] = x
    methods = ["quadratic", "per_vertex", "small_tmax"] + (["line"] if x is not None else [])
    payload["method"] = rng.choice(methods)
    if payload["method"] == "small_tmax":
        payload["Tmax"] = max(hi, 1) + rng.randint(0, 3)
    return payload


# ------------------------------------------------------------------- gather


def _gather_parse(payload):
    try:
        r = [int(x) for x in payload["r"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceError(f"bad gather payload: {exc}") from exc
    if len(r) < 4 or any(x < 0 for x in r):
        raise InstanceError("gathering needs at least 4 non-negative counts")
    return r


def _gather_solve(r, opts):
    res = games.gather(r)
    if not res.solvable:
        return Outcome(None, None, "unsolvable")
    return Outcome(sum(r), {"moves": [list(m) for m in res.moves]})


def _gather_oracle(r, opts):
    if len(r) > 6 or sum(r) > 18:
        raise ResourceLimitError("gather BFS limited to n <= 6 and total <= 18")
    return sum(r) if games.gather_solvable_bfs(r) else None


def _gather_validate(r, out, opts):
    if out.certificate is None:
        return None
    final, err = games.replay_gather(r, [tuple(m) for m in out.certificate["moves"]])
    if err:
        return err
    if sum(1 for x in final if x) > 1:
        return "more than one recipient is non-empty"
    if len(out.certificate["moves"]) > 2 * sum(r) + 4:
        return "move count above 2*total+4"
    return None


def _gather_generate(rng, size):
    n = _size(size, "n", rng.randint(4, 6))
    top = _size(size, "r_max", 3)
    return {"r": [rng.randint(0, top) for _ in range(n)]}


# ------------------------------------------------------------------- tokens


def _tokens_parse(payload):
    try:
        board = str(payload["board"])
    except (KeyError, TypeError) as exc:
        raise InstanceError(f"bad tokens payload: {exc}") from exc
    games._parse_board(board)
    return board


def _tokens_solve(board, opts):
    moves = games.sort_tokens(board)
    N = (len(board) - 2) // 2
    return Outcome(games.token_target(N), {"moves": moves})


def _tokens_oracle(board, opts):
    return games.token_target((len(board) - 2) // 2) if games.tokens_reachable_bfs(board) else None


def _tokens_validate(board, out, opts):
    moves = out.certificate["moves"]
    final, err = games.replay_tokens(board, moves)
    if err:
        return err
    if final != out.value:
        return "replay does not end at the target board"
    N = (len(board) - 2) // 2
    if len(moves) > 5 * N + 10:
        return "move count above 5N+10"
    return None


def _tokens_generate(rng, size):
    N = _size(size, "N", rng.randint(3, 5))
    cells = ["R"] * N + ["B"] * N
    rng.shuffle(cells)
    hole = rng.randint(0, 2 * N)
    cells[hole:hole] = [games.EMPTY, games.EMPTY]
    return {"board": "".join(cells)}


# -------------------------------------------------------------------- cover


def _cover_parse(payload):
    inst = cover.RectInstance.from_json(payload)
    query = payload.get("query", "min_cost")
    agg = payload.get("agg", "sum")
    if agg not in cover.AGGREGATES:
        raise InstanceError(f"unknown aggregate {agg!r}")
    if query in ("min_cost", "min_weight"):
        if inst.L is None:
            raise InstanceError("target sizes L are required")
        extra = {}
    elif query == "max_rect":
        try:
            extra = {"f": float(payload["f"]), "B": float(payload["B"]), "tol": float(payload.get("tol", 1e-6))}
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceError(f"max_rect needs f, B and tol: {exc}") from exc
    else:
        raise InstanceError(f"unknown cover query {query!r}")
    return inst, query, agg, extra


def _bisect_budget(inst, f, B, tol, agg, probe):
    # mirror of cover.max_rect_under_budget with a pluggable cost probe
    (x0, x1), (y0, y1) = inst.R
    top = min(x1 - x0, (y1 - y0) / f)
    if not top > 0 or probe(top, f * top) <= B:
        return top if top > 0 else None
    small = min(tol, top / 2)
    if probe(small, f * small) > B:
        return None
    lo, hi = small, top
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if probe(mid, f * mid) <= B:
            lo = mid
        else:
            hi = mid
    return lo


def _cover_solve(inst, opts):
    inst, query, agg, extra = inst
    if query == "min_cost":
        res = cover.min_placement_cost(inst, agg)
        return Outcome(res.cost, {"corner": list(res.corner)})
    if query == "min_weight":
        W = cover.min_unavoidable_weight(inst)
        res = cover.min_placement_cost(inst, "max")
        return Outcome(W, {"corner": list(res.corner)})
    res = cover.max_rect_under_budget(inst, extra["f"], extra["B"], extra["tol"], agg)
    if not res.feasible:
        return Outcome(None, None, "no rectangle fits within the budget")
    return Outcome(res.L1, {"L": [res.L1, extra["f"] * res.L1], "corner": list(res.placement.corner)})


def _cover_oracle(inst, opts):
    inst, query, agg, extra = inst
    if len(inst.rects) > 40:
        raise ResourceLimitError("cover brute force limited to 40 rectangles")
    if query == "min_cost":
        return cover.brute_force_min_cost(inst, agg)
    if query == "min_weight":
        return cover.brute_force_min_cost(inst, "max")
    return _bisect_budget(
        inst, extra["f"], extra["B"], extra["tol"], agg, lambda a, b: cover.brute_force_min_cost(inst, agg, (a, b))
    )


def _cover_validate(inst, out, opts):
    inst, query, agg, extra = inst
    if out.certificate is None:
        return None
    corner = out.certificate["corner"]
    L = out.certificate.get("L", inst.L)
    for j in range(2):
        if not inst.R[j][0] + L[j] <= corner[j] <= inst.R[j][1]:
            return "corner places the rectangle outside the bounding rectangle"
    if query == "max_rect":
        paid = cover.placement_cost_at(inst, corner, L, agg)
        return None if paid <= extra["B"] * (1 + 1e-12) else "placement exceeds the budget"
    paid = cover.placement_cost_at(inst, corner, L, "max" if query == "min_weight" else agg)
    return None if math.isclose(paid, out.value, rel_tol=1e-9, abs_tol=1e-12) else "corner cost differs from value"


def _cover_same(inst, a, b, opts):
    if a is None or b is None:
        return a is b
    return math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-12)


def _cover_generate(rng, size):
    n = _size(size, "n", rng.randint(0, 12))
    W, H = rng.randint(4, 20), rng.randint(4, 20)
    rects = []
    for _ in range(n):
        x0, y0 = rng.randint(0, W - 1), rng.randint(0, H - 1)
        rects.append({"xa": [x0, y0], "xb": [rng.randint(x0 + 1, W), rng.randint(y0 + 1, H)], "w": rng.randint(1, 9)})
    payload = {"R": [[0, W], [0, H]], "rects": rects, "agg": rng.choice(list(cover.AGGREGATES))}
    query = size.get("query") or rng.choice(["min_cost", "min_cost", "min_weight", "max_rect"])
    payload["query"] = query
    if query == "max_rect":
        payload.update(f=rng.choice([0.5, 1.0, 2.0]), B=rng.randint(0, 20), tol=1e-3, agg="sum")
    else:
        payload["L"] = [rng.randint(1, W), rng.randint(1, H)]
    return payload


# ------------------------------------------------------------------ kcenter


def _kc_parse(payload):
    inst = kcenter.KCenterInstance.from_json(payload)
    if inst.weights is not None:
        if inst.K != 1 or inst.fixed:
            raise InstanceError("weighted points are supported for a single box without fixed boxes")
    return inst


def _kc_tol(inst, opts):
    tol = opts.get("tol") or inst.tol
    return tol if tol else 1e-6 * max(inst.spread(), 1.0)


def _weighted_corner(inst, D):
    L = inst.boxes[0]
    return [max(p[j] - L[j] - D / w for p, w in zip(inst.points, inst.weights)) for j in range(inst.d)]


def _kc_solve(inst, opts):
    tol = _kc_tol(inst, opts)
    if inst.weights is not None:
        D = kcenter.solve_weighted_1center(inst.points, inst.weights, inst.boxes[0], tol)
        corner = _weighted_corner(inst, D) if inst.points else [0.0] * inst.d
        return Outcome(D, {"corners": [corner]})
    res = kcenter.solve_k_plus_p(inst, tol)
    return Outcome(res.D, {"corners": [list(c) for c in res.corners]})


def _kc_oracle(inst, opts):
    if len(inst.points) > kcenter.ORACLE_MAX_N:
        raise ResourceLimitError(f"K-center oracle limited to {kcenter.ORACLE_MAX_N} points")
    if inst.weights is None:
        return kcenter.oracle_kcenter(inst)
    L = inst.boxes[0]
    cands = {0.0}
    for a, wa in zip(inst.points, inst.weights):
        for b, wb in zip(inst.points, inst.weights):
            for j in range(inst.d):
                gap = a[j] - b[j] - L[j]
                if gap > 0:
                    cands.add(gap / (1 / wa + 1 / wb))
    for D in sorted(cands):
        # nudge by a few ulps so a candidate sitting exactly on the boundary passes
        if kcenter.oracle_pierce1(inst.points, inst.weights, L, D * (1 + 1e-12) + 1e-12):
            return D
    raise AssertionError("the largest candidate distance must be feasible")


def _kc_validate(inst, out, opts):
    corners = [tuple(c) for c in out.certificate["corners"]]
    if inst.weights is None:
        return kcenter.validate_witness(inst, out.value, corners)
    eps = 1e-9 * max(1.0, inst.spread())
    for i, (p, w) in enumerate(zip(inst.points, inst.weights)):
        if kcenter.linf_to_box(p, corners[0], inst.boxes[0]) * w > out.value + eps:
            return f"point {i} is farther than the reported weighted distance"
    return None


def _kc_same(inst, a, b, opts):
    return abs(a - b) <= _kc_tol(inst, opts) + 1e-9 * max(1.0, inst.spread())


def _kc_generate(rng, size):
    d = _size(size, "d", 2)
    n = _size(size, "n", rng.randint(0, 8))
    K = _size(size, "K", rng.randint(1, 3))
    span = _size(size, "span", 20)
    pts = [[rng.randint(0, span) for _ in range(d)] for _ in range(n)]
    payload = {"d": d, "points": pts}
    mode = size.get("mode") or rng.choice(["plain", "plain", "fixed", "weighted"])
    if mode == "weighted" and n:
        payload["boxes"] = [[rng.randint(1, 6) for _ in range(d)]]
        payload["weights"] = [rng.choice([0.5, 1, 2, 4]) for _ in range(n)]
        return payload
    if rng.randint(0, 1):
        box = [rng.randint(1, 6) for _ in range(d)]
        payload["boxes"] = [box] * K
    else:
        payload["boxes"] = [[rng.randint(1, 6) for _ in range(d)] for _ in range(K)]
    if mode == "fixed":
        fixed = []
        for _ in range(rng.randint(1, 3)):
            lo = [rng.randint(0, span) for _ in range(d)]
            fixed.append({"lo": lo, "hi": [c + rng.randint(0, 4) for c in lo]})
        payload["fixed"] = fixed
    return payload


PROBLEMS: dict[str, Problem] = {
    p.name: p
    for p in [
        Problem(
            "tree-storage",
            _tree_parse,
            _tree_solve,
            lambda inst, o: tree_storage.brute_force_cost(inst),
            _tree_validate,
            _tree_generate,
        ),
        Problem("debt", _debt_parse, _debt_solve, _debt_oracle, _debt_validate, _debt_generate),
        Problem("automaton", _auto_parse, _auto_solve, _auto_oracle, _auto_validate, _auto_generate),
        Problem("push", push.PushInstance.from_json, _push_solve, _push_oracle, None, _push_generate),
        Problem("collector", _col_parse, _col_solve, _col_oracle, None, _col_generate),
        Problem("gather", _gather_parse, _gather_solve, _gather_oracle, _gather_validate, _gather_generate),
        Problem("tokens", _tokens_parse, _tokens_solve, _tokens_oracle, _tokens_validate, _tokens_generate),
        Problem("cover", _cover_parse, _cover_solve, _cover_oracle, _cover_validate, _cover_generate, _cover_same),
        Problem("kcenter", _kc_parse, _kc_solve, _kc_oracle, _kc_validate, _kc_generate, _kc_same),
    ]
}
