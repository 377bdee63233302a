"""Axis-aligned box K-center under the L-infinity distance.

The decision version asks whether boxes of the given sizes can cover a point
set.  Some box must cover extreme points on at least ``q = floor(2d/K)`` of the
``2d`` sides of the point set's bounding box; after sliding each box so its low
corner sits on coordinates of points it covers, that box's low corner is a
tuple of point coordinates touching ``q`` sides.  The search enumerates those
tuples for an anchor box and recurses on the points it leaves uncovered.

The optimisation version binary-searches the distance ``D``: a point is within
``D`` of a box of sizes ``L`` exactly when the box grown by ``D`` on every side
(sizes ``L + 2D``) contains it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .errors import InstanceError, ResourceLimitError
from .ranges import RangeTreeD

MAX_K = 4
MAX_D = 3
ORACLE_MAX_N = 12
FIXED_SCAN_LIMIT = 8  # fixed boxes up to this count are handled by a plain scan
RANGE_TREE_MIN_POINTS = 256  # below this the K=2 remainder is cheaper to scan


@dataclass
class FixedBox:
    lo: tuple[float, ...]
    hi: tuple[float, ...]


@dataclass
class KCenterInstance:
    points: list[tuple[float, ...]]
    boxes: list[tuple[float, ...]]
    weights: list[float] | None = None
    fixed: list[FixedBox] = field(default_factory=list)
    tol: float | None = None

    def __post_init__(self):
        self.points = [tuple(p) for p in self.points]
        self.boxes = [tuple(b) for b in self.boxes]
        self.fixed = [f if isinstance(f, FixedBox) else FixedBox(tuple(f["lo"]), tuple(f["hi"])) for f in self.fixed]
        if not self.boxes:
            raise InstanceError("at least one box is required")
        d = len(self.boxes[0])
        if d < 2:
            raise InstanceError("dimension must be at least 2")
        if any(len(b) != d for b in self.boxes) or any(len(p) != d for p in self.points):
            raise InstanceError("points and boxes must share one dimension")
        if any(not s > 0 for b in self.boxes for s in b):
            raise InstanceError("box sizes must be positive")
        for f in self.fixed:
            if len(f.lo) != d or len(f.hi) != d or any(a > b for a, b in zip(f.lo, f.hi)):
                raise InstanceError("fixed boxes need lo <= hi in every dimension")
        if self.weights is not None:
            if len(self.weights) != len(self.points) or any(not w > 0 for w in self.weights):
                raise InstanceError("one positive weight per point is required")
        check_guard(d, len(self.boxes))

    @property
    def d(self) -> int:
        return len(self.boxes[0])

    @property
    def K(self) -> int:
        return len(self.boxes)

    def spread(self) -> float:
        if not self.points:
            return 0.0
        return max(max(p[j] for p in self.points) - min(p[j] for p in self.points) for j in range(self.d))

    @classmethod
    def from_json(cls, obj: dict) -> "KCenterInstance":
        try:
            inst = cls(
                [tuple(p) for p in obj["points"]],
                [tuple(b) for b in obj["boxes"]],
                obj.get("weights"),
                [FixedBox(tuple(f["lo"]), tuple(f["hi"])) for f in obj.get("fixed", [])],
                obj.get("tol"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceError(f"bad kcenter payload: {exc}") from exc
        if "d" in obj and obj["d"] != inst.d:
            raise InstanceError("declared dimension disagrees with the data")
        return inst

    def to_json(self) -> dict:
        out = {"d": self.d, "points": [list(p) for p in self.points], "boxes": [list(b) for b in self.boxes]}
        if self.weights is not None:
            out["weights"] = list(self.weights)
        if self.fixed:
            out["fixed"] = [{"lo": list(f.lo), "hi": list(f.hi)} for f in self.fixed]
        if self.tol is not None:
            out["tol"] = self.tol
        return out


def check_guard(d: int, K: int) -> None:
    if K < 1:
        raise InstanceError("K must be at least 1")
    if K > MAX_K or d > MAX_D:
        raise ResourceLimitError(f"K-center search is limited to K <= {MAX_K} and d <= {MAX_D}")


@dataclass
class CoverVerdict:
    feasible: bool
    corners: list[tuple[float, ...]] | None = None  # low corner of each box, in input order


def _inside(p, corner, size) -> bool:
    return all(c <= x <= c + s for x, c, s in zip(p, corner, size))


def _fits(pts, size, d) -> tuple[float, ...] | None:
    lo = tuple(min(p[j] for p in pts) for j in range(d))
    hi = tuple(max(p[j] for p in pts) for j in range(d))
    return lo if all(hi[j] - lo[j] <= size[j] for j in range(d)) else None


def _remainder_fits(trees, corner, size, other, d):
    """Bounding box of the points outside ``corner + size``, from half-space queries."""
    lo, hi = [], []
    for j in range(d):
        mn, mx = math.inf, -math.inf
        for jj in range(d):
            below = [None] * d
            above = [None] * d
            below[jj] = (None, corner[jj], False, True)
            above[jj] = (corner[jj] + size[jj], None, True, False)
            mn = min(mn, trees[j].min_weight(below), trees[j].min_weight(above))
            mx = max(mx, trees[j].max_weight(below), trees[j].max_weight(above))
        lo.append(mn)
        hi.append(mx)
    if lo[0] == math.inf:
        return True, None
    if all(hi[j] - lo[j] <= other[j] for j in range(d)):
        return True, tuple(lo)
    return False, None


def _search(pts, boxes, sizes, d, range_tree, seen=None):
    """Map box index -> low corner covering ``pts``, or None.

    ``seen`` collects (remaining boxes, remaining points) pairs already shown
    infeasible, since many anchor corners leave the same points behind.
    """
    if not pts:
        return {}
    if len(boxes) == 1:
        corner = _fits(pts, sizes[boxes[0]], d)
        return None if corner is None else {boxes[0]: corner}
    if seen is None:
        seen = set()
    K = len(boxes)
    co = [sorted({p[j] for p in pts}) for j in range(d)]
    # identical boxes are interchangeable: anchor each distinct size once
    anchors = list({sizes[b]: b for b in reversed(boxes)}.values())
    for a in anchors:
        L = sizes[a]
        if all(co[j][-1] - co[j][0] <= L[j] for j in range(d)):
            return {a: tuple(c[0] for c in co)}
    q = 2 * d // K
    trees = None
    use_rt = len(pts) >= RANGE_TREE_MIN_POINTS if range_tree is None else range_tree
    if K == 2 and use_rt:
        trees = [RangeTreeD(pts, [p[j] for p in pts]) for j in range(d)]
    for a in anchors:
        L = sizes[a]
        rest = [b for b in boxes if b != a]
        comin = [next(i for i, c in enumerate(co[j]) if c + L[j] >= co[j][-1]) for j in range(d)]
        # once a box reaches the high side, raising its corner only uncovers points
        for idx in itertools.product(*(range(comin[j] + 1) for j in range(d))):
            # consistent with some choice of q touched sides
            touched = sum((idx[j] == 0) + (idx[j] >= comin[j]) for j in range(d))
            if touched < q:
                continue
            corner = tuple(co[j][idx[j]] for j in range(d))
            if trees is not None:
                ok, other = _remainder_fits(trees, corner, L, sizes[rest[0]], d)
                if ok:
                    return {a: corner} if other is None else {a: corner, rest[0]: other}
                continue
            left = [p for p in pts if not _inside(p, corner, L)]
            key = (tuple(rest), frozenset(left))
            if key in seen:
                continue
            sub = _search(left, rest, sizes, d, range_tree, seen)
            if sub is not None:
                sub[a] = corner
                return sub
            seen.add(key)
    return None


def _complete(found, sizes, pts, d):
    spare = tuple(pts[0]) if pts else (0.0,) * d
    return [found.get(b, spare) for b in range(len(sizes))]


def is_feasible_cover(d: int, S, K: int, sizes, range_tree: bool | None = None) -> CoverVerdict:
    """Can boxes ``sizes[0..K-1]`` cover every point of ``S``?

    ``range_tree`` forces (True) or disables (False) the range-tree bounding box
    of the remainder when two boxes are left; None picks it for larger sets.
    """
    check_guard(d, K)
    sizes = [tuple(s) for s in sizes]
    if len(sizes) != K:
        raise InstanceError("one size tuple per box is required")
    pts = [tuple(p) for p in S]
    found = _search(pts, list(range(K)), sizes, d, range_tree)
    if found is None:
        return CoverVerdict(False)
    return CoverVerdict(True, _complete(found, sizes, pts, d))


@dataclass
class KCenterResult:
    D: float
    corners: list[tuple[float, ...]]  # low corners of the un-inflated boxes


def _inflated(boxes, D):
    return [tuple(s + 2 * D for s in b) for b in boxes]


def _shrink(corners, D):
    return [tuple(c + D for c in corner) for corner in corners]


def _survivors(inst: KCenterInstance, D: float):
    pts = inst.points
    if not inst.fixed:
        return pts
    grown = [(tuple(a - D for a in f.lo), tuple(b + D for b in f.hi)) for f in inst.fixed]
    if len(grown) <= FIXED_SCAN_LIMIT:
        return [p for p in pts if not any(all(lo[j] <= p[j] <= hi[j] for j in range(inst.d)) for lo, hi in grown)]
    tree = RangeTreeD(pts)
    gone: set[int] = set()
    for lo, hi in grown:
        gone.update(tree.report_and_delete(list(zip(lo, hi))))
    return [p for i, p in enumerate(pts) if i not in gone]


def _decide(inst: KCenterInstance, D: float) -> CoverVerdict:
    return is_feasible_cover(inst.d, _survivors(inst, D), inst.K, _inflated(inst.boxes, D))


def solve_k_plus_p(inst: KCenterInstance, tol: float | None = None) -> KCenterResult:
    """Smallest D (within ``tol``) for which the K free boxes, together with the fixed ones, reach every point."""
    spread = inst.spread()
    if tol is None:
        tol = inst.tol if inst.tol is not None else 1e-6 * spread
    first = _decide(inst, 0.0)
    if first.feasible:
        return KCenterResult(0.0, first.corners)
    if not tol > 0:
        raise InstanceError("tol must be positive")
    lo, hi = 0.0, float(spread)
    best = _decide(inst, hi)
    if not best.feasible:
        raise AssertionError("a box grown by the full spread must cover every point")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        verdict = _decide(inst, mid)
        if verdict.feasible:
            hi, best = mid, verdict
        else:
            lo = mid
    return KCenterResult(hi, _shrink(best.corners, hi))


def solve_kcenter(inst: KCenterInstance, tol: float | None = None) -> KCenterResult:
    """Minimum over placements of the largest L-infinity distance from a point to its nearest box."""
    if inst.fixed:
        inst = KCenterInstance(inst.points, inst.boxes, inst.weights, [], inst.tol)
    return solve_k_plus_p(inst, tol)


def linf_to_box(p, corner, size) -> float:
    return max(max(c - x, x - (c + s), 0) for x, c, s in zip(p, corner, size))


def validate_witness(inst: KCenterInstance, D: float, corners, slack: float = 1e-9) -> str | None:
    """Replay: every point within ``D`` of some placed box or fixed box.  Returns None when valid."""
    if corners is None or len(corners) != inst.K:
        return "witness must give one corner per box"
    eps = slack * max(1.0, inst.spread(), abs(D))
    for i, p in enumerate(inst.points):
        dist = min(linf_to_box(p, c, s) for c, s in zip(corners, inst.boxes))
        for f in inst.fixed:
            dist = min(dist, linf_to_box(p, f.lo, tuple(b - a for a, b in zip(f.lo, f.hi))))
        if dist > D + eps:
            return f"point {i} is {dist} away from every box (allowed {D})"
    return None


def validate_cover(S, sizes, corners, slack: float = 0.0) -> str | None:
    if corners is None or len(corners) != len(sizes):
        return "witness must give one corner per box"
    for i, p in enumerate(S):
        if not any(linf_to_box(p, c, s) <= slack for c, s in zip(corners, sizes)):
            return f"point {i} is not covered"
    return None


def pierce1_weighted(points, weights, L, D: float) -> bool:
    """Does one box of sizes ``L`` have every point within weighted distance ``D``?"""
    d = len(L)
    for j in range(d):
        low = max(x[j] - L[j] - D / w for x, w in zip(points, weights))
        high = min(x[j] + D / w for x, w in zip(points, weights))
        if low > high:
            return False
    return True


def solve_weighted_1center(points, weights, L, tol: float) -> float:
    """Smallest D (within ``tol``) passing :func:`pierce1_weighted`."""
    if not points or pierce1_weighted(points, weights, L, 0.0):
        return 0.0
    hi = 1.0
    while not pierce1_weighted(points, weights, L, hi):
        hi *= 2
    lo = 0.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if pierce1_weighted(points, weights, L, mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------- oracles


def exhaustive_cover(S, sizes) -> bool:
    """Branch on the first uncovered point: some remaining box covers it, low corner on point coordinates."""
    pts = [tuple(p) for p in S]
    if len(pts) > ORACLE_MAX_N:
        raise ResourceLimitError(f"cover oracle limited to {ORACLE_MAX_N} points")
    d = len(sizes[0]) if sizes else 0
    co = [sorted({p[j] for p in pts}) for j in range(d)]

    def rec(left, boxes):
        if not left:
            return True
        if not boxes:
            return False
        p = left[0]
        for b in set(boxes):
            s = sizes[b]
            opts = [[c for c in co[j] if c <= p[j] <= c + s[j]] for j in range(d)]
            rest = list(boxes)
            rest.remove(b)
            for corner in itertools.product(*opts):
                if rec([x for x in left if not _inside(x, corner, s)], rest):
                    return True
        return False

    return rec(pts, [i for i in range(len(sizes))])


def candidate_distances(inst: KCenterInstance) -> list[float]:
    """Every D at which some gap between two coordinates becomes coverable."""
    cands = {0.0}
    d = inst.d
    for a, b in itertools.combinations(inst.points, 2):
        for j in range(d):
            gap = abs(a[j] - b[j])
            for box in inst.boxes:
                if gap > box[j]:
                    cands.add((gap - box[j]) / 2)
    for p in inst.points:
        for f in inst.fixed:
            for j in range(d):
                if p[j] < f.lo[j]:
                    cands.add(float(f.lo[j] - p[j]))
                if p[j] > f.hi[j]:
                    cands.add(float(p[j] - f.hi[j]))
    return sorted(cands)


def oracle_kcenter(inst: KCenterInstance) -> float:
    """Exact optimum: smallest candidate distance the exhaustive cover accepts."""
    for D in candidate_distances(inst):
        left = [
            p
            for p in inst.points
            if not any(all(f.lo[j] - D <= p[j] <= f.hi[j] + D for j in range(inst.d)) for f in inst.fixed)
        ]
        if exhaustive_cover(left, _inflated(inst.boxes, D)):
            return D
    raise AssertionError("the largest candidate distance must be feasible")


def oracle_pierce1(points, weights, L, D: float) -> bool:
    """Scan corner candidates built from the interval endpoints in each dimension."""
    d = len(L)
    ends = [sorted({x[j] - L[j] - D / w for x, w in zip(points, weights)}) for j in range(d)]
    for corner in itertools.product(*ends):
        if all(
            x[j] - L[j] - D / w <= corner[j] <= x[j] + D / w for x, w in zip(points, weights) for j in range(d)
        ):
            return True
    return not points
