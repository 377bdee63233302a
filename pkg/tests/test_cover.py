import math
import random

import pytest

import randgen
from resalloc.cover import (
    Rect,
    RectInstance,
    brute_force_min_cost,
    max_rect_under_budget,
    min_placement_cost,
    min_unavoidable_weight,
    placement_cost_at,
)
from resalloc.errors import InstanceError

# brute_force_min_cost on randgen.rects(Random(600 + k)) for sum and max
FROZEN_SUM = [0, 0, 0, 3, 0, 3, 2, 0, 12, 0, 0, 7]
FROZEN_MAX = [0, 0, 0, 2, 0, 3, 2, 0, 8, 0, 0, 4]

R10 = ((0, 10), (0, 10))


def test_empty_aggregates():
    inst = RectInstance(R10, [], (3, 3))
    assert min_placement_cost(inst, "sum").cost == 0
    assert min_placement_cost(inst, "max").cost == 0
    assert min_placement_cost(inst, "prod").cost == 1


def test_full_cover_is_unavoidable():
    inst = RectInstance(R10, [Rect((0, 0), (10, 10), 3)], (2, 2))
    assert min_placement_cost(inst, "sum").cost == 3


def test_touching_edges_do_not_count():
    # a 5-wide window fits exactly beside a rectangle occupying x in [5, 10]
    inst = RectInstance(R10, [Rect((5, 0), (10, 10), 4)], (5, 10))
    res = min_placement_cost(inst, "sum")
    assert res.cost == 0 and res.corner[0] == 5


def test_free_corner_gives_zero_weight():
    inst = RectInstance(R10, [Rect((0, 0), (3, 3), 7)], (2, 2))
    assert min_unavoidable_weight(inst) == 0


def test_stacked_halves():
    # two rectangles together cover R: the top half weighs 2, the bottom 5
    inst = RectInstance(R10, [Rect((0, 5), (10, 10), 2), Rect((0, 0), (10, 5), 5)], (2, 2))
    assert min_unavoidable_weight(inst) == 2
    assert min_placement_cost(inst, "max").cost == 2


def test_frozen_oracle_values():
    for k in range(len(FROZEN_SUM)):
        inst = randgen.rects(random.Random(600 + k))
        assert brute_force_min_cost(inst, "sum") == FROZEN_SUM[k] == min_placement_cost(inst, "sum").cost
        assert brute_force_min_cost(inst, "max") == FROZEN_MAX[k] == min_placement_cost(inst, "max").cost


def test_corner_certificates_and_order_invariance():
    rng = random.Random(13)
    for _ in range(80):
        inst = randgen.rects(rng)
        for agg in ("sum", "max", "prod"):
            res = min_placement_cost(inst, agg)
            assert math.isclose(placement_cost_at(inst, res.corner, inst.L, agg), res.cost, rel_tol=1e-9)
        shuffled = list(inst.rects)
        rng.shuffle(shuffled)
        again = RectInstance(inst.R, shuffled, inst.L)
        assert min_placement_cost(again, "sum").cost == min_placement_cost(inst, "sum").cost


def test_prod_matches_brute_force():
    rng = random.Random(14)
    for _ in range(50):
        inst = randgen.rects(rng)
        prod = min_placement_cost(inst, "prod").cost
        assert prod > 0
        assert math.isclose(prod, brute_force_min_cost(inst, "prod"), rel_tol=1e-9)


def test_budget_everything_affordable():
    inst = RectInstance(((0, 12), (0, 8)), [Rect((1, 1), (3, 3), 2), Rect((5, 5), (9, 7), 4)])
    res = max_rect_under_budget(inst, 1.0, 6, 1e-3)
    assert res.feasible and res.L1 == 8


def test_budget_below_any_tiny_placement():
    inst = RectInstance(R10, [Rect((0, 0), (10, 10), 3)])
    res = max_rect_under_budget(inst, 1.0, 2, 1e-3)
    assert not res.feasible and res.L1 == 0


def test_budget_bisection_brackets_the_answer():
    rng = random.Random(15)
    tol = 1e-3
    for _ in range(40):
        inst = randgen.rects(rng, with_L=False)
        f, B = rng.choice([0.5, 1.0, 2.0]), rng.randint(0, 15)
        res = max_rect_under_budget(inst, f, B, tol)
        top = min(inst.R[0][1] - inst.R[0][0], (inst.R[1][1] - inst.R[1][0]) / f)
        if not res.feasible:
            continue
        assert min_placement_cost(inst, "sum", (res.L1, f * res.L1)).cost <= B
        nxt = res.L1 + 2 * tol
        if nxt <= top:
            assert min_placement_cost(inst, "sum", (nxt, f * nxt)).cost > B


def test_validation():
    with pytest.raises(InstanceError):
        RectInstance(R10, [Rect((0, 0), (11, 2), 1)], (1, 1))
    with pytest.raises(InstanceError):
        RectInstance(R10, [Rect((0, 0), (1, 1), 0)], (1, 1))
    with pytest.raises(InstanceError):
        RectInstance(R10, [], (11, 1))
    with pytest.raises(InstanceError):
        min_placement_cost(RectInstance(R10, [], (1, 1)), "mean")
