import itertools
import random

import pytest

from resalloc.errors import InstanceError
from resalloc.flow import FlowNetwork, check_flow, max_flow, min_cost_max_flow


def brute_max_flow(net):
    """Enumerate every integral edge flow and keep the best conserving one."""
    caps = [c for _, _, c, _ in net.edges]
    best = 0
    for flows in itertools.product(*(range(c + 1) for c in caps)):
        bal = [0] * net.node_count
        for (u, v, _, _), f in zip(net.edges, flows):
            bal[u] -= f
            bal[v] += f
        if all(bal[x] == 0 for x in range(net.node_count) if x not in (net.source, net.sink)):
            best = max(best, bal[net.sink])
    return best


def test_single_edge():
    net = FlowNetwork(2, 0, 1)
    net.add_edge(0, 1, 5)
    res = max_flow(net)
    assert res.value == 5
    assert res.edge_flows == [5]


def test_disconnected():
    net = FlowNetwork(3, 0, 2)
    net.add_edge(0, 1, 4)
    assert max_flow(net).value == 0


def test_infinite_capacity_is_bounded_by_finite_cut():
    net = FlowNetwork(3, 0, 2)
    net.add_edge(0, 1, None)
    net.add_edge(1, 2, 7)
    assert max_flow(net).value == 7


def test_bad_terminals():
    with pytest.raises(InstanceError):
        max_flow(FlowNetwork(2, 0, 0))


def test_max_flow_matches_enumeration():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(2, 6)
        net = FlowNetwork(n, 0, n - 1)
        for _ in range(rng.randint(1, 7)):
            u, v = rng.sample(range(n), 2)
            net.add_edge(u, v, rng.randint(0, 2))
        res = max_flow(net)
        assert check_flow(net, res) is None
        assert res.value == brute_max_flow(net)


def test_min_cost_single_negative_edge():
    net = FlowNetwork(2, 0, 1)
    net.add_edge(0, 1, 1, -5)
    res = min_cost_max_flow(net)
    assert (res.value, res.cost) == (1, -5)


def test_min_cost_parallel_edges_forced():
    net = FlowNetwork(2, 0, 1)
    net.add_edge(0, 1, 1, 3)
    net.add_edge(0, 1, 1, 7)
    res = min_cost_max_flow(net)
    assert (res.value, res.cost) == (2, 10)


def test_min_cost_assignment_matches_permutations():
    rng = random.Random(5)
    for _ in range(40):
        cost = [[rng.randint(-4, 9) for _ in range(3)] for _ in range(3)]
        net = FlowNetwork(8, 6, 7)
        for i in range(3):
            net.add_edge(6, i, 1)
            net.add_edge(3 + i, 7, 1)
            for j in range(3):
                net.add_edge(i, 3 + j, 1, cost[i][j])
        res = min_cost_max_flow(net)
        assert check_flow(net, res, check_cost=True) is None
        best = min(sum(cost[i][p[i]] for i in range(3)) for p in itertools.permutations(range(3)))
        assert (res.value, res.cost) == (3, best)
