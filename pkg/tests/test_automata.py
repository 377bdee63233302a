import os
import random
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resalloc.automata import (
    LinearAutomaton,
    bits_to_str,
    linear_evaluate,
    linear_naive,
    swap_build_log,
    swap_naive,
    swap_naive_fixed_point,
    swap_position,
    swap_positions,
    swap_state,
)
from resalloc.errors import InstanceError


def test_identity_rule():
    a = LinearAutomaton("10110", 0, 1, 0)
    assert bits_to_str(linear_evaluate(a, 12345)) == "10110"


def test_pure_shift():
    a = LinearAutomaton("1000", 1, 0, 0)
    assert bits_to_str(linear_evaluate(a, 3)) == "0001"
    assert bits_to_str(linear_naive(a, 3)) == "0001"


def test_huge_m_is_accepted():
    a = LinearAutomaton("1" + "0" * 9, 1, 0, 0)
    # shifting by m on a ring of 10 lands at m mod 10
    assert bits_to_str(linear_evaluate(a, 10**18 + 3)) == "0001000000"


def test_bad_coefficients():
    with pytest.raises(InstanceError):
        LinearAutomaton("101", 2, 0, 0)
    with pytest.raises(InstanceError):
        LinearAutomaton("1a1", 1, 0, 0)


@settings(max_examples=60, deadline=None)
@given(
    st.text("01", min_size=1, max_size=40),
    st.tuples(st.integers(0, 1), st.integers(0, 1), st.integers(0, 1)),
    st.integers(0, 300),
    st.integers(0, 300),
)
def test_semigroup(state, coeffs, p, q):
    a = LinearAutomaton(state, *coeffs)
    mid = LinearAutomaton(linear_evaluate(a, p), *coeffs)
    assert np.array_equal(linear_evaluate(mid, q), linear_evaluate(a, p + q))


def test_swap_examples():
    log = swap_build_log("10")
    assert log.T == 1
    assert log.actions(0) == [("move", 1)]
    assert swap_build_log("110").T == 2
    sorted_log = swap_build_log("0011")
    assert sorted_log.T == 0
    assert list(sorted_log.nact_of) == [0, 0]


def test_swap_state_endpoints():
    state = "1101001"
    log = swap_build_log(state)
    assert bits_to_str(swap_state(state, 0, log)) == state
    assert bits_to_str(swap_state(state, log.T, log)) == "0001111"
    zeros = [i for i, ch in enumerate(state) if ch == "0"]
    for i, c in enumerate(zeros):
        assert swap_position(log, i, 0) == c
        assert swap_position(log, i, log.T) == i
        assert swap_position(log, i, 10**18) == i


def test_swap_matches_naive_and_orders_zeros():
    rng = random.Random(17)
    for _ in range(40):
        n = rng.randint(1, 60)
        state = "".join(rng.choice("01") for _ in range(n))
        log = swap_build_log(state)
        assert log.T == swap_naive_fixed_point(state)
        nz = state.count("0")
        prev = None
        for m in range(log.T + 2):
            got = swap_state(state, m, log)
            assert np.array_equal(got, swap_naive(state, m))
            pos = swap_positions(log, np.arange(nz), [m]) if nz else np.array([], dtype=np.int64)
            assert np.all(np.diff(pos) > 0)
            if prev is not None:
                assert np.all(pos <= prev)
            prev = pos


def test_swap_rejects_bad_queries():
    log = swap_build_log("100")
    with pytest.raises(InstanceError):
        swap_position(log, 5, 0)
    with pytest.raises(InstanceError):
        swap_position(log, 0, -1)
    with pytest.raises(InstanceError):
        swap_positions(log, [0, 1], [0, 1, 2])


def test_fallback_path_matches_compiled():
    script = (
        "import numpy as np; from resalloc import automata; from resalloc._jit import JIT_ENABLED;"
        "s = ''.join(np.random.default_rng(5).choice(['0', '1'], 3000)); log = automata.swap_build_log(s);"
        "z = np.arange(s.count('0'));"
        "tot = [int(automata.swap_positions(log, z, [m]).sum()) for m in (0, 1, 7, log.T // 2, log.T)];"
        "print(JIT_ENABLED, log.T, *tot)"
    )
    outs = {}
    for flag in ("0", "1"):
        env = dict(os.environ, RESALLOC_DISABLE_JIT=flag)
        outs[flag] = subprocess.run([sys.executable, "-c", script], env=env, capture_output=True, text=True).stdout.split()
    assert outs["0"][0] == "True" and outs["1"][0] == "False"
    assert outs["0"][1:] == outs["1"][1:]
