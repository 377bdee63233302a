import json
import subprocess
import sys

import pytest

from resalloc.cli import generate_envelope, main, oracle_diff, solve_envelope
from resalloc.problems import PROBLEMS
from resalloc.prng import SplitMix64


def run(argv, stdin=""):
    proc = subprocess.run(
        [sys.executable, "-m", "resalloc.cli", *argv], input=stdin, capture_output=True, text=True, timeout=120
    )
    return proc.returncode, proc.stdout


def run_inproc(argv, capsys, monkeypatch, stdin=""):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    return code, capsys.readouterr().out


def test_splitmix_reference_values():
    # first outputs for seed 1234567 of the reference generator
    g = SplitMix64(1234567)
    assert [g.next() for _ in range(3)] == [6457827717110365317, 3203168211198807973, 9817491932198370423]


def test_star_plan_validates(capsys, monkeypatch):
    env = {"problem": "tree-storage", "payload": {"parents": [-1, 0, 0, 0], "costs": [1, 1, 1, 1], "D": 2}}
    code, out = run_inproc(["solve", "--validate"], capsys, monkeypatch, json.dumps(env))
    res = json.loads(out)
    assert code == 0 and res["value"] == 1 and res["validation"] == "pass"


def test_identity_automaton_echoes_state():
    env = {"problem": "automaton", "payload": {"kind": "linear", "state": "1011", "coeffs": [0, 1, 0], "m": 99}}
    assert solve_envelope(env)["value"] == "1011"


def test_unsolvable_gather_reports_reason():
    env = {"problem": "gather", "payload": {"r": [2, 1, 0, 0]}}
    res = solve_envelope(env)
    assert res["value"] is None and res["reason"] == "unsolvable"
    assert solve_envelope(env, oracle=True)["value"] is None


def test_schema_error_exits_2():
    code, out = run(["solve"], '{"problem": "nope"}')
    assert code == 2 and json.loads(out)["error"]["kind"] == "schema"
    code, _ = run(["solve"], "not json")
    assert code == 2


def test_oracle_cap_exits_3():
    env = {"problem": "push", "payload": {"board": "R" + "." * 30, "W": 1, "P": 1, "J": 1, "K": 2}}
    code, out = run(["solve", "--oracle"], json.dumps(env))
    assert code == 3 and json.loads(out)["error"]["kind"] == "resource-limit"


def test_generate_is_byte_identical():
    argv = ["generate", "--problem", "collector", "--seed", "7", "--size", "N=5", "--size", "M=10"]
    a, b = run(argv), run(argv)
    assert a[0] == 0 and a[1] == b[1]
    assert json.loads(a[1]) == generate_envelope("collector", 7, {"N": "5", "M": "10"})


def test_generated_push_board_shape():
    board = generate_envelope("push", 1, {"N": "10"})["payload"]["board"]
    assert len(board) == 10 and board[0] == "R" and board[-1] == "."


@pytest.mark.parametrize("name", sorted(PROBLEMS))
def test_oracle_diff_small(name):
    summary = oracle_diff(name, 25, 99, {})
    assert summary["mismatches"] == summary["validation_failures"] == summary["errors"] == 0


def test_oracle_diff_command(capsys, monkeypatch):
    code, out = run_inproc(["oracle-diff", "--problem", "debt", "--count", "10", "--seed", "3"], capsys, monkeypatch)
    assert code == 0 and json.loads(out)["count"] == 10
