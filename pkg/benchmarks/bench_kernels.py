"""Time the swap-automaton kernels with numba on and off.

Each mode runs in a fresh interpreter because RESALLOC_DISABLE_JIT is read at
import time.  Usage: python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, random, sys, time
import numpy as np
from resalloc import automata
from resalloc._jit import JIT_ENABLED

repeat = int(sys.argv[1])

def best(fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)

automata.warm_up()
rng = np.random.default_rng(0)
state = "".join(rng.choice(["0", "1"], 2 * 10**5))
log = automata.swap_build_log(state)
nz = state.count("0")
qr = random.Random(1)
queries = [(qr.randrange(nz), qr.randint(0, log.T)) for _ in range(1000)]

out = {
    "jit": JIT_ENABLED,
    "swap build n=2e5": best(lambda: automata.swap_build_log(state)),
    "swap 1e3 queries n=2e5": best(lambda: [automata.swap_position(log, i, m) for i, m in queries]),
}
print(json.dumps(out))
"""


def run(disable: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if disable:
        env["RESALLOC_DISABLE_JIT"] = "1"
    else:
        env.pop("RESALLOC_DISABLE_JIT", None)
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, str(repeat)], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(proc.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast, slow = run(False, args.repeat), run(True, args.repeat)
    keys = [k for k in fast if k != "jit"]
    print(f"{'kernel':<26}{'numba (s)':>12}{'numpy (s)':>12}{'speedup':>10}")
    for k in keys:
        print(f"{k:<26}{fast[k]:>12.4f}{slow[k]:>12.4f}{slow[k] / max(fast[k], 1e-9):>9.1f}x")


if __name__ == "__main__":
    main()
