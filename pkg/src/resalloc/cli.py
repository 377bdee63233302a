"""``resalloc`` command line: solve, generate and oracle-diff over JSON envelopes.

Exit codes: 0 success (including a null value for an infeasible instance),
1 mismatch or failed validation, 2 malformed input, 3 a size or resource cap
was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .errors import InstanceError, ResourceLimitError
from .prng import SplitMix64
from .problems import PROBLEMS, Outcome

EXIT_OK, EXIT_MISMATCH, EXIT_SCHEMA, EXIT_CAP = 0, 1, 2, 3


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code, self.kind, self.message = code, kind, message


def _problem(name):
    if name not in PROBLEMS:
        raise CliError(EXIT_SCHEMA, "schema", f"unknown problem {name!r}; expected one of {sorted(PROBLEMS)}")
    return PROBLEMS[name]


def _jsonable(value):
    if isinstance(value, float) and value != value:
        return None
    return value


def solve_envelope(env: dict, oracle=None, validate=None, tol=None) -> dict:
    """Solve one problem envelope; raises :class:`CliError` for bad input or exceeded caps."""
    if not isinstance(env, dict) or "problem" not in env or "payload" not in env:
        raise CliError(EXIT_SCHEMA, "schema", "envelope needs 'problem' and 'payload'")
    prob = _problem(env["problem"])
    opts = dict(env.get("options") or {})
    if not isinstance(env["payload"], dict):
        raise CliError(EXIT_SCHEMA, "schema", "payload must be a JSON object")
    for key, val in (("oracle", oracle), ("validate", validate), ("tol", tol)):
        if val is not None:
            opts[key] = val
    start = time.perf_counter()
    try:
        inst = prob.parse(env["payload"])
        if opts.get("oracle"):
            out = Outcome(prob.oracle(inst, opts))
            if out.value is None:
                out.reason = "infeasible according to the oracle"
        else:
            out = prob.solve(inst, opts)
        status = "skipped"
        if opts.get("validate") and out.certificate is not None and prob.validate is not None:
            msg = prob.validate(inst, out, opts)
            status = "pass" if msg is None else "fail"
    except InstanceError as exc:
        raise CliError(EXIT_SCHEMA, "schema", str(exc)) from exc
    except ResourceLimitError as exc:
        raise CliError(EXIT_CAP, "resource-limit", str(exc)) from exc
    result = {
        "problem": prob.name,
        "value": _jsonable(out.value),
        "certificate": out.certificate,
        "validation": status,
        "wall_time_ms": round((time.perf_counter() - start) * 1000, 3),
    }
    if out.reason is not None:
        result["reason"] = out.reason
    if status == "fail":
        result["validation_error"] = msg
    return result


def parse_size(items) -> dict:
    size = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise CliError(EXIT_SCHEMA, "schema", f"--size expects key=value, got {item!r}")
        try:
            size[key] = int(val)
        except ValueError:
            try:
                size[key] = float(val)
            except ValueError:
                size[key] = val
    return size


def generate_envelope(problem: str, seed: int, size: dict | None = None) -> dict:
    prob = _problem(problem)
    payload = prob.generate(SplitMix64(seed), dict(size or {}))
    return {"problem": prob.name, "payload": payload, "options": {"seed": seed}}


def oracle_diff(problem: str, count: int, seed: int, size: dict | None = None, log=None) -> dict:
    """Compare library and oracle on ``count`` generated instances; also validate certificates."""
    prob = _problem(problem)
    seeds = SplitMix64(seed)
    summary = {"problem": prob.name, "count": count, "mismatches": 0, "validation_failures": 0, "errors": 0}
    for k in range(count):
        s = seeds.next()
        env = generate_envelope(prob.name, s, size)
        try:
            fast = solve_envelope(env, oracle=False, validate=True)
            slow = solve_envelope(env, oracle=True)
        except CliError as exc:
            summary["errors"] += 1
            if log:
                log(dumps({"index": k, "seed": s, "error": exc.message}))
            continue
        inst = prob.parse(env["payload"])
        opts = env.get("options", {})
        if not prob.same(inst, fast["value"], slow["value"], opts):
            summary["mismatches"] += 1
            if log:
                log(dumps({"index": k, "seed": s, "library": fast["value"], "oracle": slow["value"]}))
        if fast["validation"] == "fail":
            summary["validation_failures"] += 1
            if log:
                log(dumps({"index": k, "seed": s, "validation_error": fast.get("validation_error")}))
    return summary


def _cmd_solve(args) -> int:
    raw = sys.stdin.read()
    try:
        env = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_SCHEMA, "schema", f"invalid JSON: {exc}") from exc
    result = solve_envelope(env, oracle=args.oracle or None, validate=args.validate or None, tol=args.tol)
    print(dumps(result))
    return EXIT_MISMATCH if result["validation"] == "fail" else EXIT_OK


def _cmd_generate(args) -> int:
    print(dumps(generate_envelope(args.problem, args.seed, parse_size(args.size))))
    return EXIT_OK


def _cmd_oracle_diff(args) -> int:
    names = sorted(PROBLEMS) if args.problem == "all" else [args.problem]
    bad = False
    for name in names:
        summary = oracle_diff(name, args.count, args.seed, parse_size(args.size), log=lambda s: print(s, file=sys.stderr))
        print(dumps(summary))
        bad |= bool(summary["mismatches"] or summary["validation_failures"] or summary["errors"])
    return EXIT_MISMATCH if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="resalloc", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve an envelope read from stdin")
    sp.add_argument("--oracle", action="store_true", help="use the brute-force oracle instead of the solver")
    sp.add_argument("--validate", action="store_true", help="replay the certificate before printing")
    sp.add_argument("--tol", type=float, default=None, help="tolerance for real-valued searches")
    sp.set_defaults(func=_cmd_solve)

    gp = sub.add_parser("generate", help="print a seeded random instance")
    gp.add_argument("--problem", required=True)
    gp.add_argument("--seed", type=int, required=True)
    gp.add_argument("--size", action="append", metavar="KEY=VALUE", help="size parameter, repeatable")
    gp.set_defaults(func=_cmd_generate)

    op = sub.add_parser("oracle-diff", help="compare solver and oracle on generated instances")
    op.add_argument("--problem", required=True, help="problem name or 'all'")
    op.add_argument("--count", type=int, default=100)
    op.add_argument("--seed", type=int, default=0)
    op.add_argument("--size", action="append", metavar="KEY=VALUE")
    op.set_defaults(func=_cmd_oracle_diff)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(dumps({"error": {"kind": exc.kind, "message": exc.message}}))
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
