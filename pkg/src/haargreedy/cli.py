"""Command line front end.

Two modes:

* approximation (default): load or generate a function on a dyadic grid,
  run the greedy selector, optionally run the exhaustive best-m-term oracle,
  and print one JSON document on stdout.
* ``--suite NAME``: run one of the randomized verification suites and print
  its report as JSON.

stdout carries exactly the JSON document and nothing else; progress and
timing chatter goes to stderr.  Floats are printed with 17 significant
digits, so a rerun with identical arguments produces byte-identical output
regardless of ``--jobs``.

Exit codes: 0 success (suite passed / approximation computed), 1 suite ran
but found violations, 2 malformed input or bad arguments, 3 problem too
large for the exhaustive oracle (pass --no-oracle), 4 oracle solver failed
to converge.
"""

import argparse
import json
import math
import sys
import time

import numpy as np

from .dyadic_grid import GridFunction, lp_norm
from .transform import analyze, partial_sum
from .greedy import select_lambda_m
from .best_mterm import ConvergenceError, sigma_m
from .bounds import greedy_bound_constant, greedy_bound_constant_1d
from .suites import DEFAULT_TRIALS, SUITES

__all__ = ["main"]

# Exhaustive oracle enumerates C(N, m) supports; keep that small by default.
ORACLE_MAX_CELLS = 16
ORACLE_MAX_TERMS = 5

BOUND_SLACK = 1e-12


class UsageError(Exception):
    """Bad arguments or malformed input; maps to exit code 2."""


class OracleCapError(Exception):
    """Instance too large for the exhaustive oracle; maps to exit code 3."""


# ---------------------------------------------------------------------------
# deterministic JSON output


def _json(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if not math.isfinite(x):
            raise ValueError("non-finite number in output document")
        return format(x, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, np.ndarray):
        return _json(value.tolist())
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_json(item) for item in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(
            json.dumps(str(key)) + ": " + _json(item)
            for key, item in value.items()) + "}"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _emit(doc) -> None:
    sys.stdout.write(_json(doc) + "\n")


def _atom_doc(atom) -> dict:
    if atom.is_constant:
        return {"kind": "constant"}
    return {"kind": "wavelet", "level": atom.level,
            "index": list(atom.cube.index),
            "orientation": list(atom.orientation.bits)}


# ---------------------------------------------------------------------------
# input loading


def _parse_index(value, name, minimum):
    if isinstance(value, bool) or not isinstance(value, int):
        raise UsageError(f"'{name}' must be an integer")
    if value < minimum:
        raise UsageError(f"'{name}' must be >= {minimum}")
    return value


def _load_json(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise UsageError(f"{path}: expected a JSON object")
    extra = set(doc) - {"d", "J", "values"}
    if extra:
        raise UsageError(f"{path}: unknown keys {sorted(extra)}")
    for key in ("d", "J", "values"):
        if key not in doc:
            raise UsageError(f"{path}: missing key '{key}'")
    dim = _parse_index(doc["d"], "d", 1)
    level = _parse_index(doc["J"], "J", 0)
    raw = doc["values"]
    if not isinstance(raw, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw):
        raise UsageError(f"{path}: 'values' must be a list of numbers")
    values = np.asarray(raw, dtype=float)
    if values.size != 1 << (dim * level):
        raise UsageError(
            f"{path}: expected {1 << (dim * level)} values for d={dim}, "
            f"J={level}, got {values.size}")
    if not np.isfinite(values).all():
        raise UsageError(f"{path}: values must be finite")
    return GridFunction(dim, level, values), f"file:{path}"


def _load_csv(path, dim):
    try:
        with open(path) as fh:
            lines = [line.strip() for line in fh]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    fields = [line for line in lines if line]
    try:
        values = np.asarray([float(f) for f in fields], dtype=float)
    except ValueError:
        raise UsageError(f"{path}: every line must hold one number") from None
    if values.size == 0 or not np.isfinite(values).all():
        raise UsageError(f"{path}: values must be nonempty and finite")
    level_bits = values.size.bit_length() - 1
    if values.size != 1 << level_bits or level_bits % dim != 0:
        raise UsageError(
            f"{path}: {values.size} values do not fill a dyadic grid "
            f"of dimension {dim}")
    return GridFunction(dim, level_bits // dim, values), f"file:{path}"


def _load_input(args):
    if args.input is None:
        size = 1 << (args.d * args.J)
        rng = np.random.default_rng(np.random.SeedSequence(args.seed))
        values = rng.standard_normal(size)
        return (GridFunction(args.d, args.J, values),
                f"generated:seed={args.seed}")
    if args.input.endswith(".csv"):
        return _load_csv(args.input, args.d)
    return _load_json(args.input)


# ---------------------------------------------------------------------------
# modes


def _run_approx(args) -> int:
    g, source = _load_input(args)
    dim, level = g.dim, g.level
    if not args.p > 1.0:
        raise UsageError("--p must exceed 1")
    if args.m < 0 or args.m > g.n_cells:
        raise UsageError(f"--m must lie in 0..{g.n_cells} for this input")

    start = time.perf_counter()
    table = analyze(g, args.p)
    support = select_lambda_m(table, args.m)
    err = lp_norm(g - partial_sum(table, support.atoms), args.p)
    print(f"greedy: {time.perf_counter() - start:.3f}s", file=sys.stderr)

    if dim == 1:
        bound = greedy_bound_constant_1d(args.p)
    elif args.p <= 2.0:
        bound = greedy_bound_constant(args.p, dim)
    else:
        bound = None

    doc = {
        "schema": 1,
        "input": {"d": dim, "J": level, "source": source},
        "p": args.p,
        "m": args.m,
        "greedy_error": err,
        "bound_constant": bound,
    }

    if not args.no_oracle:
        if g.n_cells > ORACLE_MAX_CELLS or args.m > ORACLE_MAX_TERMS:
            raise OracleCapError(
                f"exhaustive oracle capped at {ORACLE_MAX_CELLS} cells and "
                f"m <= {ORACLE_MAX_TERMS} (got {g.n_cells} cells, "
                f"m={args.m}); pass --no-oracle to skip it")
        start = time.perf_counter()
        oracle = sigma_m(g, args.p, args.m, tol=args.tol, jobs=args.jobs)
        print(f"oracle: {time.perf_counter() - start:.3f}s, "
              f"{oracle.iterations} solver iterations", file=sys.stderr)
        doc["sigma_m"] = oracle.sigma
        if oracle.sigma > 0.0:
            doc["ratio"] = err / oracle.sigma
        doc["holds"] = (None if bound is None
                        else bool(err <= bound * oracle.sigma + BOUND_SLACK))
        doc["selected_support"] = [_atom_doc(a) for a in support.atoms]
        doc["oracle_support"] = [_atom_doc(a) for a in oracle.support.atoms]
    else:
        doc["selected_support"] = [_atom_doc(a) for a in support.atoms]

    _emit(doc)
    return 0


def _run_suite(args) -> int:
    name = args.suite
    trials = args.trials if args.trials is not None else DEFAULT_TRIALS[name]
    if trials < 0:
        raise UsageError("--trials must be >= 0")
    start = time.perf_counter()
    result = SUITES[name](trials=trials, seed=args.seed, tol=args.tol,
                          jobs=args.jobs)
    print(f"suite {name}: {time.perf_counter() - start:.3f}s",
          file=sys.stderr)
    _emit({
        "schema": 1,
        "suite": name,
        "trials": result.trials,
        "seed": result.seed,
        "checks": result.checks,
        "violations": result.violations,
        "ok": result.ok,
        "stats": result.stats,
    })
    return 0 if result.ok else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="haar-greedy",
        description="Greedy m-term Haar approximation in L^p on the unit "
                    "cube, with an exhaustive best-m-term oracle and "
                    "randomized verification suites.")
    parser.add_argument("--p", type=float, default=2.0,
                        help="Lebesgue exponent, must exceed 1 (default 2)")
    parser.add_argument("--m", type=int, default=1,
                        help="number of terms to keep (default 1)")
    parser.add_argument("--input", metavar="PATH",
                        help="input function: JSON {\"d\",\"J\",\"values\"} "
                             "or CSV with one value per line (d taken from "
                             "--d, level from the line count)")
    parser.add_argument("--d", type=int, default=1,
                        help="dimension when generating input or reading CSV "
                             "(default 1)")
    parser.add_argument("--J", type=int, default=2,
                        help="dyadic resolution level when generating input "
                             "(default 2)")
    parser.add_argument("--no-oracle", action="store_true",
                        help="skip the exhaustive best-m-term oracle")
    parser.add_argument("--suite", choices=sorted(SUITES), metavar="NAME",
                        help="run a verification suite instead: one of "
                             + ", ".join(sorted(SUITES)))
    parser.add_argument("--trials", type=int,
                        help="trial count for --suite (defaults per suite)")
    parser.add_argument("--seed", type=int, default=0,
                        help="root seed for generated input and suites "
                             "(default 0)")
    parser.add_argument("--tol", type=float, default=1e-10,
                        help="oracle solver gradient tolerance (default 1e-10)")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker threads; any value gives bit-identical "
                             "output (default 1)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.d < 1:
            raise UsageError("--d must be >= 1")
        if args.J < 0:
            raise UsageError("--J must be >= 0")
        if args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if not args.tol > 0.0:
            raise UsageError("--tol must be positive")
        if args.suite is not None:
            return _run_suite(args)
        return _run_approx(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OracleCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"error: oracle solver did not converge: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
