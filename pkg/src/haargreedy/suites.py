"""Randomized verification suites shared by the test suite and the CLI.

Every suite draws its instances from independent PCG64 streams spawned from
one seed (stream i of a run is ``SeedSequence(seed).spawn(trials)[i]``),
evaluates a family of proved inequalities or exact identities, and reports
check counts, violations and observed-slack statistics.  A violation in any
suite indicates a real defect: each checked statement is a theorem, not a
conjecture.

Parallelism only distributes whole trials (and, inside the oracle, whole
fixed-composition solver batches) over threads, so results are bit-identical
for every ``jobs`` setting.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dyadic_grid import GridFunction, lp_norm
from .haar_basis import dictionary, orientations
from .transform import CoefficientTable, _basis, analyze, square_function
from .greedy import greedy_approximation, select_lambda_m
from .best_mterm import sigma_m
from .bounds import (
    burkholder_constants,
    check_layered_indicator_bound,
    check_normalized_sum_bound,
    check_projector_swap_bound,
    greedy_bound_constant,
    greedy_bound_constant_1d,
)
from .martingale import (
    build_filtration_1d,
    build_orientation_filtration,
    difference_sequence,
    multivariate_counterexample,
    verify_conditionally_symmetric,
)

__all__ = [
    "DEFAULT_TRIALS",
    "SUITES",
    "SuiteResult",
    "greedy_bound_1d_suite",
    "greedy_bound_multi_suite",
    "layered_indicator_suite",
    "martingale_suite",
    "normalized_sum_suite",
    "oracle_consistency_suite",
    "projector_swap_suite",
    "square_function_suite",
]

BOUND_SLACK = 1e-12


@dataclass
class SuiteResult:
    """Outcome of one suite run; ``ok`` means zero violations."""

    name: str
    trials: int
    checks: int
    violations: list
    stats: dict
    seed: int

    @property
    def ok(self) -> bool:
        return not self.violations


def _run_trials(fn, trials, seed, jobs):
    streams = np.random.SeedSequence(seed).spawn(trials)

    def one(i):
        return fn(i, np.random.default_rng(streams[i]))

    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=int(jobs)) as pool:
            return list(pool.map(one, range(trials)))
    return [one(i) for i in range(trials)]


def _random_function(rng, dim, level) -> GridFunction:
    return GridFunction(dim, level, rng.standard_normal(1 << (dim * level)))


# ---------------------------------------------------------------------------
# greedy error vs oracle error


def _greedy_bound_suite(name, dim, level, ps, ms, bound_for, trials, seed, tol, jobs):
    def one(i, rng):
        g = _random_function(rng, dim, level)
        records = []
        for p in ps:
            bound = bound_for(p)
            for m in ms:
                approx, _ = greedy_approximation(g, p, m)
                err = lp_norm(g - approx, p)
                sig = sigma_m(g, p, m, tol=tol).sigma
                holds = err <= bound * sig + BOUND_SLACK
                ratio = err / sig if sig > 0 else None
                records.append((p, m, err, sig, ratio, holds))
        return records

    results = _run_trials(one, trials, seed, jobs)
    violations = []
    max_ratio = {(p, m): 0.0 for p in ps for m in ms}
    for i, records in enumerate(results):
        for p, m, err, sig, ratio, holds in records:
            if not holds:
                violations.append({"trial": i, "p": p, "m": m,
                                   "greedy_error": err, "sigma_m": sig})
            if ratio is not None and ratio > max_ratio[(p, m)]:
                max_ratio[(p, m)] = ratio
    stats = {"max_ratio": [
        {"p": p, "d": dim, "m": m, "ratio": max_ratio[(p, m)]}
        for p in ps for m in ms]}
    return SuiteResult(name, trials, trials * len(ps) * len(ms),
                       violations, stats, seed)


def greedy_bound_1d_suite(trials=1000, seed=0, tol=1e-10, jobs=1) -> SuiteResult:
    """Greedy error <= univariate constant * oracle error, on random
    univariate level-3 functions at p in {1.5, 2, 3}, m in 1..4."""
    return _greedy_bound_suite(
        "theorem1", 1, 3, (1.5, 2.0, 3.0), (1, 2, 3, 4),
        greedy_bound_constant_1d, trials, seed, tol, jobs)


def greedy_bound_multi_suite(trials=50, seed=0, tol=1e-10, jobs=1) -> SuiteResult:
    """Greedy error <= planar constant * oracle error, on random level-2
    functions on the square at p in {1.5, 2}, m in 1..4."""
    return _greedy_bound_suite(
        "theorem2", 2, 2, (1.5, 2.0), (1, 2, 3, 4),
        lambda p: greedy_bound_constant(p, 2), trials, seed, tol, jobs)


# ---------------------------------------------------------------------------
# oracle self-consistency at p = 2


def oracle_consistency_suite(trials=500, seed=0, tol=1e-10, jobs=1) -> SuiteResult:
    """At p = 2 the oracle must match the orthonormal tail-sum closed form,
    and on tie-free instances the greedy support must equal the oracle's."""

    def one(i, rng):
        if i % 5 < 3:
            dim, level, max_m = 1, 3, 4
        else:
            dim, level, max_m = 2, 2, 3
        g = _random_function(rng, dim, level)
        m = int(rng.integers(0, max_m + 1))
        result = sigma_m(g, 2.0, m, tol=tol)
        c = analyze(g, 2.0).coefficients
        ranked = np.sort(np.abs(c))[::-1]
        closed_form = float(np.sqrt(np.sum(ranked[m:] ** 2)))
        value_err = abs(result.sigma - closed_form)
        gaps = np.diff(np.sort(np.abs(c)))
        tie_free = bool(gaps.size == 0 or gaps.min() > 1e-9)
        support_match = True
        if tie_free:
            support_match = (select_lambda_m(analyze(g, 2.0), m).atoms
                             == result.support.atoms)
        return value_err, tie_free, support_match, dim, m

    results = _run_trials(one, trials, seed, jobs)
    violations = []
    worst = 0.0
    n_tie_free = 0
    for i, (value_err, tie_free, support_match, dim, m) in enumerate(results):
        worst = max(worst, value_err)
        n_tie_free += tie_free
        if value_err > 1e-8:
            violations.append({"trial": i, "kind": "value", "d": dim, "m": m,
                               "error": value_err})
        if not support_match:
            violations.append({"trial": i, "kind": "support", "d": dim, "m": m})
    stats = {"max_value_error": worst, "tie_free_instances": n_tie_free}
    return SuiteResult("oracle-consistency", trials, 2 * trials,
                       violations, stats, seed)


# ---------------------------------------------------------------------------
# supporting inequalities


def layered_indicator_suite(trials=1000, seed=0, tol=1e-10, jobs=1) -> SuiteResult:
    """Random geometric-layering instances: integer scales of either sign,
    random cell sets, q in [0.5, 4], on lines and squares."""

    def one(i, rng):
        dim = 1 if i % 2 == 0 else 2
        level = int(rng.integers(1, 5 if dim == 1 else 3))
        count = int(rng.integers(1, 5))
        scales = np.sort(rng.choice(np.arange(-6, 9), size=count, replace=False))
        q = float(rng.uniform(0.5, 4.0))
        n_cells = 1 << (dim * level)
        sets = [GridFunction(dim, level, (rng.random(n_cells) < 0.5).astype(float))
                for _ in range(count)]
        check = check_layered_indicator_bound(scales, sets, q)
        ratio = check.lhs / check.rhs if check.rhs > 0 else None
        return check.holds, ratio, dim

    results = _run_trials(one, trials, seed, jobs)
    violations = []
    max_ratio = {1: 0.0, 2: 0.0}
    for i, (holds, ratio, dim) in enumerate(results):
        if not holds:
            violations.append({"trial": i, "d": dim})
        if ratio is not None and ratio > max_ratio[dim]:
            max_ratio[dim] = ratio
    stats = {"max_ratio": [{"d": d, "ratio": max_ratio[d]} for d in (1, 2)]}
    return SuiteResult("lemma1", trials, trials, violations, stats, seed)


def normalized_sum_suite(trials=1000, seed=0, tol=1e-10, jobs=1) -> SuiteResult:
    """Random admissible coefficient tables, both bound directions: weighted
    term norms drawn in [0,1] for the upper bound and in [1,3] for the lower."""

    def one(i, rng):
        dim = 1 if i % 2 == 0 else 2
        level = int(rng.integers(1, 5 if dim == 1 else 3))
        p = float(rng.uniform(1.0, 4.0))
        atoms = dictionary(dim, level)
        volumes = _basis(dim, level)[3]
        n = len(atoms)
        size = int(rng.integers(1, n + 1))
        chosen = np.sort(rng.choice(n, size=size, replace=False))
        records = []
        for direction, low, high in (("upper", 0.0, 1.0), ("lower", 1.0, 3.0)):
            magnitudes = rng.uniform(low, high, size)
            signs = rng.choice((-1.0, 1.0), size)
            c = np.zeros(n)
            c[chosen] = signs * magnitudes * volumes[chosen] ** (0.5 - 1.0 / p)
            table = CoefficientTable.from_coefficients(dim, level, c, p)
            support = tuple(atoms[j] for j in chosen)
            check = check_normalized_sum_bound(table, support, direction)
            ratio = (check.fnorm / check.bound if direction == "upper"
                     else check.bound / check.fnorm if check.fnorm > 0 else None)
            records.append((direction, check.holds, ratio, dim))
        return records

    results = _run_trials(one, trials, seed, jobs)
    violations = []
    max_ratio = {("upper", 1): 0.0, ("upper", 2): 0.0,
                 ("lower", 1): 0.0, ("lower", 2): 0.0}
    for i, records in enumerate(results):
        for direction, holds, ratio, dim in records:
            if not holds:
                violations.append({"trial": i, "direction": direction, "d": dim})
            if ratio is not None and ratio > max_ratio[(direction, dim)]:
                max_ratio[(direction, dim)] = ratio
    stats = {"max_ratio": [
        {"direction": direction, "d": d, "ratio": max_ratio[(direction, d)]}
        for direction in ("upper", "lower") for d in (1, 2)]}
    return SuiteResult("lemma23", trials, 2 * trials, violations, stats, seed)


def projector_swap_suite(trials=200, seed=0, tol=1e-10, jobs=1) -> SuiteResult:
    """Swap bound between oracle and greedy supports on random functions,
    with the oracle support computed exhaustively."""

    def one(i, rng):
        if i % 2 == 0:
            dim, level, max_m = 1, 3, 4
        else:
            dim, level, max_m = 2, 2, 3
        p = float(rng.choice((1.5, 2.0, 3.0)))
        m = int(rng.integers(1, max_m + 1))
        g = _random_function(rng, dim, level)
        check = check_projector_swap_bound(g, p, m, tol=tol)
        ratio = check.lhs / check.rhs if check.rhs > 0 else None
        return check.holds, ratio, dim, p, m

    results = _run_trials(one, trials, seed, jobs)
    violations = []
    max_ratio = {1: 0.0, 2: 0.0}
    identical = 0
    for i, (holds, ratio, dim, p, m) in enumerate(results):
        if not holds:
            violations.append({"trial": i, "d": dim, "p": p, "m": m})
        if ratio is None:
            identical += 1
        elif ratio > max_ratio[dim]:
            max_ratio[dim] = ratio
    stats = {"max_ratio": [{"d": d, "ratio": max_ratio[d]} for d in (1, 2)],
             "supports_identical": identical}
    return SuiteResult("lemma4", trials, trials, violations, stats, seed)


def square_function_suite(trials=1000, seed=0, tol=1e-10, jobs=1) -> SuiteResult:
    """Two-sided square-function inequality on random univariate functions at
    p in {1.5, 2, 3}; at p = 2 the two norms must agree to 1e-10."""

    ps = (1.5, 2.0, 3.0)

    def one(i, rng):
        level = int(rng.integers(1, 5))
        g = _random_function(rng, 1, level)
        s = square_function(g)
        records = []
        for p in ps:
            lower, upper = burkholder_constants(p)
            fnorm = lp_norm(g, p)
            snorm = lp_norm(s, p)
            ok = (lower * snorm <= fnorm + BOUND_SLACK
                  and fnorm <= upper * snorm + BOUND_SLACK)
            if p == 2.0:
                ok = ok and abs(fnorm - snorm) <= 1e-10
            records.append((p, fnorm, snorm, ok))
        return records

    results = _run_trials(one, trials, seed, jobs)
    violations = []
    max_upper = {p: 0.0 for p in ps}
    max_equality_gap = 0.0
    for i, records in enumerate(results):
        for p, fnorm, snorm, ok in records:
            if not ok:
                violations.append({"trial": i, "p": p,
                                   "fnorm": fnorm, "snorm": snorm})
            if snorm > 0:
                max_upper[p] = max(max_upper[p], fnorm / snorm)
            if p == 2.0:
                max_equality_gap = max(max_equality_gap, abs(fnorm - snorm))
    stats = {"max_norm_ratio": [{"p": p, "ratio": max_upper[p]} for p in ps],
             "max_p2_gap": max_equality_gap}
    return SuiteResult("littlewood-paley", trials, trials * len(ps),
                       violations, stats, seed)


def martingale_suite(trials=25, seed=0, tol=1e-10, jobs=1) -> SuiteResult:
    """Conditional symmetry of univariate series (levels 0..4) and of every
    fixed-orientation planar series (levels 1..3), on random coefficients;
    plus the exact mixed-orientation counterexample."""

    def one(i, rng):
        records = []
        for level in range(5):
            filtration = build_filtration_1d(level)
            seq = difference_sequence(
                filtration, rng.standard_normal(len(filtration.ordering)))
            report = verify_conditionally_symmetric(seq, filtration)
            records.append(("1d", level, None, report.passed, report.n_checks))
        for level in range(1, 4):
            for orientation in orientations(2):
                filtration = build_orientation_filtration(2, level, orientation)
                seq = difference_sequence(
                    filtration, rng.standard_normal(len(filtration.ordering)))
                report = verify_conditionally_symmetric(seq, filtration)
                records.append(("2d", level, orientation.bits,
                                report.passed, report.n_checks))
        return records

    results = _run_trials(one, trials, seed, jobs)
    violations = []
    checks = 0
    for i, records in enumerate(results):
        for kind, level, bits, passed, n_checks in records:
            checks += n_checks
            if not passed:
                violations.append({"trial": i, "series": kind, "level": level,
                                   "orientation": list(bits) if bits else None})

    counterexample = multivariate_counterexample()
    degenerate = [
        counterexample.conditionals["checker | bottom_top=+1, left_right=+1"],
        counterexample.conditionals["bottom_top | left_right=+1, checker=+1"],
        counterexample.conditionals["left_right | bottom_top=+1, checker=+1"],
    ]
    if any(value != 1.0 for value in degenerate):
        violations.append({"kind": "counterexample-conditionals",
                           "values": degenerate})
    if counterexample.violation_magnitude != 1.0:
        violations.append({"kind": "counterexample-magnitude",
                           "value": counterexample.violation_magnitude})
    checks += 2
    stats = {"counterexample_conditionals": dict(counterexample.conditionals),
             "counterexample_step": counterexample.violation_step,
             "counterexample_magnitude": counterexample.violation_magnitude}
    return SuiteResult("martingale", trials, checks, violations, stats, seed)


SUITES = {
    "lemma1": layered_indicator_suite,
    "lemma23": normalized_sum_suite,
    "lemma4": projector_swap_suite,
    "littlewood-paley": square_function_suite,
    "martingale": martingale_suite,
    "theorem1": greedy_bound_1d_suite,
    "theorem2": greedy_bound_multi_suite,
    "oracle-consistency": oracle_consistency_suite,
}

DEFAULT_TRIALS = {
    "lemma1": 1000,
    "lemma23": 1000,
    "lemma4": 200,
    "littlewood-paley": 1000,
    "martingale": 25,
    "theorem1": 1000,
    "theorem2": 50,
    "oracle-consistency": 500,
}
