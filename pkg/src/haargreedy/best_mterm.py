"""Exhaustive best m-term approximation in L^p over the Haar dictionary.

For every size-m subset of the dictionary the coefficients are optimized by
minimizing the strictly convex objective  F(a) = integral |g - sum_i a_i h_i|^p
with a damped Newton descent direction under an Armijo backtracking line
search (for p < 2, after a short smoothing continuation that carries the
iterate past the points where the curvature weight degenerates); the
smallest optimized value over all subsets is the best m-term error.  The enumeration is the trusted reference that the greedy error bound
is checked against, so no pruning shortcuts are taken.

Determinism: subsets are enumerated in lexicographic index order and solved
in fixed-size batches whose composition never depends on the thread count,
and the global minimum is reduced by (value, support) lexicographic order.
Parallel runs are therefore bit-identical to serial ones.
"""

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import inf

import numpy as np

from .dyadic_grid import GridFunction
from .greedy import Support
from .transform import _basis

__all__ = [
    "BestMTermResult",
    "ConvergenceError",
    "optimize_coefficients",
    "sigma_m",
]

# Supports per solver batch.  Fixed so that the batch composition, and hence
# every floating-point result, is independent of the jobs setting.
CHUNK = 512

_ARMIJO = 1e-4
_MAX_HALVINGS = 60
# Once the predicted Armijo decrease falls below the floating-point
# resolution of the objective the sufficient-decrease test is meaningless,
# so steps that tiny are accepted outright; this is what lets the final
# Newton steps drive the gradient to its rounding floor.
_FTOL_FLOOR = 1e-15
# For p < 2 an optimum can interpolate some cells exactly (the residual is
# truly zero there, where |r|^(p-1) has zero slope but unbounded second
# derivative).  A computed residual at rounding level then carries a phantom
# gradient of order noise^(p-1), far above any achievable tolerance, so for
# the convergence test alone such residuals count as the exact zeros they
# represent.  Objective values always use the raw residuals.
_RESIDUAL_SNAP = 1e-13


class ConvergenceError(RuntimeError):
    """Inner coefficient optimization failed to meet its optimality tolerance."""


@dataclass
class BestMTermResult:
    """Best m-term error with its minimizing support and coefficients.

    ``sigma`` is the residual L^p norm; ``iterations`` counts solver passes
    and is purely diagnostic."""

    sigma: float
    support: Support
    coefficients: np.ndarray
    iterations: int


def _solve_batch(A, v, vol, p, tol, max_iter, x0=None):
    """Minimize  vol * sum_cells |v - A_s a_s|^p  for every support s at once.

    A has shape (batch, cells, m) with the selected atom columns.  Starts at
    the L^2 projection (exact for p = 2 since columns are orthonormal under
    the vol-weighted inner product) and runs damped Newton steps with Armijo
    backtracking until the first-order condition
    max|grad| <= tol * max(1, objective)  holds, with residuals at rounding
    level counted as exact zeros in the test gradient (see _RESIDUAL_SNAP).

    For p < 2 the curvature weight |r|^(p-2) blows up whenever an iterate
    drives a residual through zero, which can freeze the step size, so the
    exact solve is preceded by a continuation over smoothed objectives
    vol * sum (r^2 + eps^2)^(p/2)  with eps shrinking to zero; each stage
    warm-starts the next and convergence is always judged by the exact
    gradient.  Returns (coefficients, objective values, iterations); raises
    ConvergenceError instead of returning a point that misses the tolerance.
    """
    n_batch, n_cells, m = A.shape
    if m == 0:
        value = float(vol * np.sum(np.abs(v) ** p))
        return np.zeros((n_batch, 0)), np.full(n_batch, value), 0

    if x0 is None:
        a = vol * np.einsum("snm,n->sm", A, v)
    else:
        a = np.array(x0, dtype=float).reshape(n_batch, m)

    objective = np.empty(n_batch)
    done = np.zeros(n_batch, dtype=bool)
    iterations = 0
    scale = max(1.0, float(np.max(np.abs(v))))
    if p < 2.0:
        eps_levels = [scale * 10.0 ** (-k) for k in (2, 5, 8, 11)] + [0.0]
    else:
        eps_levels = [0.0]

    for stage, eps in enumerate(eps_levels):
        final = stage == len(eps_levels) - 1
        budget = max_iter if final else 50
        stage_done = done.copy()
        for _ in range(budget):
            act = np.flatnonzero(~stage_done)
            if act.size == 0:
                break
            A_act = A[act]
            r = v - np.einsum("snm,sm->sn", A_act, a[act])
            absr = np.abs(r)
            F = vol * np.sum(absr ** p, axis=1)
            objective[act] = F
            score = np.where(absr > _RESIDUAL_SNAP * scale,
                             np.sign(r) * absr ** (p - 1.0), 0.0)
            g_check = -p * vol * np.einsum("snm,sn->sm", A_act, score)
            converged = np.max(np.abs(g_check), axis=1) <= tol * np.maximum(1.0, F)
            if converged.any():
                done[act[converged]] = True
                stage_done[act[converged]] = True
                if done.all():
                    return a, objective, iterations
                keep = ~converged
                act, A_act = act[keep], A_act[keep]
                r, absr, F = r[keep], absr[keep], F[keep]
                if act.size == 0:
                    break

            if eps > 0.0:
                r2 = r * r + eps * eps
                F_s = vol * np.sum(r2 ** (p / 2.0), axis=1)
                grad = -p * vol * np.einsum(
                    "snm,sn->sm", A_act, r * r2 ** (p / 2.0 - 1.0))
                hw = r2 ** (p / 2.0 - 2.0) * ((p - 1.0) * r * r + eps * eps)
                # No point iterating further at this smoothing level once the
                # smoothed problem is solved to the same relative tolerance.
                settled = (np.max(np.abs(grad), axis=1)
                           <= 0.5 * tol * np.maximum(1.0, F_s))
                if settled.any():
                    stage_done[act[settled]] = True
                    keep = ~settled
                    act, A_act = act[keep], A_act[keep]
                    r, F_s, grad, hw = r[keep], F_s[keep], grad[keep], hw[keep]
                    if act.size == 0:
                        break
            else:
                F_s = F
                grad = -p * vol * np.einsum(
                    "snm,sn->sm", A_act, np.sign(r) * absr ** (p - 1.0))
                hw = (p - 1.0) * np.maximum(absr, 1e-14 * scale) ** (p - 2.0)

            # PSD Hessian of the (smoothed) objective plus a small relative
            # ridge, so the Newton direction is a guaranteed descent direction.
            H = p * vol * np.einsum("sni,sn,snj->sij", A_act, hw, A_act)
            diag = np.einsum("sii->si", H)
            diag += (1e-10 * np.maximum(1.0, diag.max(axis=1)))[:, None]
            step = np.linalg.solve(H, -grad[..., None])[..., 0]
            slope = np.sum(grad * step, axis=1)

            a_act = a[act]
            t = np.ones(act.size)
            accepted = np.zeros(act.size, dtype=bool)
            floor = _FTOL_FLOOR * np.maximum(1.0, np.abs(F_s))
            for _ in range(_MAX_HALVINGS):
                a_try = a_act + t[:, None] * step
                r_try = v - np.einsum("snm,sm->sn", A_act, a_try)
                if eps > 0.0:
                    F_try = vol * np.sum(
                        (r_try * r_try + eps * eps) ** (p / 2.0), axis=1)
                else:
                    F_try = vol * np.sum(np.abs(r_try) ** p, axis=1)
                accepted |= F_try <= F_s + _ARMIJO * t * slope
                accepted |= _ARMIJO * t * np.abs(slope) <= floor
                if accepted.all():
                    break
                t[~accepted] *= 0.5
            iterations += 1
            if not accepted.all():
                if final:
                    raise ConvergenceError(
                        "line search stalled before reaching the optimality "
                        f"tolerance (p={p}, tol={tol})")
                stage_done[act[~accepted]] = True
            moved = act[accepted]
            a[moved] = a_act[accepted] + t[accepted, None] * step[accepted]
        else:
            if final:
                raise ConvergenceError(
                    f"no convergence within {max_iter} iterations "
                    f"(p={p}, tol={tol})")

    return a, objective, iterations


def _validate_p(p) -> float:
    p = float(p)
    if not 1.0 < p < inf:
        raise ValueError("p must lie in (1, inf)")
    return p


def optimize_coefficients(g: GridFunction, support, p, tol=1e-10,
                          x0=None, max_iter=10000):
    """Optimal coefficients for g on a fixed support in L^p.

    Returns (coefficients, residual norm) where the coefficients minimize
    ||g - sum a_i h_i||_p over the atoms of ``support`` (a Support or any
    iterable of dictionary atoms).  The returned point satisfies the
    first-order condition  max|grad F| <= tol * max(1, F)  for the p-th power
    objective F; anything less raises ConvergenceError.  ``x0`` overrides the
    default L^2-projection start, which restart tests use.
    """
    p = _validate_p(p)
    if not tol > 0:
        raise ValueError("tol must be positive")
    atoms = support.atoms if isinstance(support, Support) else tuple(support)
    _, mat, positions, _ = _basis(g.dim, g.level)
    idx = []
    for atom in atoms:
        if atom not in positions:
            raise ValueError("atom is not in the grid's dictionary")
        idx.append(positions[atom])
    if len(set(idx)) != len(idx):
        raise ValueError("support contains duplicate atoms")
    if idx:
        A = mat[np.array(idx, dtype=np.intp)].T[None, :, :]
    else:
        A = np.zeros((1, g.n_cells, 0))
    start = None if x0 is None else np.asarray(x0, dtype=float)[None, :]
    a, F, _ = _solve_batch(A, g.values, g.cell_volume, p, tol, max_iter, x0=start)
    return a[0].copy(), float(F[0]) ** (1.0 / p)


def sigma_m(g: GridFunction, p, m: int, tol=1e-10, jobs=1,
            max_iter=10000) -> BestMTermResult:
    """Best m-term error of g in L^p by exhaustive support enumeration.

    Every one of the C(N, m) supports is optimized independently; the
    reported minimum is the (value, support) lexicographically smallest, so
    ties resolve to the earliest support in dictionary order regardless of
    execution order.  ``jobs`` spreads the fixed solver batches over that
    many threads without changing any batch, keeping results bit-identical
    to the serial run.
    """
    p = _validate_p(p)
    if not tol > 0:
        raise ValueError("tol must be positive")
    atoms, mat, _, _ = _basis(g.dim, g.level)
    n = len(atoms)
    if m < 0 or m > n:
        raise ValueError(f"m must lie in [0, {n}]")

    supports = list(itertools.combinations(range(n), m))
    chunks = [supports[i:i + CHUNK] for i in range(0, len(supports), CHUNK)]
    v = g.values
    vol = g.cell_volume

    def solve(chunk):
        if m:
            A = mat[np.array(chunk, dtype=np.intp)].transpose(0, 2, 1)
        else:
            A = np.zeros((len(chunk), v.size, 0))
        return _solve_batch(A, v, vol, p, tol, max_iter)

    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=int(jobs)) as pool:
            solved = list(pool.map(solve, chunks))
    else:
        solved = [solve(chunk) for chunk in chunks]

    best_value = inf
    best_support = None
    best_coeffs = None
    iterations = 0
    for chunk, (a, F, iters) in zip(chunks, solved):
        iterations += iters
        i = int(np.argmin(F))
        if F[i] < best_value or (F[i] == best_value and chunk[i] < best_support):
            best_value = float(F[i])
            best_support = chunk[i]
            best_coeffs = a[i].copy()
    return BestMTermResult(
        sigma=best_value ** (1.0 / p),
        support=Support(tuple(atoms[i] for i in best_support)),
        coefficients=best_coeffs,
        iterations=iterations,
    )
