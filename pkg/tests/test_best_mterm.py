"""Exhaustive best m-term oracle and its inner convex solver."""

import math

import numpy as np
import pytest

from haargreedy import (
    GridFunction,
    dictionary,
    evaluate_atom,
    lp_norm,
    optimize_coefficients,
    refine,
    sigma_m,
)
from haargreedy.best_mterm import ConvergenceError
from haargreedy.transform import _basis


def f4211():
    return GridFunction(1, 2, [4.0, 2.0, 1.0, 1.0])


def objective(A, v, vol, p, a):
    r = v - A @ a
    return float(vol * np.sum(np.abs(r) ** p))


def gradient(A, v, vol, p, a):
    r = v - A @ a
    return -p * vol * (A.T @ (np.sign(r) * np.abs(r) ** (p - 1.0)))


class TestSigmaM:
    def test_l2_hand_example(self):
        result = sigma_m(f4211(), 2.0, 2)
        assert result.sigma == pytest.approx(math.sqrt(2.0) / 2, rel=1e-10)
        assert result.support.atoms == dictionary(1, 2)[:2]

    def test_endpoints(self):
        g = f4211()
        for p in (1.5, 2.0, 3.0):
            assert sigma_m(g, p, 0).sigma == pytest.approx(lp_norm(g, p), rel=1e-12)
            assert sigma_m(g, p, 4).sigma < 1e-9

    def test_nonincreasing_in_m(self):
        rng = np.random.default_rng(14)
        g = GridFunction(1, 2, rng.standard_normal(4))
        for p in (1.5, 2.5):
            sigmas = [sigma_m(g, p, m).sigma for m in range(5)]
            assert all(a >= b - 1e-9 for a, b in zip(sigmas, sigmas[1:]))

    def test_l2_matches_tail_sum(self):
        from haargreedy import analyze

        rng = np.random.default_rng(15)
        for i in range(20):
            if i % 2 == 0:
                g = GridFunction(1, 3, rng.standard_normal(8))
                m = int(rng.integers(0, 5))
            else:
                g = GridFunction(2, 2, rng.standard_normal(16))
                m = int(rng.integers(0, 4))
            ranked = np.sort(np.abs(analyze(g).coefficients))[::-1]
            closed = math.sqrt(float(np.sum(ranked[m:] ** 2)))
            assert sigma_m(g, 2.0, m).sigma == pytest.approx(closed, abs=1e-8)

    def test_jobs_do_not_change_results(self):
        rng = np.random.default_rng(16)
        g = GridFunction(2, 2, rng.standard_normal(16))
        serial = sigma_m(g, 1.5, 3, jobs=1)
        threaded = sigma_m(g, 1.5, 3, jobs=3)
        assert serial.sigma == threaded.sigma
        assert serial.support.atoms == threaded.support.atoms
        assert np.array_equal(serial.coefficients, threaded.coefficients)

    def test_refining_the_grid_cannot_hurt(self):
        # the fine dictionary contains the coarse one
        g = f4211()
        fine = refine(g, 3)
        for p in (2.0, 2.5):
            coarse_sigma = sigma_m(g, p, 2).sigma
            fine_sigma = sigma_m(fine, p, 2).sigma
            assert fine_sigma <= coarse_sigma + 1e-9
        assert sigma_m(fine, 2.0, 2).sigma == pytest.approx(
            sigma_m(g, 2.0, 2).sigma, abs=1e-10)

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            sigma_m(f4211(), 1.0, 1)
        with pytest.raises(ValueError):
            sigma_m(f4211(), 2.0, 5)
        with pytest.raises(ValueError):
            sigma_m(f4211(), 2.0, -1)
        with pytest.raises(ValueError):
            sigma_m(f4211(), 2.0, 1, tol=0.0)


class TestOptimizeCoefficients:
    def test_constant_fit_at_p2_is_the_mean(self):
        a, resid = optimize_coefficients(f4211(), dictionary(1, 2)[:1], 2.0)
        assert a[0] == pytest.approx(2.0, rel=1e-12)
        assert resid == pytest.approx(math.sqrt(1.5), rel=1e-12)

    def test_constant_fit_at_p3_is_sqrt5(self):
        # stationarity: (4-a)^2 = (a-2)^2 + 2(a-1)^2  <=>  a^2 = 5
        a, resid = optimize_coefficients(f4211(), dictionary(1, 2)[:1], 3.0)
        root = math.sqrt(5.0)
        assert a[0] == pytest.approx(root, rel=1e-10)
        direct = ((abs(4 - root) ** 3 + abs(2 - root) ** 3
                   + 2 * abs(1 - root) ** 3) / 4) ** (1 / 3)
        assert resid == pytest.approx(direct, rel=1e-10)

    def test_empty_support(self):
        a, resid = optimize_coefficients(f4211(), (), 1.5)
        assert a.shape == (0,)
        assert resid == pytest.approx(lp_norm(f4211(), 1.5), rel=1e-12)

    def test_span_membership_recovers_coefficients(self):
        atoms = dictionary(1, 2)[:2]
        target = 3.0 * evaluate_atom(atoms[0], 2) - 1.5 * evaluate_atom(atoms[1], 2)
        a, resid = optimize_coefficients(target, atoms, 1.7)
        assert a == pytest.approx([3.0, -1.5], abs=1e-8)
        assert resid < 1e-8

    def test_restarts_reach_the_same_minimum(self):
        rng = np.random.default_rng(17)
        g = GridFunction(1, 3, rng.standard_normal(8))
        atoms = dictionary(1, 3)[1:4]
        for p in (1.5, 3.0):
            baseline = optimize_coefficients(g, atoms, p)[1]
            for _ in range(3):
                x0 = 2.0 * rng.standard_normal(3)
                restarted = optimize_coefficients(g, atoms, p, x0=x0)[1]
                assert restarted == pytest.approx(baseline, abs=1e-7)

    def test_exhausted_budget_raises(self):
        with pytest.raises(ConvergenceError):
            optimize_coefficients(f4211(), dictionary(1, 2)[:1], 3.0,
                                  tol=1e-14, max_iter=1)

    def test_duplicate_atoms_rejected(self):
        atom = dictionary(1, 2)[0]
        with pytest.raises(ValueError):
            optimize_coefficients(f4211(), (atom, atom), 2.0)


class TestGradientFormula:
    def test_matches_central_differences(self):
        rng = np.random.default_rng(18)
        mat = _basis(1, 3)[1]
        v = rng.standard_normal(8)
        vol = 0.125
        for p in (1.5, 3.0):
            checked = 0
            while checked < 5:
                idx = rng.choice(8, size=3, replace=False)
                A = mat[idx].T
                a = rng.standard_normal(3)
                if np.abs(v - A @ a).min() < 1e-2:
                    continue
                an = gradient(A, v, vol, p, a)
                for i in range(3):
                    h = 1e-6 * max(1.0, abs(a[i]))
                    up, down = a.copy(), a.copy()
                    up[i] += h
                    down[i] -= h
                    fd = (objective(A, v, vol, p, up)
                          - objective(A, v, vol, p, down)) / (2 * h)
                    scale = max(abs(an[i]), abs(fd))
                    if scale > 1e-6:
                        assert abs(an[i] - fd) / scale < 1e-5
                    else:
                        assert abs(an[i] - fd) < 1e-8
                checked += 1
