"""Grid primitives: cubes, grid functions, exact norms and integrals."""

import math

import numpy as np
import pytest

from haargreedy import (
    DyadicCube,
    GridFunction,
    cube_volume,
    inner_product,
    integrate,
    lp_norm,
    refine,
    restrict_indicator,
)


def grid(values, dim=1):
    values = np.asarray(values, dtype=float)
    level_bits = values.size.bit_length() - 1
    return GridFunction(dim, level_bits // dim, values)


class TestDyadicCube:
    def test_volume_values(self):
        assert cube_volume(DyadicCube(1, 0, (0,))) == 1.0
        assert cube_volume(DyadicCube(1, 3, (5,))) == 0.125
        assert cube_volume(DyadicCube(2, 1, (1, 0))) == 0.25

    def test_index_must_fit_level(self):
        with pytest.raises(ValueError):
            DyadicCube(1, 1, (2,))
        with pytest.raises(ValueError):
            DyadicCube(2, 0, (0, -1))
        with pytest.raises(ValueError):
            DyadicCube(2, 1, (0,))

    def test_children_tile_parent(self):
        for dim in (1, 2):
            parent = DyadicCube(dim, 1, (1,) * dim)
            kids = parent.children()
            assert len(kids) == 2 ** dim
            assert sum(c.volume for c in kids) == parent.volume
            # realized on a fine grid the child indicators sum to the parent's
            level = 3
            total = sum(restrict_indicator(c, level).values for c in kids)
            assert np.array_equal(total, restrict_indicator(parent, level).values)

    def test_children_are_disjoint(self):
        parent = DyadicCube(2, 0, (0, 0))
        masks = [restrict_indicator(c, 2).values for c in parent.children()]
        stacked = np.array(masks)
        assert (stacked.sum(axis=0) == 1.0).all()


class TestGridFunction:
    def test_cell_count_is_checked(self):
        with pytest.raises(ValueError):
            GridFunction(1, 2, [1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            GridFunction(2, 1, [1.0, 2.0])

    def test_values_are_immutable(self):
        f = grid([1.0, 2.0])
        with pytest.raises(ValueError):
            f.values[0] = 9.0

    def test_arithmetic(self):
        f = grid([1.0, 2.0, 3.0, 4.0])
        g = grid([4.0, 3.0, 2.0, 1.0])
        assert np.array_equal((f + g).values, [5.0, 5.0, 5.0, 5.0])
        assert np.array_equal((f - g).values, [-3.0, -1.0, 1.0, 3.0])
        assert np.array_equal((-f).values, [-1.0, -2.0, -3.0, -4.0])
        assert np.array_equal((2.0 * f).values, (f * 2.0).values)

    def test_mismatched_grids_raise(self):
        with pytest.raises(ValueError):
            grid([1.0, 2.0]) + grid([1.0, 2.0, 3.0, 4.0])

    def test_as_array_round_trips_flat_order(self):
        f = GridFunction(2, 1, [1.0, 2.0, 3.0, 4.0])
        assert f.as_array().shape == (2, 2)
        assert np.array_equal(f.as_array().ravel(), f.values)


class TestLpNorm:
    def test_constant_function(self):
        for p in (1.0, 2.0, 3.7):
            assert lp_norm(grid([1.0, 1.0, 1.0, 1.0]), p) == pytest.approx(1.0)

    def test_hand_sum(self):
        # (16 + 4 + 1 + 1) / 4 = 5.5
        assert lp_norm(grid([4.0, 2.0, 1.0, 1.0]), 2) == pytest.approx(
            math.sqrt(5.5), rel=1e-14)

    def test_unit_step(self):
        assert lp_norm(grid([1.0, -1.0]), 3) == pytest.approx(1.0, rel=1e-14)

    def test_homogeneous(self):
        rng = np.random.default_rng(0)
        f = grid(rng.standard_normal(8))
        for alpha in (3.5, -2.0, 0.0):
            for p in (1.0, 1.5, 2.0, 4.0):
                assert lp_norm(alpha * f, p) == pytest.approx(
                    abs(alpha) * lp_norm(f, p), abs=1e-13)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(1)
        for _ in range(25):
            f = grid(rng.standard_normal(16))
            g = grid(rng.standard_normal(16))
            for p in (1.0, 1.5, 2.0, 3.0):
                assert lp_norm(f + g, p) <= lp_norm(f, p) + lp_norm(g, p) + 1e-12

    def test_squared_l2_is_cell_sum(self):
        rng = np.random.default_rng(2)
        for dim in (1, 2):
            f = GridFunction(dim, 2, rng.standard_normal(1 << (2 * dim)))
            direct = f.cell_volume * np.sum(f.values ** 2)
            assert lp_norm(f, 2) ** 2 == pytest.approx(direct, rel=1e-12)

    def test_rejects_bad_input(self):
        f = grid([1.0, 2.0])
        with pytest.raises(ValueError):
            lp_norm(f, 0.0)
        with pytest.raises(ValueError):
            lp_norm(grid([1.0, float("inf")]), 2)


def test_integrate_and_inner_product():
    f = grid([4.0, 2.0, 1.0, 1.0])
    g = grid([1.0, 1.0, -1.0, -1.0])
    assert integrate(f) == pytest.approx(2.0)
    assert inner_product(f, g) == pytest.approx((4 + 2 - 1 - 1) / 4)
    assert inner_product(f, f) == pytest.approx(lp_norm(f, 2) ** 2, rel=1e-14)
    with pytest.raises(ValueError):
        inner_product(f, grid([1.0, 2.0]))


class TestRestrictIndicator:
    def test_full_interval(self):
        c = DyadicCube(1, 0, (0,))
        assert np.array_equal(restrict_indicator(c, 1).values, [1.0, 1.0])

    def test_left_half_on_finer_grid(self):
        c = DyadicCube(1, 1, (0,))
        assert np.array_equal(restrict_indicator(c, 2).values, [1.0, 1.0, 0.0, 0.0])

    def test_single_cell_square(self):
        c = DyadicCube(2, 1, (0, 1))
        mask = restrict_indicator(c, 1).values
        assert mask.sum() == 1.0
        assert set(mask.tolist()) == {0.0, 1.0}
        # axis 1 fastest: cell (0, 1) sits at flat index 0 + 2*1
        assert mask[2] == 1.0

    def test_volume_matches_integral(self):
        c = DyadicCube(2, 1, (1, 1))
        assert integrate(restrict_indicator(c, 3)) == pytest.approx(c.volume)

    def test_cube_finer_than_grid_raises(self):
        with pytest.raises(ValueError):
            restrict_indicator(DyadicCube(1, 3, (0,)), 2)


class TestRefine:
    def test_values_repeat(self):
        f = grid([1.0, 2.0])
        assert np.array_equal(refine(f, 2).values, [1.0, 1.0, 2.0, 2.0])

    def test_norms_preserved(self):
        rng = np.random.default_rng(3)
        for dim in (1, 2):
            f = GridFunction(dim, 1, rng.standard_normal(1 << dim))
            fine = refine(f, 3)
            assert integrate(fine) == pytest.approx(integrate(f), abs=1e-15)
            for p in (1.0, 2.0, 2.5):
                assert lp_norm(fine, p) == pytest.approx(lp_norm(f, p), rel=1e-13)

    def test_same_level_is_identity(self):
        f = grid([1.0, 2.0])
        assert refine(f, 1) is f

    def test_coarser_level_raises(self):
        with pytest.raises(ValueError):
            refine(grid([1.0, 2.0, 3.0, 4.0]), 1)
