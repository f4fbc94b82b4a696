"""Filtrations, conditional expectations, and conditional symmetry checks."""

import numpy as np
import pytest

from haargreedy import (
    GridFunction,
    Partition,
    build_filtration_1d,
    build_mixed_filtration,
    build_orientation_filtration,
    conditional_expectation,
    dictionary,
    difference_sequence,
    evaluate_atom,
    multivariate_counterexample,
    orientations,
    verify_conditionally_symmetric,
)
from haargreedy.martingale import DifferenceSequence


class TestFiltrations:
    def test_level_one_chain(self):
        filt = build_filtration_1d(1)
        assert filt.ordering == dictionary(1, 1)
        assert filt.ordering[0].is_constant
        assert filt.partitions[0].n_blocks == 1
        assert filt.partitions[1].n_blocks == 2
        assert sorted(tuple(b) for b in filt.partitions[1].blocks()) == \
            [(0,), (1,)]

    def test_level_two_chain(self):
        filt = build_filtration_1d(2)
        assert len(filt.ordering) == 4
        assert filt.partitions[-1].n_blocks == 4

    def test_level_zero_chain(self):
        filt = build_filtration_1d(0)
        assert len(filt.ordering) == 1
        assert filt.partitions[0].n_blocks == 1

    def test_partitions_are_nested(self):
        for filt in (build_filtration_1d(3),
                     build_orientation_filtration(2, 2, (1, 1)),
                     build_mixed_filtration(2, 2)):
            for fine, coarse in zip(filt.partitions[1:], filt.partitions):
                assert fine.refines(coarse)

    def test_orientation_filtration_contents(self):
        filt = build_orientation_filtration(2, 2, (0, 1))
        assert all(a.orientation.bits == (0, 1) for a in filt.ordering)
        assert len(filt.ordering) == 5
        with_const = build_orientation_filtration(2, 2, (0, 1),
                                                  include_constant=True)
        assert with_const.ordering[0].is_constant
        with pytest.raises(ValueError):
            build_orientation_filtration(2, 2, (1,))


class TestPartition:
    def test_labels_must_be_consecutive(self):
        Partition(1, 2, [0, 2, 2, 1])
        with pytest.raises(ValueError):
            Partition(1, 2, [0, 2, 2, 2])
        with pytest.raises(ValueError):
            Partition(1, 2, [0, 0, 0])

    def test_refines_needs_matching_grid(self):
        fine = Partition(1, 1, [0, 1])
        assert not fine.refines(Partition(1, 2, [0, 0, 1, 1]))


class TestConditionalExpectation:
    def test_global_mean(self):
        f = GridFunction(1, 2, [4.0, 2.0, 1.0, 1.0])
        out = conditional_expectation(f, Partition(1, 2, [0, 0, 0, 0]))
        assert np.array_equal(out.values, [2.0] * 4)

    def test_wavelet_vanishes_one_step_early(self):
        filt = build_filtration_1d(2)
        for step, atom in enumerate(filt.ordering):
            if step == 0:
                continue
            before = filt.partitions[step - 1]
            out = conditional_expectation(evaluate_atom(atom, 2), before)
            assert np.abs(out.values).max() < 1e-14

    def test_constant_is_fixed_point(self):
        f = GridFunction(1, 2, [3.0] * 4)
        out = conditional_expectation(f, Partition(1, 2, [0, 1, 1, 0]))
        assert np.array_equal(out.values, f.values)

    def test_tower_property(self):
        rng = np.random.default_rng(21)
        filt = build_filtration_1d(3)
        f = GridFunction(1, 3, rng.standard_normal(8))
        for i in range(1, len(filt.partitions)):
            fine, coarse = filt.partitions[i], filt.partitions[i - 1]
            two_step = conditional_expectation(
                conditional_expectation(f, fine), coarse)
            one_step = conditional_expectation(f, coarse)
            assert np.abs(two_step.values - one_step.values).max() < 1e-13

    def test_grid_mismatch_raises(self):
        with pytest.raises(ValueError):
            conditional_expectation(GridFunction(1, 1, [1.0, 2.0]),
                                    Partition(1, 2, [0, 0, 1, 1]))


class TestConditionalSymmetry:
    def test_univariate_series_pass(self):
        rng = np.random.default_rng(22)
        for level in range(5):
            filt = build_filtration_1d(level)
            for _ in range(5):
                seq = difference_sequence(
                    filt, rng.standard_normal(len(filt.ordering)))
                report = verify_conditionally_symmetric(seq, filt)
                assert report.passed, report.violations
                assert not report.violations

    def test_fixed_orientation_planar_series_pass(self):
        rng = np.random.default_rng(23)
        for level in (1, 2, 3):
            for orientation in orientations(2):
                filt = build_orientation_filtration(2, level, orientation)
                seq = difference_sequence(
                    filt, rng.standard_normal(len(filt.ordering)))
                report = verify_conditionally_symmetric(seq, filt)
                assert report.passed, report.violations

    def test_corrupted_term_is_reported(self):
        filt = build_filtration_1d(2)
        seq = difference_sequence(filt, np.ones(4))
        broken = list(seq.terms)
        bad = GridFunction(1, 2, np.abs(broken[2].values))
        broken[2] = bad
        report = verify_conditionally_symmetric(
            DifferenceSequence(tuple(broken), seq.coefficients), filt)
        assert not report.passed
        assert any(v.kind == "symmetry" for v in report.violations)

    def test_alignment_validation(self):
        filt = build_filtration_1d(2)
        seq = difference_sequence(filt, np.ones(4))
        short = DifferenceSequence(seq.terms[:3], seq.coefficients[:3])
        with pytest.raises(ValueError):
            verify_conditionally_symmetric(short, filt)
        with pytest.raises(ValueError):
            difference_sequence(filt, np.ones(3))


class TestMultivariateCounterexample:
    def test_degenerate_conditionals_are_exactly_one(self):
        report = multivariate_counterexample()
        assert report.conditionals[
            "checker | bottom_top=+1, left_right=+1"] == 1.0
        assert report.conditionals[
            "bottom_top | left_right=+1, checker=+1"] == 1.0
        assert report.conditionals[
            "left_right | bottom_top=+1, checker=+1"] == 1.0

    def test_sign_product_conditionals(self):
        report = multivariate_counterexample()
        assert report.conditionals["checker | bottom_top=-1, left_right=-1"] == 1.0
        assert report.conditionals["checker | bottom_top=+1, left_right=-1"] == -1.0

    def test_violation_location_and_size(self):
        report = multivariate_counterexample()
        assert report.violation_step == 3
        assert report.violation_magnitude == 1.0

    def test_violation_scales_with_the_conditioned_coefficient(self):
        filt = build_mixed_filtration(2, 1)
        seq = difference_sequence(filt, [1.0, 1.0, 1.0, 2.5])
        report = verify_conditionally_symmetric(seq, filt)
        means = [v for v in report.violations if v.kind == "mean"]
        assert means
        assert all(v.step == 3 for v in means)
        assert {v.magnitude for v in means} == {2.5}
