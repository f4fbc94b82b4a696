"""Dyadic martingale structure of Haar series.

A sigma-field generated by finitely many piecewise-constant functions is a
finite partition of the grid cells, so conditioning is exact block averaging
and "equal conditional distribution" is an exact comparison of cell-measure
value histograms -- nothing is sampled.

Under the coarse-to-fine, left-to-right ordering every univariate Haar
series is a conditionally symmetric martingale difference sequence, and so
is every fixed-orientation tensor series on the cube.  Mixing orientations
breaks this for d >= 2: on the four quadrants of the square the product of
the two axis-split atoms determines the checkerboard atom, which makes one
conditional expectation equal to the conditioned coefficient instead of
zero.  ``multivariate_counterexample`` computes that failure exactly.
"""

from dataclasses import dataclass

import numpy as np

from .dyadic_grid import GridFunction
from .haar_basis import HaarAtom, Orientation, dictionary, evaluate_atom, orientations

__all__ = [
    "CounterexampleReport",
    "DifferenceSequence",
    "Filtration",
    "Partition",
    "SymmetryReport",
    "SymmetryViolation",
    "build_filtration_1d",
    "build_mixed_filtration",
    "build_orientation_filtration",
    "conditional_expectation",
    "difference_sequence",
    "multivariate_counterexample",
    "verify_conditionally_symmetric",
]


@dataclass(frozen=True, eq=False)
class Partition:
    """A partition of the grid cells into blocks, as per-cell labels 0..K-1."""

    dim: int
    level: int
    labels: np.ndarray

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.intp).ravel()
        if labels.size != 1 << (self.dim * self.level):
            raise ValueError("labels must cover every grid cell")
        if labels.size and not np.array_equal(np.unique(labels),
                                              np.arange(labels.max() + 1)):
            raise ValueError("labels must be consecutive integers from 0")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)

    @property
    def n_blocks(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    def blocks(self):
        """Cell index arrays of the blocks, by block label."""
        return [np.flatnonzero(self.labels == b) for b in range(self.n_blocks)]

    def refines(self, other) -> bool:
        """True when every block of self lies inside one block of other."""
        if (self.dim, self.level) != (other.dim, other.level):
            return False
        pairs = {(a, b) for a, b in zip(self.labels.tolist(), other.labels.tolist())}
        return len(pairs) == self.n_blocks


def _refine_labels(labels, values):
    codes = np.unique(values, return_inverse=True)[1]
    combined = labels * (codes.max() + 1) + codes
    return np.unique(combined, return_inverse=True)[1]


@dataclass(frozen=True, eq=False)
class Filtration:
    """Atoms in adapted order with the sigma-field partition after each prefix.

    ``partitions[i]`` is generated by ``ordering[: i + 1]``; successive
    partitions are nested refinements by construction.
    """

    dim: int
    level: int
    ordering: tuple
    partitions: tuple


def _filtration_from_ordering(dim, level, atoms) -> Filtration:
    labels = np.zeros(1 << (dim * level), dtype=np.intp)
    parts = []
    for atom in atoms:
        labels = _refine_labels(labels, evaluate_atom(atom, level).values)
        parts.append(Partition(dim, level, labels))
    return Filtration(dim, level, tuple(atoms), tuple(parts))


def build_filtration_1d(level: int) -> Filtration:
    """Constant first, then each wavelet level left to right: the ordering
    under which every univariate Haar series is a conditionally symmetric
    martingale difference sequence."""
    return _filtration_from_ordering(1, level, dictionary(1, level))


def build_orientation_filtration(dim, level, orientation,
                                 include_constant=False) -> Filtration:
    """Atoms of one fixed orientation, coarse to fine, row-major within each
    level.  Fixed-orientation series are conditionally symmetric martingale
    difference sequences for every d."""
    if not isinstance(orientation, Orientation):
        orientation = Orientation(tuple(orientation))
    if orientation.dim != dim:
        raise ValueError("orientation dimension must match dim")
    atoms = [HaarAtom.constant(dim)] if include_constant else []
    for wavelet in dictionary(dim, level):
        if not wavelet.is_constant and wavelet.orientation == orientation:
            atoms.append(wavelet)
    return _filtration_from_ordering(dim, level, atoms)


def build_mixed_filtration(dim, level) -> Filtration:
    """Full dictionary order, all orientations interleaved within each level.
    For d >= 2 this ordering is NOT a martingale ordering; see
    multivariate_counterexample."""
    return _filtration_from_ordering(dim, level, dictionary(dim, level))


def conditional_expectation(f: GridFunction, partition: Partition) -> GridFunction:
    """Exact conditional expectation: the average of f over each block,
    under the uniform cell measure."""
    if (f.dim, f.level) != (partition.dim, partition.level):
        raise ValueError("partition does not cover the function's grid")
    counts = np.bincount(partition.labels, minlength=partition.n_blocks)
    sums = np.bincount(partition.labels, weights=f.values,
                       minlength=partition.n_blocks)
    return GridFunction(f.dim, f.level, (sums / counts)[partition.labels])


@dataclass(frozen=True, eq=False)
class DifferenceSequence:
    """Increments of a Haar series, aligned with a filtration ordering.

    ``terms[i]`` is coefficients[i] times the i-th atom of the ordering, so
    the terms sum to the partial Haar series exactly."""

    terms: tuple
    coefficients: np.ndarray


def difference_sequence(filtration: Filtration, coefficients) -> DifferenceSequence:
    """Build the increment sequence of a Haar series along a filtration."""
    coefficients = np.array(coefficients, dtype=float).ravel()
    if coefficients.size != len(filtration.ordering):
        raise ValueError("need one coefficient per atom of the ordering")
    terms = tuple(
        float(c) * evaluate_atom(atom, filtration.level)
        for c, atom in zip(coefficients, filtration.ordering))
    return DifferenceSequence(terms, coefficients)


@dataclass(frozen=True)
class SymmetryViolation:
    step: int
    block: int
    kind: str
    magnitude: float


@dataclass(frozen=True, eq=False)
class SymmetryReport:
    passed: bool
    n_checks: int
    violations: tuple


def verify_conditionally_symmetric(seq: DifferenceSequence,
                                   filtration: Filtration,
                                   tol=1e-12) -> SymmetryReport:
    """Check that a difference sequence is conditionally symmetric along a
    filtration.

    For every step n and every block of the step-n partition, the next
    increment must have an exactly mirror-symmetric value histogram on the
    block (cell counts of v and -v agree for every value v) and conditional
    mean zero within ``tol``.  Violations are reported per (step, block).
    """
    if len(seq.terms) != len(filtration.ordering):
        raise ValueError("sequence and filtration lengths differ")
    for term in seq.terms:
        if (term.dim, term.level) != (filtration.dim, filtration.level):
            raise ValueError("sequence terms live on the wrong grid")
    violations = []
    n_checks = 0
    for n in range(len(seq.terms) - 1):
        part = filtration.partitions[n]
        nxt = seq.terms[n + 1].values
        for b, cells in enumerate(part.blocks()):
            n_checks += 1
            block_vals = nxt[cells]
            if not np.array_equal(np.sort(block_vals), np.sort(-block_vals)):
                violations.append(SymmetryViolation(
                    n + 1, b, "symmetry", float(np.abs(block_vals).max())))
            mean = float(block_vals.mean())
            if abs(mean) > tol:
                violations.append(SymmetryViolation(n + 1, b, "mean", abs(mean)))
    return SymmetryReport(not violations, n_checks, tuple(violations))


@dataclass(frozen=True, eq=False)
class CounterexampleReport:
    """Exact conditionals showing the mixed-orientation ordering fails."""

    conditionals: dict
    violation_step: int
    violation_magnitude: float


def multivariate_counterexample() -> CounterexampleReport:
    """Why the full planar Haar series is not a martingale in dictionary order.

    On the level-1 grid of the square, let bottom_top, left_right and checker
    be the three level-0 atoms (orientations (0,1), (1,0), (1,1)).  Their
    signs multiply: checker = bottom_top * left_right on every quadrant, so
    conditioning on any two of the three determines the third.  The implied
    conditional expectations are computed exactly, the degenerate ones are
    asserted to equal 1, and the mean violation in the mixed dictionary
    ordering (magnitude equal to the conditioned coefficient) is exhibited.
    """
    level = 1
    e01, e10, e11 = orientations(2)
    atom = {o: [a for a in dictionary(2, level)
                if not a.is_constant and a.orientation == o][0]
            for o in (e01, e10, e11)}
    bottom_top = evaluate_atom(atom[e01], level).values
    left_right = evaluate_atom(atom[e10], level).values
    checker = evaluate_atom(atom[e11], level).values

    def conditional(target, *conditions):
        mask = np.ones(target.size, dtype=bool)
        for values, wanted in conditions:
            mask &= values == wanted
        return float(target[mask].mean())

    conditionals = {
        "checker | bottom_top=+1, left_right=+1":
            conditional(checker, (bottom_top, 1.0), (left_right, 1.0)),
        "bottom_top | left_right=+1, checker=+1":
            conditional(bottom_top, (left_right, 1.0), (checker, 1.0)),
        "left_right | bottom_top=+1, checker=+1":
            conditional(left_right, (bottom_top, 1.0), (checker, 1.0)),
        "checker | bottom_top=-1, left_right=-1":
            conditional(checker, (bottom_top, -1.0), (left_right, -1.0)),
        "checker | bottom_top=+1, left_right=-1":
            conditional(checker, (bottom_top, 1.0), (left_right, -1.0)),
    }
    determined = [
        conditionals["checker | bottom_top=+1, left_right=+1"],
        conditionals["bottom_top | left_right=+1, checker=+1"],
        conditionals["left_right | bottom_top=+1, checker=+1"],
    ]
    if any(value != 1.0 for value in determined):
        raise RuntimeError(f"expected degenerate conditionals, got {determined}")

    filtration = build_mixed_filtration(2, level)
    seq = difference_sequence(filtration, np.ones(len(filtration.ordering)))
    report = verify_conditionally_symmetric(seq, filtration)
    mean_violations = [v for v in report.violations if v.kind == "mean"]
    if not mean_violations:
        raise RuntimeError("mixed ordering unexpectedly passed the martingale check")
    worst = max(mean_violations, key=lambda v: v.magnitude)
    return CounterexampleReport(conditionals, worst.step, worst.magnitude)
