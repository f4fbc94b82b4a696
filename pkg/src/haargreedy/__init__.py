"""Greedy m-term Haar approximation in L^p on the unit cube.

The package represents functions exactly as piecewise constants on dyadic
grids, expands them in the tensor Haar dictionary, selects terms greedily by
p-weighted coefficient size, and compares the result against an exhaustive
best-m-term oracle.  Explicit constants for the proved error bounds live in
:mod:`haargreedy.bounds`, and randomized suites that verify every supporting
inequality live in :mod:`haargreedy.suites`.
"""

from .dyadic_grid import (
    DyadicCube,
    GridFunction,
    cube_volume,
    inner_product,
    integrate,
    lp_norm,
    refine,
    restrict_indicator,
)
from .haar_basis import (
    HaarAtom,
    Orientation,
    atom_lp_norm,
    dictionary,
    evaluate_atom,
    orientations,
)
from .transform import (
    CoefficientTable,
    analyze,
    partial_sum,
    project,
    square_function,
    synthesize,
)
from .greedy import Support, greedy_approximation, select_lambda_m
from .best_mterm import (
    BestMTermResult,
    ConvergenceError,
    optimize_coefficients,
    sigma_m,
)
from .bounds import (
    ConstantSet,
    burkholder_constants,
    check_layered_indicator_bound,
    check_normalized_sum_bound,
    check_projector_swap_bound,
    greedy_bound_constant,
    greedy_bound_constant_1d,
)
from .martingale import (
    Filtration,
    Partition,
    build_filtration_1d,
    build_mixed_filtration,
    build_orientation_filtration,
    conditional_expectation,
    difference_sequence,
    multivariate_counterexample,
    verify_conditionally_symmetric,
)
from .suites import SUITES, SuiteResult

__version__ = "0.1.0"

__all__ = [
    "BestMTermResult",
    "CoefficientTable",
    "ConstantSet",
    "ConvergenceError",
    "DyadicCube",
    "Filtration",
    "GridFunction",
    "HaarAtom",
    "Orientation",
    "Partition",
    "SUITES",
    "SuiteResult",
    "Support",
    "analyze",
    "atom_lp_norm",
    "build_filtration_1d",
    "build_mixed_filtration",
    "build_orientation_filtration",
    "burkholder_constants",
    "check_layered_indicator_bound",
    "check_normalized_sum_bound",
    "check_projector_swap_bound",
    "conditional_expectation",
    "cube_volume",
    "dictionary",
    "difference_sequence",
    "evaluate_atom",
    "greedy_approximation",
    "greedy_bound_constant",
    "greedy_bound_constant_1d",
    "inner_product",
    "integrate",
    "lp_norm",
    "multivariate_counterexample",
    "optimize_coefficients",
    "orientations",
    "partial_sum",
    "project",
    "refine",
    "restrict_indicator",
    "select_lambda_m",
    "sigma_m",
    "square_function",
    "synthesize",
    "verify_conditionally_symmetric",
]
