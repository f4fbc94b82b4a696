"""Error-bound constants for greedy m-term Haar approximation, and executable
checks of the inequalities behind them.

The chain of results: a two-sided square-function inequality for the Haar
system (with the classical Burkholder constants for conditionally symmetric
martingale differences), geometric-layering and term-counting bounds that
control the norm of a Haar sum by the number of its terms, and a swap bound
between the greedy support and the optimal one.  Together they give an
explicit constant C(p) (or C(p, d) on the cube) with

    || g - greedy_m(g) ||_p  <=  C * sigma_m(g)_p .

Each check below evaluates one inequality exactly and returns (lhs, rhs,
holds) rather than a bare flag, so callers can report the observed slack:
every inequality is proved, and how tight it runs in practice is the
empirically interesting output.
"""

import math
from typing import NamedTuple

from .dyadic_grid import GridFunction, integrate, lp_norm
from .greedy import Support, select_lambda_m
from .best_mterm import sigma_m
from .transform import CoefficientTable, _basis, analyze, partial_sum

__all__ = [
    "ConstantSet",
    "InequalityCheck",
    "NormBoundCheck",
    "SLACK",
    "burkholder_constants",
    "check_layered_indicator_bound",
    "check_normalized_sum_bound",
    "check_projector_swap_bound",
    "greedy_bound_constant",
    "greedy_bound_constant_1d",
]

# Absolute slack absorbing floating-point rounding of exactly computed sides.
SLACK = 1e-12


def burkholder_constants(p):
    """The two-sided square-function constants (lower, upper) for the Haar
    system in L^p:  lower = 1/(M-1), upper = M-1 with M = max(p, p/(p-1)).

    Their product is exactly one, the pair is symmetric under p <-> p/(p-1),
    and at p = 2 both equal one (Parseval).
    """
    p = float(p)
    if not 1.0 < p < math.inf:
        raise ValueError("p must lie in (1, inf)")
    big = max(p, p / (p - 1.0))
    upper = big - 1.0
    return 1.0 / upper, upper


def greedy_bound_constant_1d(p) -> float:
    """Proven factor between greedy and best m-term errors on [0,1]:

        (2 + 1/(1 - (1/2)^(1/p))^2) * (max(p, p/(p-1)) - 1)^2

    Valid for 1 < p < infinity; roughly 13.66 at p = 2."""
    _, upper = burkholder_constants(p)
    p = float(p)
    return (2.0 + (1.0 - 0.5 ** (1.0 / p)) ** -2.0) * upper * upper


def greedy_bound_constant(p, dim) -> float:
    """Multivariate greedy-vs-best factor on [0,1]^d:

        (2 + 1/(1 - (1/2)^(d/p))^2) * ((2^d - 1) (max(p, p/(p-1)) - 1))^2

    Proved for 1 < p <= 2; the tensor dictionary splits into 2^d - 1
    orientations, which inflates the square-function constant by that count.
    At d = 1 this reduces to the univariate constant."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    p = float(p)
    if not 1.0 < p <= 2.0:
        raise ValueError("the multivariate bound is proved for 1 < p <= 2")
    _, upper = burkholder_constants(p)
    upper_tensor = (2.0 ** dim - 1.0) * upper
    return (2.0 + (1.0 - 0.5 ** (dim / p)) ** -2.0) * upper_tensor * upper_tensor


class ConstantSet(NamedTuple):
    """All constants of the error analysis at one (p, dim)."""

    p: float
    dim: int
    square_lower: float
    square_upper: float
    square_upper_tensor: float
    greedy_bound: float
    projector_swap: float

    @classmethod
    def compute(cls, p, dim=1) -> "ConstantSet":
        p = float(p)
        lower, upper = burkholder_constants(p)
        if dim == 1:
            bound = greedy_bound_constant_1d(p)
        else:
            bound = greedy_bound_constant(p, dim)
        return cls(
            p=p,
            dim=dim,
            square_lower=lower,
            square_upper=upper,
            square_upper_tensor=(2.0 ** dim - 1.0) * upper,
            greedy_bound=bound,
            projector_swap=(1.0 - 0.5 ** (dim / p)) ** -2.0,
        )


class InequalityCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


class NormBoundCheck(NamedTuple):
    fnorm: float
    bound: float
    holds: bool


def check_layered_indicator_bound(scales, sets, q) -> InequalityCheck:
    """Exact check of the geometric-layering bound

        int ( sum_j 2^(n_j d / q) 1_{E_j} )^q
            <=  (1 - 2^(-d/q))^(-q) * sum_j 2^(n_j d) |E_j|

    for strictly increasing integers n_j (``scales``, any sign) and
    cell-aligned indicator sets E_j on a common grid of [0,1]^d.  Both sides
    are finite sums; valid for any q > 0.
    """
    q = float(q)
    if not q > 0:
        raise ValueError("q must be positive")
    scales = [int(n) for n in scales]
    if any(b <= a for a, b in zip(scales, scales[1:])):
        raise ValueError("scales must be strictly increasing")
    sets = list(sets)
    if len(sets) != len(scales):
        raise ValueError("need one indicator set per scale")
    if not sets:
        return InequalityCheck(0.0, 0.0, True)
    d, level = sets[0].dim, sets[0].level
    for e in sets:
        if (e.dim, e.level) != (d, level):
            raise ValueError("indicator sets must share one grid")
        vals = e.values
        if not ((vals == 0.0) | (vals == 1.0)).all():
            raise ValueError("sets must be 0/1 indicators")

    layered = sum(2.0 ** (n * d / q) * e.values for n, e in zip(scales, sets))
    lhs = float(sets[0].cell_volume * (layered ** q).sum())
    mass = sum(2.0 ** (n * d) * integrate(e) for n, e in zip(scales, sets))
    rhs = (1.0 - 0.5 ** (d / q)) ** -q * mass
    return InequalityCheck(lhs, rhs, lhs <= rhs + SLACK)


def check_normalized_sum_bound(table: CoefficientTable, support,
                               direction: str) -> NormBoundCheck:
    """Count-vs-norm bounds for a Haar sum of N terms on [0,1]^d whose
    p-weighted term norms are normalized:

        upper: every term norm <= 1  =>  ||f||_p <= N^(1/p) / (1 - 2^(-d/p))
        lower: every term norm >= 1  =>  ||f||_p >= N^(1/p) * (1 - 2^(-d/p'))

    with p' = p/(p-1) the conjugate exponent.  The lower bound follows from
    the upper one by duality: pairing f against the sum of its sign pattern
    with unit p'-weighted terms gives at least N, while the upper bound at
    exponent p' controls that dual sum, so the conjugate exponent in the
    lower constant is forced.  (With d/p in its place the lower inequality
    is simply false: random d=2 tables with p near 1 violate it by double
    digit percentages.)  At p = 1 the lower constant degenerates to 0.

    ``support`` picks the N participating terms out of the table; f is their
    partial sum.  The relevant precondition on the weighted norms is checked
    and a violation raises, because the bound says nothing without it.
    Proved for 1 <= p < infinity.
    """
    if direction not in ("upper", "lower"):
        raise ValueError("direction must be 'upper' or 'lower'")
    p = table.p
    if not p >= 1.0:
        raise ValueError("bounds are proved for p >= 1")
    atoms = support.atoms if isinstance(support, Support) else tuple(support)
    positions = _basis(table.dim, table.level)[2]
    try:
        idx = [positions[a] for a in atoms]
    except KeyError:
        raise ValueError("support atom is not in the table's dictionary") from None
    weights = table.weighted_norms[idx] if idx else table.weighted_norms[:0]
    if direction == "upper" and not (weights <= 1.0 + SLACK).all():
        raise ValueError("upper bound needs every weighted term norm <= 1")
    if direction == "lower" and not (weights >= 1.0 - SLACK).all():
        raise ValueError("lower bound needs every weighted term norm >= 1")

    fnorm = lp_norm(partial_sum(table, atoms), p)
    count = len(atoms)
    if direction == "upper":
        base = 1.0 - 0.5 ** (table.dim / p)
        bound = count ** (1.0 / p) / base
        holds = fnorm <= bound + SLACK
    else:
        # conjugate exponent: d/p' = d(p-1)/p, zero at p = 1
        base = 1.0 - 0.5 ** (table.dim * (p - 1.0) / p)
        bound = count ** (1.0 / p) * base
        holds = fnorm >= bound - SLACK
    return NormBoundCheck(fnorm, bound, holds)


def check_projector_swap_bound(g: GridFunction, p, m: int, tol=1e-10,
                               jobs=1) -> InequalityCheck:
    """Swap bound between the optimal support L and the greedy support L_m:

        || S_{L \\ L_m}(g) ||_p  <=  (1 - 2^(-d/p))^(-2) * || S_{L_m \\ L}(g) ||_p

    where S_Q keeps the Haar terms of g indexed by Q.  L comes from the
    exhaustive oracle, L_m from greedy selection at the same (p, m); the two
    set differences always have equal size since |L| = |L_m| = m.
    """
    table = analyze(g, p)
    greedy_support = select_lambda_m(table, m)
    oracle = sigma_m(g, p, m, tol=tol, jobs=jobs)
    only_oracle = oracle.support.difference(greedy_support)
    only_greedy = greedy_support.difference(oracle.support)
    assert len(only_oracle) == len(only_greedy)
    lhs = lp_norm(partial_sum(table, only_oracle.atoms), p)
    rhs = (1.0 - 0.5 ** (g.dim / float(p))) ** -2.0 \
        * lp_norm(partial_sum(table, only_greedy.atoms), p)
    return InequalityCheck(lhs, rhs, lhs <= rhs + SLACK)
