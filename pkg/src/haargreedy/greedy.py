"""Greedy m-term selection: keep the m terms with the largest weighted norms.

Selection is pure thresholding of the p-weighted term norms; coefficients are
never re-optimized.  Ties are broken toward the atom that comes first in
dictionary order, so the selected support is deterministic, invariant under
nonzero scaling of the input, and grows monotonically in m on tie-free input.
"""

from dataclasses import dataclass

import numpy as np

from .dyadic_grid import GridFunction
from .transform import CoefficientTable, analyze, partial_sum

__all__ = ["Support", "greedy_approximation", "select_lambda_m"]


@dataclass(frozen=True)
class Support:
    """An ordered set of dictionary atoms, kept in dictionary order."""

    atoms: tuple

    def __post_init__(self):
        atoms = tuple(self.atoms)
        if len(set(atoms)) != len(atoms):
            raise ValueError("support contains duplicate atoms")
        object.__setattr__(self, "atoms", atoms)

    @property
    def m(self) -> int:
        return len(self.atoms)

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __contains__(self, atom):
        return atom in self.atoms

    def difference(self, other) -> "Support":
        drop = set(other.atoms)
        return Support(tuple(a for a in self.atoms if a not in drop))


def select_lambda_m(table: CoefficientTable, m: int) -> Support:
    """Support of the m largest weighted norms, ties to earlier dictionary
    position."""
    n = len(table.atoms)
    if m < 0 or m > n:
        raise ValueError(f"m must lie in [0, {n}]")
    order = np.argsort(-table.weighted_norms, kind="stable")
    keep = np.sort(order[:m])
    return Support(tuple(table.atoms[i] for i in keep))


def greedy_approximation(f: GridFunction, p, m: int):
    """Greedy m-term approximation of f in L^p.

    Returns (approximation, support) where the approximation is the partial
    Haar sum of f over the selected support."""
    table = analyze(f, p)
    support = select_lambda_m(table, m)
    return partial_sum(table, support.atoms), support
