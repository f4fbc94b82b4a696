"""Analysis and synthesis in the Haar dictionary, plus the square function.

The dictionary at grid level J has exactly as many atoms as the grid has
cells and is orthonormal in L^2, so analysis is a (cached) matrix product
and synthesis is its exact inverse.  The coefficient table also stores the
p-weighted norm  |c| * vol^(1/p - 1/2)  of every term, which is the quantity
greedy selection ranks.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dyadic_grid import GridFunction, refine
from .haar_basis import atom_lp_norm, dictionary, evaluate_atom

__all__ = [
    "CoefficientTable",
    "analyze",
    "partial_sum",
    "project",
    "square_function",
    "synthesize",
]


@lru_cache(maxsize=None)
def _basis(dim: int, level: int):
    """(atoms, matrix, positions, cube volumes) for one grid, cached.

    ``matrix`` has one row per atom holding its exact cell values."""
    atoms = dictionary(dim, level)
    n_cells = 1 << (dim * level)
    mat = np.empty((len(atoms), n_cells))
    for i, atom in enumerate(atoms):
        mat[i] = evaluate_atom(atom, level).values
    mat.setflags(write=False)
    positions = {atom: i for i, atom in enumerate(atoms)}
    volumes = np.array([atom.cube.volume for atom in atoms])
    volumes.setflags(write=False)
    return atoms, mat, positions, volumes


@dataclass(frozen=True, eq=False)
class CoefficientTable:
    """Haar coefficients of one function over the full dictionary of its grid.

    ``coefficients[i]`` is the L^2 inner product with ``atoms[i]`` and
    ``weighted_norms[i]`` the L^p norm of that single term,
    |c_i| * vol_i^(1/p - 1/2).  Zero entries are kept so the table always has
    dictionary length.
    """

    dim: int
    level: int
    p: float
    atoms: tuple
    coefficients: np.ndarray
    weighted_norms: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float).ravel()
        w = np.array(self.weighted_norms, dtype=float).ravel()
        if len(self.atoms) != 1 << (self.dim * self.level):
            raise ValueError("table must cover the full dictionary")
        if c.size != len(self.atoms) or w.size != len(self.atoms):
            raise ValueError("coefficient arrays must match the dictionary size")
        c.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "weighted_norms", w)
        object.__setattr__(self, "p", float(self.p))

    @classmethod
    def from_coefficients(cls, dim, level, coefficients, p=2.0) -> "CoefficientTable":
        """Build a table directly from coefficients in dictionary order."""
        p = float(p)
        if not p > 0:
            raise ValueError("p must be positive")
        atoms, _, _, volumes = _basis(dim, level)
        c = np.array(coefficients, dtype=float).ravel()
        if c.size != len(atoms):
            raise ValueError("coefficient count must equal the dictionary size")
        weighted = np.abs(c) * volumes ** (1.0 / p - 0.5)
        return cls(dim, level, p, atoms, c, weighted)

    @property
    def entries(self):
        """(atom, coefficient, weighted norm) triples in dictionary order."""
        return list(zip(self.atoms, self.coefficients, self.weighted_norms))

    def coefficient(self, atom) -> float:
        positions = _basis(self.dim, self.level)[2]
        if atom not in positions:
            raise ValueError("atom is not in this table's dictionary")
        return float(self.coefficients[positions[atom]])


def analyze(f: GridFunction, p=2.0) -> CoefficientTable:
    """Exact Haar coefficients of f, with p-weighted term norms.

    Inner products of piecewise-constant functions are plain cell sums, so
    this is exact; synthesize inverts it exactly."""
    p = float(p)
    if not p > 0:
        raise ValueError("p must be positive")
    atoms, mat, _, volumes = _basis(f.dim, f.level)
    c = f.cell_volume * (mat @ f.values)
    weighted = np.abs(c) * volumes ** (1.0 / p - 0.5)
    return CoefficientTable(f.dim, f.level, p, atoms, c, weighted)


def synthesize(table: CoefficientTable, level=None) -> GridFunction:
    """Sum of all table terms, on the table's own grid or any finer one."""
    if level is None:
        level = table.level
    if level < table.level:
        raise ValueError("cannot synthesize below the table's grid level")
    mat = _basis(table.dim, table.level)[1]
    g = GridFunction(table.dim, table.level, table.coefficients @ mat)
    return refine(g, level)


def partial_sum(table: CoefficientTable, atoms) -> GridFunction:
    """Sum of the table terms indexed by ``atoms`` (any iterable of atoms)."""
    _, mat, positions, _ = _basis(table.dim, table.level)
    idx = []
    for atom in atoms:
        if atom not in positions:
            raise ValueError("atom is not in this table's dictionary")
        idx.append(positions[atom])
    if not idx:
        return GridFunction(table.dim, table.level, np.zeros(mat.shape[1]))
    idx = np.array(sorted(idx), dtype=np.intp)
    return GridFunction(table.dim, table.level, table.coefficients[idx] @ mat[idx])


def project(f: GridFunction, atoms, p=2.0) -> GridFunction:
    """Partial Haar sum of f over ``atoms``; complementary projections add
    back to f exactly."""
    return partial_sum(analyze(f, p), atoms)


def square_function(f: GridFunction) -> GridFunction:
    """Pointwise square function  sqrt(sum_atoms |c * atom(x)|^2).

    The constant term is included.  For p = 2 its L^2 norm equals ||f||_2."""
    _, mat, _, _ = _basis(f.dim, f.level)
    c = f.cell_volume * (mat @ f.values)
    sq = (c * c) @ (mat * mat)
    return GridFunction(f.dim, f.level, np.sqrt(sq))
