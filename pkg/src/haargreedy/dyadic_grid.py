"""Exact piecewise-constant functions on uniform dyadic grids of [0,1]^d.

Resolution level J splits every axis into 2^J half-open intervals, so the
grid has 2^(J*d) congruent cells.  For functions that are constant on each
cell, integrals and L^p norms are finite sums; everything downstream
(transforms, greedy selection, inequality checks) is therefore exact up to
floating-point rounding.  No quadrature is used anywhere in this package.

Cell storage is flat with axis 1 fastest: cell (i_1, ..., i_d) lives at flat
index i_1 + 2^J i_2 + ... + 2^((d-1)J) i_d.  This order is fixed and is part
of the input file format of the command line front end.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

__all__ = [
    "DyadicCube",
    "GridFunction",
    "cube_volume",
    "inner_product",
    "integrate",
    "lp_norm",
    "refine",
    "restrict_indicator",
]


@dataclass(frozen=True)
class DyadicCube:
    """Half-open dyadic cube  prod_i [j_i 2^-k, (j_i+1) 2^-k)  in [0,1]^d.

    ``level`` is the refinement depth k and ``index`` the integer corner
    (j_1, ..., j_d) with 0 <= j_i < 2^k.  Cubes of one level tile the domain
    and are pairwise disjoint.
    """

    dim: int
    level: int
    index: tuple

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.level < 0:
            raise ValueError("level must be >= 0")
        index = tuple(int(j) for j in self.index)
        object.__setattr__(self, "index", index)
        if len(index) != self.dim:
            raise ValueError(f"index must have {self.dim} entries, got {len(index)}")
        top = 1 << self.level
        if any(j < 0 or j >= top for j in index):
            raise ValueError(f"index entries must lie in [0, {top})")

    @property
    def volume(self) -> float:
        return 2.0 ** (-self.level * self.dim)

    def children(self):
        """The 2^d subcubes of the next level, in lexicographic corner order."""
        return tuple(
            DyadicCube(self.dim, self.level + 1,
                       tuple(2 * j + o for j, o in zip(self.index, off)))
            for off in product((0, 1), repeat=self.dim)
        )


def cube_volume(cube: DyadicCube) -> float:
    """Lebesgue measure 2^(-level*dim) of a dyadic cube."""
    return cube.volume


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A function on [0,1]^d that is constant on every cell of the level-J grid.

    ``values`` holds one value per cell in the flat axis-1-fastest order
    described in the module docstring.  Instances are immutable; arithmetic
    returns new objects, so they are safe to share across threads.
    """

    dim: int
    level: int
    values: np.ndarray

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.level < 0:
            raise ValueError("level must be >= 0")
        values = np.array(self.values, dtype=float).ravel()
        expected = 1 << (self.dim * self.level)
        if values.size != expected:
            raise ValueError(
                f"need {expected} cell values for dim={self.dim}, level={self.level}; "
                f"got {values.size}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n_cells(self) -> int:
        return self.values.size

    @property
    def cell_volume(self) -> float:
        return 2.0 ** (-self.level * self.dim)

    def as_array(self) -> np.ndarray:
        """values reshaped to (2^J,)*d with axes ordered (axis_d, ..., axis_1),
        so that a C-order ravel restores the flat axis-1-fastest layout."""
        n = 1 << self.level
        return self.values.reshape((n,) * self.dim)

    def _binary(self, other, op):
        if not isinstance(other, GridFunction):
            return NotImplemented
        if (other.dim, other.level) != (self.dim, self.level):
            raise ValueError("grid mismatch: operands live on different grids")
        return GridFunction(self.dim, self.level, op(self.values, other.values))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __neg__(self):
        return GridFunction(self.dim, self.level, -self.values)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return GridFunction(self.dim, self.level, float(scalar) * self.values)

    __rmul__ = __mul__


def lp_norm(f: GridFunction, p) -> float:
    """Exact L^p norm  (sum_cells vol * |value|^p)^(1/p),  valid for any p > 0."""
    p = float(p)
    if not p > 0:
        raise ValueError("p must be positive")
    if not np.all(np.isfinite(f.values)):
        raise ValueError("grid function has non-finite cell values")
    return float((f.cell_volume * np.sum(np.abs(f.values) ** p)) ** (1.0 / p))


def integrate(f: GridFunction) -> float:
    """Exact integral over [0,1]^d."""
    return float(f.cell_volume * np.sum(f.values))


def inner_product(f: GridFunction, g: GridFunction) -> float:
    """Exact L^2 inner product of two functions on the same grid."""
    if (f.dim, f.level) != (g.dim, g.level):
        raise ValueError("grid mismatch: operands live on different grids")
    return float(f.cell_volume * np.dot(f.values, g.values))


def _tensor_cells(profiles) -> np.ndarray:
    """Flatten a tensor product of per-axis profiles (profiles[0] is axis 1)
    into the axis-1-fastest cell order."""
    arr = np.asarray(profiles[-1], dtype=float)
    for prof in profiles[-2::-1]:
        arr = np.multiply.outer(arr, np.asarray(prof, dtype=float))
    return arr.ravel()


def restrict_indicator(cube: DyadicCube, level: int) -> GridFunction:
    """Indicator of a dyadic cube realized exactly on the level-``level`` grid.

    The cube must not be finer than the grid, i.e. cube.level <= level.
    """
    if cube.level > level:
        raise ValueError(
            f"cube at level {cube.level} is finer than the level-{level} grid")
    n = 1 << level
    width = 1 << (level - cube.level)
    profiles = []
    for j in cube.index:
        prof = np.zeros(n)
        prof[j * width:(j + 1) * width] = 1.0
        profiles.append(prof)
    return GridFunction(cube.dim, level, _tensor_cells(profiles))


def refine(f: GridFunction, level: int) -> GridFunction:
    """The same function represented on a finer grid.

    Piecewise-constant refinement is exact: every cell value is repeated
    2^(level - f.level) times along each axis, so all norms and integrals
    are preserved bit for bit up to rounding.
    """
    if level < f.level:
        raise ValueError("cannot refine to a coarser level")
    if level == f.level:
        return f
    factor = 1 << (level - f.level)
    arr = f.as_array()
    for axis in range(f.dim):
        arr = np.repeat(arr, factor, axis=axis)
    return GridFunction(f.dim, level, arr.ravel())
