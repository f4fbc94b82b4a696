"""The Haar system on [0,1]^d, realized exactly on dyadic grids.

Univariate atoms are the constant function on [0,1) together with, for every
dyadic interval I, the step function equal to +|I|^(-1/2) on the left half of
I and -|I|^(-1/2) on the right half.  A tensor atom on [0,1]^d attaches to a
dyadic cube and a nonzero orientation in {0,1}^d: axes flagged 1 carry the
two-sign factor, axes flagged 0 carry the flat indicator factor, and the
whole product is scaled by vol(cube)^(-1/2).

Every non-constant atom integrates to zero and has unit L^2 norm, and the
full dictionary at grid level J is an orthonormal basis of the
piecewise-constant functions on that grid.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .dyadic_grid import DyadicCube, GridFunction, _tensor_cells

__all__ = [
    "HaarAtom",
    "Orientation",
    "atom_lp_norm",
    "dictionary",
    "evaluate_atom",
    "orientations",
]


@dataclass(frozen=True)
class Orientation:
    """Nonzero 0/1 vector choosing which axes carry the two-sign factor."""

    bits: tuple

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        object.__setattr__(self, "bits", bits)
        if len(bits) < 1:
            raise ValueError("orientation needs at least one axis")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("orientation entries must be 0 or 1")
        if not any(bits):
            raise ValueError("orientation must be nonzero")

    @property
    def dim(self) -> int:
        return len(self.bits)


@lru_cache(maxsize=None)
def orientations(dim: int):
    """All 2^d - 1 nonzero orientations, in lexicographic bit order."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return tuple(Orientation(bits) for bits in product((0, 1), repeat=dim)
                 if any(bits))


@dataclass(frozen=True)
class HaarAtom:
    """One dictionary element: the constant function, or a wavelet attached
    to a dyadic cube and an orientation.

    The constant atom carries the full-domain cube so that its support and
    volume are well defined by the same fields as every other atom.
    """

    kind: str
    cube: DyadicCube
    orientation: Orientation = None

    def __post_init__(self):
        if self.kind not in ("constant", "wavelet"):
            raise ValueError(f"unknown atom kind: {self.kind!r}")
        if self.kind == "constant":
            if self.orientation is not None:
                raise ValueError("constant atom takes no orientation")
            if self.cube.level != 0:
                raise ValueError("constant atom is supported on the full domain")
        else:
            if self.orientation is None:
                raise ValueError("wavelet atom needs an orientation")
            if self.orientation.dim != self.cube.dim:
                raise ValueError("orientation and cube dimensions differ")

    @classmethod
    def constant(cls, dim: int) -> "HaarAtom":
        return cls("constant", DyadicCube(dim, 0, (0,) * dim))

    @classmethod
    def wavelet(cls, cube: DyadicCube, orientation: Orientation) -> "HaarAtom":
        return cls("wavelet", cube, orientation)

    @property
    def dim(self) -> int:
        return self.cube.dim

    @property
    def level(self) -> int:
        return self.cube.level

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"


def evaluate_atom(atom: HaarAtom, level: int) -> GridFunction:
    """Realize an atom exactly on the level-``level`` grid.

    A wavelet of level k needs its half-cubes resolvable, so k < level is
    required; the constant atom is valid on every grid.
    """
    d = atom.dim
    n = 1 << level
    if atom.is_constant:
        return GridFunction(d, level, np.ones(n ** d))
    k = atom.cube.level
    if k >= level:
        raise ValueError(
            f"wavelet of level {k} is not resolvable on a level-{level} grid")
    width = 1 << (level - k)
    half = width >> 1
    profiles = []
    for j, bit in zip(atom.cube.index, atom.orientation.bits):
        prof = np.zeros(n)
        start = j * width
        if bit:
            prof[start:start + half] = 1.0
            prof[start + half:start + width] = -1.0
        else:
            prof[start:start + width] = 1.0
        profiles.append(prof)
    scale = 2.0 ** (0.5 * k * d)
    return GridFunction(d, level, scale * _tensor_cells(profiles))


@lru_cache(maxsize=None)
def dictionary(dim: int, level: int):
    """Every atom resolvable on the level-``level`` grid: the constant plus all
    wavelets of level < ``level``.

    The count is exactly 2^(level*dim), matching the cell count, and the
    order is deterministic: constant first, then by (level, corner index
    lexicographic, orientation lexicographic).
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if level < 0:
        raise ValueError("level must be >= 0")
    atoms = [HaarAtom.constant(dim)]
    for k in range(level):
        for index in product(range(1 << k), repeat=dim):
            cube = DyadicCube(dim, k, index)
            for o in orientations(dim):
                atoms.append(HaarAtom.wavelet(cube, o))
    return tuple(atoms)


def atom_lp_norm(atom: HaarAtom, p, coeff=1.0) -> float:
    """Closed-form L^p norm of coeff times an atom.

    A wavelet supported on a cube of volume v takes the two values
    +-|coeff| v^(-1/2) on halves of its cube, so its p-norm is
    |coeff| * v^(1/p - 1/2); the constant atom gives |coeff| (its cube has
    volume one, so the same formula covers it).
    """
    p = float(p)
    if not p > 0:
        raise ValueError("p must be positive")
    return abs(float(coeff)) * atom.cube.volume ** (1.0 / p - 0.5)
