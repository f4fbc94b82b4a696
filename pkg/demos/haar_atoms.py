"""Tour of the tensor Haar dictionary on the unit cube.

Prints every atom of a small univariate dictionary with its cell values,
checks orthonormality numerically, and shows the three sign patterns that
make up the planar system at the coarsest level.
"""

import numpy as np

from haargreedy import dictionary, evaluate_atom, orientations


def describe(atom):
    if atom.is_constant:
        return "constant"
    bits = "".join(str(b) for b in atom.orientation.bits)
    return f"level {atom.level}, corner {tuple(atom.cube.index)}, orientation {bits}"


def main():
    level = 2
    atoms = dictionary(1, level)
    print(f"univariate dictionary at resolution J={level}: {len(atoms)} atoms")
    for atom in atoms:
        values = evaluate_atom(atom, level).values
        cells = "  ".join(f"{v:+.4f}" for v in values)
        print(f"  {describe(atom):40s} [{cells}]")

    rows = np.stack([evaluate_atom(a, level).values for a in atoms])
    gram = rows @ rows.T / rows.shape[1]  # uniform cell measure
    print(f"\nGram matrix deviation from identity: "
          f"{np.max(np.abs(gram - np.eye(len(atoms)))):.2e}")

    print("\nplanar atoms at level 0 (quadrant sign patterns):")
    for orientation in orientations(2):
        atom = [a for a in dictionary(2, 1)
                if not a.is_constant and a.orientation == orientation][0]
        values = evaluate_atom(atom, 1).values
        bits = "".join(str(b) for b in orientation.bits)
        print(f"  orientation {bits}:")
        # cell order is axis-1 fastest, so row 1 of the square prints second
        for row in (values[:2], values[2:]):
            print("    " + "  ".join(f"{v:+.1f}" for v in row))


if __name__ == "__main__":
    main()
