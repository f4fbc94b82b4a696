"""Analyze a step function, inspect its coefficients, and reconstruct it."""

import numpy as np

from haargreedy import GridFunction, analyze, lp_norm, synthesize


def main():
    g = GridFunction(1, 2, [4.0, 2.0, 1.0, 1.0])
    print("input cells:", g.values.tolist())

    table = analyze(g)
    print("\ncoefficients against the dictionary:")
    for atom, coefficient, _ in table.entries:
        name = "constant" if atom.is_constant else \
            f"wavelet level {atom.level} corner {atom.cube.index[0]}"
        print(f"  {name:30s} {coefficient:+.10f}")

    back = synthesize(table)
    print("\nreconstruction:", back.values.tolist())
    print(f"max cell error: {np.max(np.abs(back.values - g.values)):.2e}")

    coefficient_norm = float(np.sqrt(np.sum(table.coefficients ** 2)))
    print(f"\nParseval: ||c||_2 = {coefficient_norm:.12f}, "
          f"||g||_2 = {lp_norm(g, 2.0):.12f}")

    # weighted norms |c| |I|^{1/p - 1/2} are the greedy ranking keys
    for p in (1.5, 2.0, 3.0):
        weights = analyze(g, p).weighted_norms
        order = np.argsort(-weights, kind="stable")
        print(f"p = {p}: ranking weights "
              + " > ".join(f"{weights[i]:.4f}" for i in order))


if __name__ == "__main__":
    main()
