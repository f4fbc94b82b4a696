"""Greedy selection against the exhaustive best-m-term oracle.

Draws one random function on the square, runs both for every support size,
and plots the two error curves with the proved bound on their ratio.
Writes greedy_vs_oracle.png to the working directory.
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from haargreedy import (
    GridFunction,
    greedy_approximation,
    greedy_bound_constant,
    lp_norm,
    sigma_m,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p", type=float, default=1.5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-m", type=int, default=8)
    args = parser.parse_args()

    dim, level = 2, 2
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    g = GridFunction(dim, level, rng.standard_normal(1 << (dim * level)))
    constant = greedy_bound_constant(args.p, dim)
    print(f"random function on the square, {g.n_cells} cells, p = {args.p}")
    print(f"proved ratio bound: {constant:.2f}\n")

    ms = list(range(args.max_m + 1))
    greedy_errors, oracle_errors = [], []
    print(f"{'m':>3s} {'greedy':>12s} {'oracle':>12s} {'ratio':>8s}")
    for m in ms:
        approx, _ = greedy_approximation(g, args.p, m)
        err = lp_norm(g - approx, args.p)
        sig = sigma_m(g, args.p, m, jobs=4).sigma
        greedy_errors.append(err)
        oracle_errors.append(sig)
        ratio = f"{err / sig:8.4f}" if sig > 0 else "     n/a"
        print(f"{m:3d} {err:12.8f} {sig:12.8f} {ratio}")

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ms, greedy_errors, "o-", label="greedy")
    ax.plot(ms, oracle_errors, "s--", label="best m-term")
    ax.set_xlabel("m")
    ax.set_ylabel(f"L^{args.p} error")
    ax.set_title(f"greedy vs oracle, d=2, J=2, p={args.p}")
    ax.legend()
    fig.tight_layout()
    fig.savefig("greedy_vs_oracle.png", dpi=120)
    print("\nwrote greedy_vs_oracle.png")


if __name__ == "__main__":
    main()
