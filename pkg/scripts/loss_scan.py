"""Atomic decay vs. heralding probability and swapped-state fidelity.

At the canonical cavity point the photon loss is worst at gamma = kappa/sqrt(2);
for larger gamma the atom decouples, so loss recedes but the Faraday phase
contrast, and with it the fidelity, collapses.
"""
import argparse

import numpy as np

from faraday_swap import CavityParams, evaluate_point


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--gamma-max", type=float, default=3.0)
    parser.add_argument("--steps", type=int, default=16)
    args = parser.parse_args()

    base = CavityParams.canonical()
    print(f"{'gamma':>7} {'|r|':>7} {'P1':>7} {'F1':>7} {'P2':>7} {'F2':>7}")
    for gamma in np.linspace(0.0, args.gamma_max, args.steps):
        p = base.replace(gamma=float(gamma))
        one = evaluate_point(p, 1, "lossy")
        two = evaluate_point(p, 2, "lossy")
        print(
            f"{gamma:7.3f} {one.phases.mag_r:7.4f} {one.success_probability:7.4f} "
            f"{one.mean_fidelity:7.4f} {two.success_probability:7.4f} {two.mean_fidelity:7.4f}"
        )


if __name__ == "__main__":
    main()
