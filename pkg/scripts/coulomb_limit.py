"""Hulthen levels with V0 = zeta beta approaching the Coulomb spectrum.

Prints |E(beta) - E_C| for a decade sweep of beta, where
E_C = (1 - g)/(1 + g), g = zeta^2 / (n + l + 1)^2, and the ratio of
successive errors (about 10 per decade when the error is linear in beta).

    python scripts/coulomb_limit.py [--zeta 0.15]
"""

import argparse

import numpy as np

from twoterm.core import NATURAL, QuantumNumbers, coulomb_spec
from twoterm.spectrum import coulomb_energy, solve_level


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--zeta", type=float, default=0.15)
    ap.add_argument("--decades", type=int, default=5)
    args = ap.parse_args()

    betas = 10.0 ** -np.arange(1, args.decades + 2)
    for ell in (0, 1):
        for n in (0, 1):
            target = coulomb_energy(args.zeta, n, ell)
            print(f"n={n} l={ell}  E_C = {target:.15f}")
            prev = None
            for beta in betas:
                try:
                    E = solve_level(coulomb_spec(args.zeta, beta), NATURAL, QuantumNumbers.kg(n, ell)).E
                except LookupError:
                    print(f"  beta={beta:8.1e}  unbound")
                    continue
                err = abs(E - target)
                ratio = f"{prev / err:8.2f}" if prev else ""
                print(f"  beta={beta:8.1e}  E={E:.15f}  |E-E_C|={err:.3e} {ratio}")
                prev = err


if __name__ == "__main__":
    main()
