"""How far the exponential surrogate for 1/r^2 moves the spectrum.

Analytic energies (exact for the surrogate equation) are compared with
Numerov shooting on the equation that keeps the true l(l+1)/r^2 barrier.
The gap is an approximation error, not a solver error; it grows with beta
and with l, and vanishes for l = 0.

    python scripts/approximation_error.py [--V0 1 --V1 0.5]
"""

import argparse
from dataclasses import dataclass
from typing import Tuple

from twoterm.core import NATURAL, PotentialSpec, QuantumNumbers
from twoterm.oracle import ShootingProblem, oracle_eigenvalue, oracle_levels
from twoterm.spectrum import NoBoundState, solve_level


@dataclass
class Sweep:
    V0: float = 1.0
    V1: float = 0.5
    betas: Tuple[float, ...] = (0.025, 0.05, 0.1, 0.2, 0.3)
    ells: Tuple[int, ...] = (0, 1, 2, 3)
    ns: Tuple[int, ...] = (0, 1)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--V0", type=float, default=Sweep.V0)
    ap.add_argument("--V1", type=float, default=Sweep.V1)
    args = ap.parse_args()
    sw = Sweep(V0=args.V0, V1=args.V1)

    print(f"{'beta':>6} {'l':>2} {'n':>2} {'E_surrogate':>19} {'E_exact_barrier':>19} {'difference':>11}")
    for beta in sw.betas:
        spec = PotentialSpec(sw.V0, sw.V1, beta)
        for ell in sw.ells:
            prob = ShootingProblem(spec, NATURAL, QuantumNumbers.kg(0, ell), exact_centrifugal=True)
            levels = oracle_levels(prob)
            for n in sw.ns:
                qn = QuantumNumbers.kg(n, ell)
                try:
                    E_a = solve_level(spec, NATURAL, qn).E
                    E_x = oracle_eigenvalue(prob, n, levels=levels).E
                except NoBoundState:
                    print(f"{beta:6.3f} {ell:2d} {n:2d} {'unbound':>19}")
                    continue
                print(f"{beta:6.3f} {ell:2d} {n:2d} {E_a:19.15f} {E_x:19.15f} {E_a - E_x:11.3e}")


if __name__ == "__main__":
    main()
