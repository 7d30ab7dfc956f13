"""Which sign of the (N beta / 2Q)^2 term reproduces the shooting spectrum?

The energy relation obtained by eliminating A1 from the termination
condition ends in  -(N beta / 2Q)^2  with N = n + 1 + D. This script also
solves the variant with a plus sign and compares both against Numerov
shooting on the same ODE. A second table checks the decay exponent of the
wavefunction: the shooting profile's log-slope at large r is compared with
-A1 beta and with -(A1 - 1) beta.

    python scripts/sign_adjudication.py [--betas 0.1 0.2]
"""

import argparse
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from twoterm.core import NATURAL, PotentialSpec, QuantumNumbers
from twoterm.oracle import ShootingProblem, numerov_solution, oracle_eigenvalue
from twoterm.spectrum import NoBoundState, coefficients, solve_level


@dataclass(frozen=True)
class Case:
    V0: float
    V1: float
    beta: float
    ell: int
    n: int


def relation(spec, qn, E, sign):
    c = coefficients(spec, NATURAL, qn, E)
    W = spec.V0 + spec.V1 / spec.q
    N = qn.n + 1 + c.D
    rhs = (E + 1) * W - ((E + 1) * W / (spec.beta * N)) ** 2 + sign * (N * spec.beta / 2) ** 2
    return (E * E - 1) - rhs


def nearest_root(spec, qn, sign, E_ref, grid=4000):
    Es = np.linspace(-1 + 1e-9, 1 - 1e-9, grid)
    f = np.array([relation(spec, qn, E, sign) for E in Es])
    roots = [brentq(lambda e: relation(spec, qn, e, sign), a, b, xtol=1e-15)
             for a, b, fa, fb in zip(Es[:-1], Es[1:], f[:-1], f[1:]) if fa * fb < 0]
    return min(roots, key=lambda r: abs(r - E_ref)) if roots else math.nan


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--betas", type=float, nargs="+", default=[0.1, 0.2])
    args = ap.parse_args()

    cases = [Case(V0, V1, b, ell, n) for b in args.betas for V0, V1 in ((1, 0), (1, 0.5), (0.5, 0.25))
             for ell in (0, 1) for n in (0, 1, 2)]
    print(f"{'V0':>4} {'V1':>5} {'beta':>5} {'l':>2} {'n':>2} {'E_shoot':>19} {'|minus - shoot|':>16} {'|plus - shoot|':>15}")
    worst = {"minus": 0.0, "plus": 0.0}
    rootless = {"minus": 0, "plus": 0}
    for cs in cases:
        spec, qn = PotentialSpec(cs.V0, cs.V1, cs.beta), QuantumNumbers.kg(cs.n, cs.ell)
        try:
            E_shoot = oracle_eigenvalue(ShootingProblem(spec, NATURAL, qn), cs.n).E
        except NoBoundState:
            continue
        d_minus = abs(nearest_root(spec, qn, -1, E_shoot) - E_shoot)
        d_plus = abs(nearest_root(spec, qn, +1, E_shoot) - E_shoot)
        for key, d in (("minus", d_minus), ("plus", d_plus)):
            if math.isnan(d):
                rootless[key] += 1
            else:
                worst[key] = max(worst[key], d)
        print(f"{cs.V0:4.1f} {cs.V1:5.2f} {cs.beta:5.2f} {cs.ell:2d} {cs.n:2d} {E_shoot:19.15f} {d_minus:16.3e} {d_plus:15.3e}")
    for key in ("minus", "plus"):
        print(f"{key} sign: worst deviation {worst[key]:.3e}, no root in the window for {rootless[key]} level(s)")

    print("\nlarge-r decay of the shooting profile")
    print(f"{'beta':>5} {'n':>2} {'slope':>12} {'-A1 beta':>12} {'-(A1-1) beta':>13}")
    for beta in args.betas:
        spec = PotentialSpec(1, 0.5, beta)
        for n in (0, 1):
            qn = QuantumNumbers.kg(n, 0)
            lvl = solve_level(spec, NATURAL, qn)
            r, u = numerov_solution(ShootingProblem(spec, NATURAL, qn, steps=80000), lvl.E)
            mask = (r > 10 / beta) & (r < 20 / beta)
            slope = np.polyfit(r[mask], np.log(np.abs(u[mask])), 1)[0]
            A1 = lvl.coeffs.A1
            print(f"{beta:5.2f} {n:2d} {slope:12.6f} {-A1 * beta:12.6f} {-(A1 - 1) * beta:13.6f}")


if __name__ == "__main__":
    main()
