"""Closed-form radial wavefunctions and their normalization.

With z = q exp(-beta r) the regular, decaying solution is

    u(z) = N z**A1 (1 - z)**(1 + D) 2F1(-n, -n + 2 A2; 1 + 2 A1; z).

The z-power is A1: it is the indicial exponent at z = 0 and the only choice
for which u decays as exp(-A1 beta r).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .core import PoleError, PotentialSpec, SpinOrbit, UnitSystem
from .spectrum import EnergyLevel
from .specfun import TerminatingHypergeometric, graded_breakpoints, integrate, ln_gamma

NORM_TOL = 1e-8


class NotNormalizable(ValueError):
    pass


@dataclass(frozen=True)
class RadialFunction:
    kind: str  # "kg_u", "dirac_f" or "dirac_g"
    A1: float
    D: float
    poly: TerminatingHypergeometric
    norm: float
    beta: float
    q: float
    E: float
    norm_method: str = "closed_form"
    norm_deviation: float = 0.0
    kappa: Optional[int] = None
    lower_factor: float = 0.0  # hbar c / (m c^2 + E), used by dirac_g only

    @property
    def n(self) -> int:
        return self.poly.n

    @property
    def exponents(self) -> Tuple[float, float]:
        return self.A1, 1.0 + self.D

    @property
    def z_max(self) -> float:
        return min(self.q, 1.0)

    def z_of_r(self, r):
        return self.q * np.exp(-self.beta * np.asarray(r, dtype=float))

    def r_of_z(self, z):
        return (math.log(self.q) - np.log(np.asarray(z, dtype=float))) / self.beta

    def _upper(self, r):
        """f(r) and df/dr for the z-power/(1-z)-power/polynomial product."""
        z = self.z_of_r(r)
        omz = -np.expm1(math.log(self.q) - self.beta * r)
        a, c = self.exponents
        base = self.norm * np.exp(a * np.log(z) + c * np.log(omz))
        p = self.poly(z)
        f = base * p
        # d/dr = -beta z d/dz
        dfdr = f * self.beta * (-a + c * z / omz) - self.beta * z * base * self.poly.derivative(z)
        return f, dfdr

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if r.size and np.any(r <= 0):
            raise ValueError("radial grid must be strictly positive")
        if r.size and np.any(self.z_of_r(r) >= 1.0):
            raise PoleError(f"r below ln(q)/beta = {math.log(self.q) / self.beta} lies outside the domain")
        f, dfdr = self._upper(r)
        if self.kind == "dirac_g":
            return self.lower_factor * (dfdr - self.kappa * f / r)
        return f


def norm_integral_closed_form(n: int, P: float, Qp: float) -> float:
    """Closed form of the integral over (0, 1) of
    z**P (1-z)**Qp [2F1(-n, n + P + Qp + 1; P + 2; z)]**2,  P > -1, Qp > 0.

        n! (n + Qp/2) G(n + Qp) G(P + 1) G(P + 2)
        -------------------------------------------------------
        (n + (P + Qp + 1)/2) G(n + P + 2) G(n + P + Qp + 1)
    """
    lg = (
        ln_gamma(n + 1)
        + math.log(n + Qp / 2)
        + ln_gamma(n + Qp)
        + ln_gamma(P + 1)
        + ln_gamma(P + 2)
        - math.log(n + (P + Qp + 1) / 2)
        - ln_gamma(n + P + 2)
        - ln_gamma(n + P + Qp + 1)
    )
    return math.exp(lg)


def _weighted_square_integral(poly: TerminatingHypergeometric, P: float, Qp: float, hi: float = 1.0) -> float:
    """Integral over (0, hi) of z**P (1-z)**Qp poly(z)**2.

    For -1 < P < 0 the variable is t = z**(P+1), which turns z**P dz into
    dt / (P+1) and removes the singularity at z = 0; otherwise t = z. 1 - z
    is formed as -expm1(log(t) / p), which keeps its relative accuracy next
    to z = 1.
    """
    if not P > -1:
        raise ValueError(f"the weight z**P is not integrable at 0 for P = {P}")
    p = min(P + 1.0, 1.0)
    rest = P + 1.0 - p  # power of z left over after the substitution

    def integrand(t):
        lz = np.log(t) / p
        omz = -np.expm1(lz)
        return np.exp(rest * lz + Qp * np.log(omz)) * poly(np.exp(lz)) ** 2 / p

    t_hi = hi**p
    pts = graded_breakpoints(0.0, t_hi, ratio=0.5, depth=60)
    return integrate(integrand, 0.0, t_hi, nodes=32, breakpoints=pts)


def norm_integral_quadrature(n: int, P: float, Qp: float) -> float:
    poly = TerminatingHypergeometric.build(n, n + P + Qp + 1, P + 2)
    return _weighted_square_integral(poly, P, Qp)


def normalization_constant(beta: float, n: int, A1: float, A2: float, D: float) -> float:
    """Closed-form N for q = 1:

    N^2 = beta (n + A1 + D + 1) G(n + 2A1 + 1) G(2A2 - n)
          / (n! (n + 1 + D) G(n + 2 + 2D) G(2A1) G(1 + 2A1))
    """
    lg = (
        math.log(beta)
        + math.log(n + A1 + D + 1)
        + ln_gamma(n + 2 * A1 + 1)
        + ln_gamma(2 * A2 - n)
        - ln_gamma(n + 1)
        - math.log(n + 1 + D)
        - ln_gamma(n + 2 + 2 * D)
        - ln_gamma(2 * A1)
        - ln_gamma(1 + 2 * A1)
    )
    return math.exp(0.5 * lg)


def _build(spec: PotentialSpec, level: EnergyLevel, kind: str) -> RadialFunction:
    c = level.coeffs
    n = level.quantum.n
    if not (c.A1 > 0):
        raise NotNormalizable(f"A1 = {c.A1} must be positive")
    if not (c.D > -1):
        raise NotNormalizable(f"D = {c.D} must exceed -1")
    A2 = c.A2
    poly = TerminatingHypergeometric.build(n, -n + 2 * A2, 1 + 2 * c.A1)
    P, Qp = 2 * c.A1 - 1, 2 + 2 * c.D
    zmax = min(spec.q, 1.0)
    integral = _weighted_square_integral(poly, P, Qp, hi=zmax) / spec.beta
    kappa = level.quantum.angular.kappa if isinstance(level.quantum.angular, SpinOrbit) else None
    common = dict(kind=kind, A1=c.A1, D=c.D, poly=poly, beta=spec.beta, q=spec.q, E=level.E, kappa=kappa)
    if spec.q == 1.0:
        N = normalization_constant(spec.beta, n, c.A1, A2, c.D)
        deviation = abs(N * N * integral - 1.0)
        if deviation <= NORM_TOL:
            return RadialFunction(norm=N, norm_method="closed_form", norm_deviation=deviation, **common)
    else:
        deviation = math.nan
    return RadialFunction(
        norm=1.0 / math.sqrt(integral), norm_method="quadrature", norm_deviation=deviation, **common
    )


def kg_wavefunction(spec: PotentialSpec, units: UnitSystem, level: EnergyLevel) -> RadialFunction:
    if level.quantum.is_dirac:
        raise TypeError("kg_wavefunction needs an orbital (KG) level")
    return _build(spec, level, "kg_u")


def dirac_upper(spec: PotentialSpec, units: UnitSystem, level: EnergyLevel) -> RadialFunction:
    a = level.quantum.angular
    if not (isinstance(a, SpinOrbit) and a.component == "upper"):
        raise TypeError("dirac_upper needs a Dirac level solved for the upper component")
    return _build(spec, level, "dirac_f")


def dirac_lower(
    spec: PotentialSpec, units: UnitSystem, level: EnergyLevel, upper: RadialFunction
) -> RadialFunction:
    """g = hbar c / (m c^2 + E) (d/dr - kappa/r) f, not renormalized."""
    if upper.kind != "dirac_f":
        raise TypeError("dirac_lower is built from a Dirac upper component")
    denom = spec.rest_energy(units) + level.E
    if abs(denom) <= 1e-12 * spec.rest_energy(units):
        raise ValueError("m c^2 + E vanishes; lower component is undefined")
    return replace(upper, kind="dirac_g", lower_factor=units.hbar_c / denom)


def square_norm(rf: RadialFunction) -> float:
    """Integral of rf(r)**2 over the radial domain, by quadrature.

    The variable is t = z**a with a = min(2 A1, 1): dr = -dt / (a beta t),
    and since the square decays like z**(2 A1) the integrand stays bounded
    at t = 0 even when A1 < 1/2.
    """
    a = min(2.0 * rf.A1, 1.0)
    log_q = math.log(rf.q)
    # stop where beta r = 1e-14 when q = 1; the region below it carries
    # mass of order r**(3 + 2D)
    r_lo = max(log_q, 0.0) / rf.beta + 1e-14 / rf.beta
    t_hi = math.exp(a * (log_q - rf.beta * r_lo))

    def integrand(t):
        r = (log_q - np.log(t) / a) / rf.beta
        return rf(r) ** 2 / (rf.beta * a * t)

    pts = graded_breakpoints(0.0, t_hi, ratio=0.5, depth=60)
    return integrate(integrand, 0.0, t_hi, nodes=32, breakpoints=pts)


def dirac_pair(
    spec: PotentialSpec, units: UnitSystem, level: EnergyLevel, joint_norm: bool = False
) -> Tuple[RadialFunction, RadialFunction]:
    """Upper and lower components. With ``joint_norm`` both are rescaled so
    that the integral of f**2 + g**2 is one."""
    f = dirac_upper(spec, units, level)
    g = dirac_lower(spec, units, level, f)
    if joint_norm:
        s = 1.0 / math.sqrt(square_norm(f) + square_norm(g))
        f = replace(f, norm=f.norm * s)
        g = replace(g, norm=g.norm * s)
    return f, g


def evaluate_on_grid(rf: RadialFunction, r_grid) -> np.ndarray:
    r = np.asarray(r_grid, dtype=float)
    if r.size == 0:
        return np.empty(0)
    vals = np.atleast_1d(rf(r))
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite wavefunction value on the grid")
    return vals


def count_nodes(rf: RadialFunction) -> int:
    """Interior zeros on the radial domain.

    For u and f the prefactors are positive on (0, z_max), so the count is
    the number of polynomial roots there. The lower component is sampled.
    """
    if rf.kind != "dirac_g":
        return len(rf.poly.roots_in(0.0, rf.z_max))
    z = np.linspace(0.0, rf.z_max, 20002)[1:-1]
    vals = rf(rf.r_of_z(z))
    signs = np.sign(vals[np.abs(vals) > 1e-300])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))
