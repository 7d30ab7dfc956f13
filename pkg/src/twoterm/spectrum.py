"""Bound-state energies from the hypergeometric quantization condition.

The source of truth is the termination condition A1 - A2 + 1 + D = -n. The
closed-form energy relations are obtained from it by eliminating A1 and are
kept as independent cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy.optimize import brentq

from .core import NATURAL, PotentialSpec, QuantumNumbers, SpinOrbit, UnitSystem
from .specfun import TerminatingHypergeometric


class InvalidCoefficients(ValueError):
    pass


class NoBoundState(LookupError):
    def __init__(self, quantum: QuantumNumbers, reason: str = "no sign change in the bound-state window"):
        self.quantum = quantum
        super().__init__(f"no bound state for {quantum}: {reason}")


class MultipleRoots(RuntimeError):
    def __init__(self, quantum: QuantumNumbers, roots: List[float]):
        self.quantum = quantum
        self.roots = list(roots)
        super().__init__(f"{len(roots)} admissible roots for {quantum}: {roots}")


@dataclass(frozen=True)
class SolverConfig:
    grid: int = 512
    tol: float = 1e-12
    margin: float = 1e-9
    # branch of the square root in D; -1 is only useful as an injected fault
    d_branch: int = 1

    def __post_init__(self):
        if self.grid < 64:
            raise ValueError(f"scan grid must have at least 64 points, got {self.grid}")
        if not self.tol > 0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")
        if not 0 < self.margin < 1:
            raise ValueError(f"window margin must lie in (0, 1), got {self.margin}")
        if self.d_branch not in (1, -1):
            raise ValueError("d_branch must be +1 or -1")


@dataclass(frozen=True)
class CoefficientSet:
    A1: float
    A2sq: float
    A3sq: float
    D: float
    coupling: float  # A2sq - A1**2, computed directly
    A1_real: bool
    A2_real: bool
    D_real: bool

    @property
    def valid(self) -> bool:
        return self.A1_real and self.A2_real and self.D_real

    @property
    def A2(self) -> float:
        return math.sqrt(self.A2sq) if self.A2_real else math.nan

    def require_valid(self):
        for name in ("A1_real", "A2_real", "D_real"):
            if not getattr(self, name):
                raise InvalidCoefficients(f"coefficient check {name} failed: {self}")


@dataclass(frozen=True)
class EnergyLevel:
    E: float
    quantum: QuantumNumbers
    residual: float
    coeffs: CoefficientSet
    bracket: Tuple[float, float]
    spec: PotentialSpec = field(repr=False, default=None)
    units: UnitSystem = field(repr=False, default=NATURAL)


def coefficients(
    spec: PotentialSpec,
    units: UnitSystem,
    quantum: QuantumNumbers,
    E: float,
    d_branch: int = 1,
) -> CoefficientSet:
    mc2 = spec.rest_energy(units)
    Q2 = units.Q**2
    b2 = spec.beta**2
    q = spec.q
    A1sq = Q2 * (mc2 - E) * (mc2 + E) / b2
    coupling = 2 * Q2 * (E + mc2) * (spec.V0 + spec.V1 / q) / (q * b2)
    A2sq = A1sq + coupling
    A3sq = quantum.angular_factor + 2 * Q2 * spec.V1 * (E + mc2) / (q * b2)
    disc = 0.25 + A3sq / q
    A1_real = A1sq >= 0
    D_real = disc >= 0
    return CoefficientSet(
        A1=math.sqrt(A1sq) if A1_real else math.nan,
        A2sq=A2sq,
        A3sq=A3sq,
        D=-0.5 + d_branch * math.sqrt(disc) if D_real else math.nan,
        coupling=coupling,
        A1_real=A1_real,
        A2_real=A2sq >= 0,
        D_real=D_real,
    )


def _residual(c: CoefficientSet, n: int) -> float:
    A2 = math.sqrt(c.A2sq)
    s = c.A1 + A2
    # A1 - A2 without cancellation when both are large (beta -> 0)
    diff = -c.coupling / s if s > 0 else c.A1 - A2
    return diff + 1.0 + c.D + n


def quantization_residual(
    spec: PotentialSpec, units: UnitSystem, quantum: QuantumNumbers, E: float, d_branch: int = 1
) -> float:
    """A1 - A2 + 1 + D + n; bound states are its roots."""
    c = coefficients(spec, units, quantum, E, d_branch)
    c.require_valid()
    return _residual(c, quantum.n)


def _node_count(spec: PotentialSpec, c: CoefficientSet, n: int) -> int:
    poly = TerminatingHypergeometric.build(n, -n + 2 * c.A2, 1 + 2 * c.A1)
    return len(poly.roots_in(0.0, min(spec.q, 1.0)))


def find_roots(
    spec: PotentialSpec,
    units: UnitSystem,
    quantum: QuantumNumbers,
    config: SolverConfig = SolverConfig(),
) -> List[Tuple[float, Tuple[float, float]]]:
    """Every sign change of the quantization residual in the bound-state
    window, refined by Brent's method. Returns (E, bracket) pairs."""
    mc2 = spec.rest_energy(units)
    edge = mc2 * (1 - config.margin)
    grid = np.linspace(-edge, edge, config.grid)
    vals = np.full(grid.size, np.nan)
    for i, E in enumerate(grid):
        c = coefficients(spec, units, quantum, E, config.d_branch)
        if c.valid:
            vals[i] = _residual(c, quantum.n)

    def f(E):
        return quantization_residual(spec, units, quantum, E, config.d_branch)

    found = []
    for i in range(grid.size - 1):
        a, b = vals[i], vals[i + 1]
        if not (np.isfinite(a) and np.isfinite(b)):
            continue
        if a == 0.0:
            found.append((float(grid[i]), (float(grid[i]), float(grid[i]))))
        elif a * b < 0:
            E = brentq(f, grid[i], grid[i + 1], xtol=config.tol * mc2, rtol=4 * np.finfo(float).eps)
            found.append((float(E), (float(grid[i]), float(grid[i + 1]))))
    if vals[-1] == 0.0:
        found.append((float(grid[-1]), (float(grid[-1]), float(grid[-1]))))
    return found


def solve_level(
    spec: PotentialSpec,
    units: UnitSystem,
    quantum: QuantumNumbers,
    config: SolverConfig = SolverConfig(),
) -> EnergyLevel:
    """The unique admissible root for ``quantum``.

    Raises NoBoundState when nothing qualifies and MultipleRoots when more
    than one normalizable root carries n polynomial nodes.
    """
    accepted = []
    for E, bracket in find_roots(spec, units, quantum, config):
        c = coefficients(spec, units, quantum, E, config.d_branch)
        if not (c.A1 > 0 and c.D > -1):
            continue
        if _node_count(spec, c, quantum.n) != quantum.n:
            continue
        accepted.append((E, bracket, c))
    if not accepted:
        raise NoBoundState(quantum)
    if len(accepted) > 1:
        raise MultipleRoots(quantum, [a[0] for a in accepted])
    E, bracket, c = accepted[0]
    return EnergyLevel(
        E=E,
        quantum=quantum,
        residual=_residual(c, quantum.n),
        coeffs=c,
        bracket=bracket,
        spec=spec,
        units=units,
    )


def closed_form_residual_kg(
    spec: PotentialSpec, units: UnitSystem, quantum: QuantumNumbers, E: float
) -> float:
    """(E^2 - m^2c^4) minus the energy relation obtained by eliminating A1.

    E^2 - m^2c^4 = (E + mc^2) W / q - [Q (E + mc^2) W / (q beta N)]^2
                   - (N beta / 2Q)^2,   W = V0 + V1/q,  N = n + 1 + D.
    """
    c = coefficients(spec, units, quantum, E)
    c.require_valid()
    mc2 = spec.rest_energy(units)
    Q, beta, q = units.Q, spec.beta, spec.q
    W = spec.V0 + spec.V1 / q
    N = quantum.n + 1 + c.D
    rhs = (E + mc2) * W / q - (Q * (E + mc2) * W / (q * beta * N)) ** 2 - (N * beta / (2 * Q)) ** 2
    return (E * E - mc2 * mc2) - rhs


def closed_form_residual_dirac(
    spec: PotentialSpec, units: UnitSystem, quantum: QuantumNumbers, E: float
) -> float:
    """Dirac energy relation in its expanded arrangement, left side minus zero."""
    if not isinstance(quantum.angular, SpinOrbit):
        raise TypeError("Dirac residual needs spin-orbit quantum numbers")
    c = coefficients(spec, units, quantum, E)
    c.require_valid()
    mc2 = spec.rest_energy(units)
    Q, beta, q = units.Q, spec.beta, spec.q
    W = spec.V0 + spec.V1 / q
    G = quantum.n + 0.5 + math.sqrt(0.25 + c.A3sq / q)
    return (
        E * E
        - E * W / q
        - mc2 * (W / q + mc2)
        + (Q * (E + mc2) * W / (q * beta * G)) ** 2
        + (G * beta / (2 * Q)) ** 2
    )


def manning_rosen_residual(A: float, alpha: float, b: float, m0: float, n: int, ell: int, E: float) -> float:
    """Natural-unit Manning-Rosen energy relation, left minus right."""
    S = A + alpha * (alpha - 1)
    G = n + 0.5 + math.sqrt(0.25 + ell * (ell + 1) + (E + m0) * alpha * (alpha - 1))
    rhs = (E + m0) * S / (2 * b * b) - ((E + m0) * S / (2 * b * G)) ** 2 - G * G / (4 * b * b)
    return (E * E - m0 * m0) - rhs


def hulthen_residual(V0: float, beta: float, m0: float, n: int, ell: int, E: float) -> float:
    """Natural-unit Hulthen energy relation, left minus right."""
    N = n + ell + 1
    rhs = (E + m0) * V0 - ((E + m0) * V0 / (beta * N)) ** 2 - beta * beta * N * N / 4
    return (E * E - m0 * m0) - rhs


def coulomb_energy(zeta: float, n: int, ell: int, m0: float = 1.0, units: UnitSystem = NATURAL) -> float:
    """E = mc^2 (1 - g)/(1 + g) with g = (Q zeta)^2 / (n + l + 1)^2."""
    if zeta < 0:
        raise ValueError(f"zeta must be non-negative, got {zeta}")
    g = (units.Q * zeta) ** 2 / (n + ell + 1) ** 2
    if g >= 1:
        raise ValueError(f"coupling too strong: (Q zeta / (n + l + 1))^2 = {g} >= 1")
    return m0 * units.c**2 * (1 - g) / (1 + g)
