"""Physical model: units, the two-term potential, quantum numbers and the
Pekeris-type surrogate for the centrifugal barrier."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np

POLE_TOL = 4 * np.finfo(float).eps


class PoleError(ValueError):
    """Raised when 1 - q exp(-beta r) vanishes (only reachable for q > 1)."""


@dataclass(frozen=True)
class UnitSystem:
    hbar: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.c > 0):
            raise ValueError(f"hbar and c must be positive, got {self.hbar}, {self.c}")

    @property
    def Q(self) -> float:
        """Inverse of hbar*c."""
        return 1.0 / (self.hbar * self.c)

    @property
    def hbar_c(self) -> float:
        return self.hbar * self.c


NATURAL = UnitSystem()


@dataclass(frozen=True)
class PotentialSpec:
    """Parameters of V(r) = -V0 y/(1 - q y) + V1 y^2/(1 - q y)^2, y = exp(-beta r)."""

    V0: float
    V1: float
    beta: float
    q: float = 1.0
    m0: float = 1.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not self.q > 0:
            raise ValueError(f"q must be positive, got {self.q}")
        if not self.m0 > 0:
            raise ValueError(f"m0 must be positive, got {self.m0}")

    def rest_energy(self, units: UnitSystem = NATURAL) -> float:
        return self.m0 * units.c**2


@dataclass(frozen=True)
class Orbital:
    ell: int

    def __post_init__(self):
        if self.ell < 0 or int(self.ell) != self.ell:
            raise ValueError(f"ell must be a non-negative integer, got {self.ell}")


@dataclass(frozen=True)
class SpinOrbit:
    kappa: int
    component: Literal["upper", "lower"] = "upper"

    def __post_init__(self):
        if self.kappa == 0 or int(self.kappa) != self.kappa:
            raise ValueError(f"kappa must be a nonzero integer, got {self.kappa}")
        if self.component not in ("upper", "lower"):
            raise ValueError(f"component must be 'upper' or 'lower', got {self.component!r}")


@dataclass(frozen=True)
class QuantumNumbers:
    n: int
    angular: Union[Orbital, SpinOrbit]

    def __post_init__(self):
        if self.n < 0 or int(self.n) != self.n:
            raise ValueError(f"n must be a non-negative integer, got {self.n}")

    @classmethod
    def kg(cls, n: int, ell: int) -> "QuantumNumbers":
        return cls(n, Orbital(ell))

    @classmethod
    def dirac(cls, n: int, kappa: int, component: str = "upper") -> "QuantumNumbers":
        return cls(n, SpinOrbit(kappa, component))

    @property
    def is_dirac(self) -> bool:
        return isinstance(self.angular, SpinOrbit)

    @property
    def angular_factor(self) -> int:
        """l(l+1) for KG, k(k-1) for the Dirac upper and k(k+1) for the lower component."""
        a = self.angular
        if isinstance(a, Orbital):
            return a.ell * (a.ell + 1)
        if a.component == "upper":
            return a.kappa * (a.kappa - 1)
        return a.kappa * (a.kappa + 1)

    @property
    def label(self) -> int:
        a = self.angular
        return a.ell if isinstance(a, Orbital) else a.kappa


def _screening(spec: PotentialSpec, r):
    """Return (exp(-beta r), 1 - q exp(-beta r)) with the pole checked."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("r must be strictly positive")
    y = np.exp(-spec.beta * r)
    # 1 - q e^{-br} = -expm1(ln q - b r), accurate near r -> 0 when q = 1
    d = -np.expm1(math.log(spec.q) - spec.beta * r)
    if np.any(np.abs(d) <= POLE_TOL):
        raise PoleError(f"potential pole at r = ln(q)/beta = {math.log(spec.q) / spec.beta}")
    return y, d


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def potential_value(spec: PotentialSpec, r):
    y, d = _screening(spec, r)
    v = -spec.V0 * y / d + spec.V1 * y * y / (d * d)
    return _scalar_or_array(v)


def centrifugal_approx(spec: PotentialSpec, r):
    """beta^2 e^{-beta r} / (1 - q e^{-beta r})^2, the stand-in for 1/r^2."""
    y, d = _screening(spec, r)
    return _scalar_or_array(spec.beta**2 * y / (d * d))


def manning_rosen_spec(A: float, alpha: float, b: float, m0: float = 1.0) -> PotentialSpec:
    if not b > 0:
        raise ValueError(f"b must be positive, got {b}")
    return PotentialSpec(
        V0=A / (2 * b * b),
        V1=alpha * (alpha - 1) / (2 * b * b),
        beta=1.0 / b,
        q=1.0,
        m0=m0,
    )


def hulthen_spec(V0: float, beta: float, m0: float = 1.0) -> PotentialSpec:
    return PotentialSpec(V0=V0, V1=0.0, beta=beta, q=1.0, m0=m0)


def coulomb_spec(zeta: float, beta: float, m0: float = 1.0) -> PotentialSpec:
    """Hulthen potential tending to -zeta/r as beta -> 0 (V0 = zeta * beta)."""
    return hulthen_spec(zeta * beta, beta, m0)
