"""Relativistic bound states of the two-term exponential potential.

Klein-Gordon and Dirac (equal scalar and vector coupling) radial problems with
the Pekeris-type centrifugal surrogate, solved through the terminating
hypergeometric quantization condition and cross-checked by Numerov shooting.
"""

from .core import (
    Orbital,
    PoleError,
    PotentialSpec,
    QuantumNumbers,
    SpinOrbit,
    UnitSystem,
    centrifugal_approx,
    coulomb_spec,
    hulthen_spec,
    manning_rosen_spec,
    potential_value,
)
from .spectrum import (
    CoefficientSet,
    EnergyLevel,
    MultipleRoots,
    NoBoundState,
    SolverConfig,
    coefficients,
    coulomb_energy,
    quantization_residual,
    solve_level,
)
from .wavefunction import (
    RadialFunction,
    count_nodes,
    dirac_lower,
    dirac_upper,
    evaluate_on_grid,
    kg_wavefunction,
)

__version__ = "0.1.0"

__all__ = [
    "CoefficientSet",
    "EnergyLevel",
    "MultipleRoots",
    "NoBoundState",
    "Orbital",
    "PoleError",
    "PotentialSpec",
    "QuantumNumbers",
    "RadialFunction",
    "SolverConfig",
    "SpinOrbit",
    "UnitSystem",
    "centrifugal_approx",
    "coefficients",
    "coulomb_energy",
    "coulomb_spec",
    "count_nodes",
    "dirac_lower",
    "dirac_upper",
    "evaluate_on_grid",
    "hulthen_spec",
    "kg_wavefunction",
    "manning_rosen_spec",
    "potential_value",
    "quantization_residual",
    "solve_level",
]
