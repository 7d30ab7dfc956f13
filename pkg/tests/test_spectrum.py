import math

import mpmath as mp
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy.optimize import brentq

from twoterm import spectrum
from twoterm.core import NATURAL, PotentialSpec, QuantumNumbers, UnitSystem, coulomb_spec
from twoterm.spectrum import (
    InvalidCoefficients,
    MultipleRoots,
    NoBoundState,
    SolverConfig,
    closed_form_residual_dirac,
    closed_form_residual_kg,
    coefficients,
    coulomb_energy,
    hulthen_residual,
    quantization_residual,
    solve_level,
)


def hulthen_s_wave_energies(V0, beta, n):
    """Roots of the Hulthen l = 0 relation, a quadratic in E, at 50 digits.

    With N = n + 1: (1 + a) E^2 + (2a - V0) E + (a - V0 - 1 + b) = 0,
    a = (V0 / (beta N))^2, b = (beta N)^2 / 4.
    """
    with mp.workdps(50):
        V0, beta = mp.mpf(V0), mp.mpf(beta)
        N = n + 1
        a = (V0 / (beta * N)) ** 2
        b = (beta * N) ** 2 / 4
        return sorted(float(r.real) for r in mp.polyroots([1 + a, 2 * a - V0, a - V0 - 1 + b]))


def test_coefficients_hand_values():
    c = coefficients(PotentialSpec(1, 0, 1), NATURAL, QuantumNumbers.kg(0, 0), 0.0)
    assert (c.A1, c.A2sq, c.A3sq, c.D) == pytest.approx((1.0, 3.0, 0.0, 0.0))
    free = coefficients(PotentialSpec(0, 0, 1), NATURAL, QuantumNumbers.kg(0, 0), 0.0)
    assert (free.A1, free.A2sq, free.A3sq, free.D) == (1.0, 1.0, 0.0, 0.0)


def test_dirac_kappa_one_matches_s_wave():
    spec = PotentialSpec(1, 0, 0.3)
    d = coefficients(spec, NATURAL, QuantumNumbers.dirac(0, 1), 0.2)
    k = coefficients(spec, NATURAL, QuantumNumbers.kg(0, 0), 0.2)
    assert d == k and d.A3sq == 0


def test_lower_component_uses_kappa_plus_one():
    spec = PotentialSpec(1, 0.5, 0.3)
    lower = coefficients(spec, NATURAL, QuantumNumbers.dirac(0, 2, "lower"), 0.1)
    kg = coefficients(spec, NATURAL, QuantumNumbers.kg(0, 2), 0.1)
    assert lower.A3sq == kg.A3sq


def test_residual_hand_value():
    r = quantization_residual(PotentialSpec(1, 0, 1), NATURAL, QuantumNumbers.kg(0, 0), 0.0)
    assert r == pytest.approx(2 - math.sqrt(3), abs=1e-15)


def test_residual_changes_sign_across_window():
    spec, qn = PotentialSpec(1, 0, 0.2), QuantumNumbers.kg(0, 0)
    assert quantization_residual(spec, NATURAL, qn, 1 - 1e-9) < 0 < quantization_residual(spec, NATURAL, qn, -1 + 1e-3)


def test_residual_outside_window_is_rejected():
    with pytest.raises(InvalidCoefficients):
        quantization_residual(PotentialSpec(1, 0, 0.2), NATURAL, QuantumNumbers.kg(0, 0), 1.5)


@pytest.mark.parametrize("n", [0, 1, 2])
@pytest.mark.parametrize("V0,beta", [(1.0, 0.2), (0.5, 0.1), (2.0, 0.3)])
def test_hulthen_s_wave_against_quadratic(V0, beta, n):
    lvl = solve_level(PotentialSpec(V0, 0, beta), NATURAL, QuantumNumbers.kg(n, 0))
    roots = hulthen_s_wave_energies(V0, beta, n)
    assert min(abs(lvl.E - r) for r in roots) < 1e-11
    assert abs(lvl.residual) < 1e-10


def test_known_level_residual():
    lvl = solve_level(PotentialSpec(1, 0.5, 0.2), NATURAL, QuantumNumbers.kg(0, 0))
    assert abs(quantization_residual(lvl.spec, NATURAL, lvl.quantum, lvl.E)) < 1e-10


def test_zero_potential_has_no_bound_state():
    with pytest.raises(NoBoundState) as info:
        solve_level(PotentialSpec(0, 0, 0.2), NATURAL, QuantumNumbers.kg(0, 0))
    assert info.value.quantum == QuantumNumbers.kg(0, 0)


def test_flipped_sqrt_branch_loses_levels():
    with pytest.raises(NoBoundState):
        solve_level(PotentialSpec(1, 0, 0.1), NATURAL, QuantumNumbers.kg(0, 0), SolverConfig(d_branch=-1))


def test_multiple_admissible_roots_are_reported(monkeypatch):
    spec, qn = PotentialSpec(1, 0, 0.2), QuantumNumbers.kg(0, 0)
    E = solve_level(spec, NATURAL, qn).E
    monkeypatch.setattr(spectrum, "find_roots", lambda *a, **k: [(E, (E, E)), (E, (E, E))])
    with pytest.raises(MultipleRoots) as info:
        solve_level(spec, NATURAL, qn)
    assert info.value.roots == [E, E]


@pytest.mark.parametrize("kwargs", [dict(grid=10), dict(tol=0), dict(margin=1.5), dict(d_branch=0)])
def test_solver_config_validation(kwargs):
    with pytest.raises(ValueError):
        SolverConfig(**kwargs)


def test_hulthen_towards_coulomb():
    target = coulomb_energy(0.15, 0, 0)
    E = solve_level(coulomb_spec(0.15, 1e-3), NATURAL, QuantumNumbers.kg(0, 0)).E
    assert abs(E - target) < 2e-4


def test_coulomb_energy_values():
    assert coulomb_energy(0.5, 0, 0) == pytest.approx(0.6)
    assert coulomb_energy(0.0, 3, 2) == 1.0
    assert coulomb_energy(0.3, 1, 1) == pytest.approx(0.99 / 1.01)
    with pytest.raises(ValueError):
        coulomb_energy(1.0, 0, 0)


def test_units_rescale_energy():
    # with hbar = 1, c = 2 the same dimensionless problem has E scaled by c^2 = 4
    u = UnitSystem(1.0, 2.0)
    spec = PotentialSpec(4.0 * 1.0, 0.0, 0.2 * 2.0, 1.0, 1.0)
    E_scaled = solve_level(spec, u, QuantumNumbers.kg(0, 0)).E
    E_nat = solve_level(PotentialSpec(1.0, 0.0, 0.2), NATURAL, QuantumNumbers.kg(0, 0)).E
    assert E_scaled == pytest.approx(4 * E_nat, rel=1e-11)


def test_deterministic():
    spec, qn = PotentialSpec(1, 0.5, 0.1), QuantumNumbers.kg(2, 1)
    assert solve_level(spec, NATURAL, qn) == solve_level(spec, NATURAL, qn)


bound_params = dict(
    V0=st.floats(0.3, 2.0), V1=st.floats(0.0, 1.0), beta=st.floats(0.05, 0.4),
    n=st.integers(0, 2), ell=st.integers(0, 2),
)


def _solve_or_skip(spec, qn):
    try:
        return solve_level(spec, NATURAL, qn)
    except NoBoundState:
        assume(False)


@given(**bound_params)
def test_closed_form_root_coincides(V0, V1, beta, n, ell):
    spec, qn = PotentialSpec(V0, V1, beta), QuantumNumbers.kg(n, ell)
    lvl = _solve_or_skip(spec, qn)
    assert -1 < lvl.E < 1
    assert abs(closed_form_residual_kg(spec, NATURAL, qn, lvl.E)) < 1e-9
    # the closed form, treated as its own equation, has the same root
    f = lambda E: closed_form_residual_kg(spec, NATURAL, qn, E)
    d = 1e-6
    lo, hi = max(lvl.E - d, -1 + 1e-12), min(lvl.E + d, 1 - 1e-12)
    assume(f(lo) * f(hi) < 0)
    E_cf = brentq(f, lo, hi, xtol=1e-15)
    assert abs(E_cf - lvl.E) < 1e-10


@given(**bound_params)
def test_dirac_upper_degenerate_with_kg(V0, V1, beta, n, ell):
    spec = PotentialSpec(V0, V1, beta)
    E_kg = _solve_or_skip(spec, QuantumNumbers.kg(n, ell)).E
    for kappa in {ell + 1, -ell} - {0}:
        lvl = solve_level(spec, NATURAL, QuantumNumbers.dirac(n, kappa))
        assert abs(lvl.E - E_kg) <= 1e-12
        assert abs(closed_form_residual_dirac(spec, NATURAL, lvl.quantum, lvl.E)) < 1e-9


@given(st.floats(0.3, 2.0), st.floats(0.05, 0.4), st.integers(0, 3), st.integers(0, 2))
def test_hulthen_closed_form(V0, beta, n, ell):
    # D = l exactly when V1 = 0, so the Hulthen relation carries N = n + l + 1
    lvl = _solve_or_skip(PotentialSpec(V0, 0, beta), QuantumNumbers.kg(n, ell))
    assert abs(hulthen_residual(V0, beta, 1.0, n, ell, lvl.E)) < 1e-9


@given(**bound_params)
def test_levels_rise_with_n(V0, V1, beta, n, ell):
    spec = PotentialSpec(V0, V1, beta)
    lo = _solve_or_skip(spec, QuantumNumbers.kg(n, ell))
    try:
        hi = solve_level(spec, NATURAL, QuantumNumbers.kg(n + 1, ell))
    except NoBoundState:
        return
    assert hi.E > lo.E


def test_closed_form_needs_spin_orbit():
    with pytest.raises(TypeError):
        closed_form_residual_dirac(PotentialSpec(1, 0, 0.2), NATURAL, QuantumNumbers.kg(0, 0), 0.3)


def test_general_q_level_is_a_root():
    spec = PotentialSpec(1.0, 0.3, 0.2, q=0.7)
    lvl = solve_level(spec, NATURAL, QuantumNumbers.kg(1, 1))
    assert abs(lvl.residual) < 1e-10
    assert abs(closed_form_residual_kg(spec, NATURAL, lvl.quantum, lvl.E)) < 1e-9
