import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twoterm.core import (
    NATURAL,
    PoleError,
    PotentialSpec,
    QuantumNumbers,
    UnitSystem,
    centrifugal_approx,
    coulomb_spec,
    hulthen_spec,
    manning_rosen_spec,
    potential_value,
)


def test_hulthen_point_value():
    spec = PotentialSpec(1.0, 0.0, 1.0, 1.0)
    assert potential_value(spec, math.log(2)) == pytest.approx(-1.0, rel=1e-15)


def test_zero_amplitudes_give_zero():
    spec = PotentialSpec(0.0, 0.0, 0.7, 0.4)
    assert potential_value(spec, np.linspace(0.1, 5, 7)).tolist() == [0.0] * 7


def test_potential_against_high_precision():
    spec = PotentialSpec(1.0, 2.0, 0.5, 1.0)
    with mp.workdps(40):
        y = mp.exp(-mp.mpf("0.5") * 3)
        ref = -y / (1 - y) + 2 * y**2 / (1 - y) ** 2
    assert potential_value(spec, 3.0) == pytest.approx(float(ref), rel=1e-14)


def test_surrogate_far_out():
    spec = PotentialSpec(0, 0, 1.0)
    y = math.exp(-10)
    assert centrifugal_approx(spec, 10.0) == pytest.approx(y / (1 - y) ** 2, rel=1e-15)


def test_surrogate_close_to_inverse_square_at_small_beta_r():
    spec = PotentialSpec(0, 0, 0.5)
    r = 0.1
    assert abs(centrifugal_approx(spec, r) * r * r - 1) < 0.01


def test_surrogate_ratio_tends_to_one_monotonically():
    spec = PotentialSpec(0, 0, 1.0)
    devs = [abs(centrifugal_approx(spec, x) * x * x - 1) for x in (1e-2, 1e-3, 1e-4)]
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 1e-8


@given(st.floats(0.01, 20), st.floats(0.01, 5), st.floats(0.01, 3))
def test_two_term_reduces_to_hulthen(r, beta, V0):
    spec = PotentialSpec(V0, 0.0, beta, 1.0)
    y = math.exp(-beta * r)
    assert potential_value(spec, r) == pytest.approx(-V0 * y / (1 - y), rel=1e-12)


@pytest.mark.parametrize("r", [0.5, 2.0, 7.0])
def test_coulomb_limit_pointwise(r):
    zeta = 0.3
    errs = [abs(potential_value(coulomb_spec(zeta, b), r) + zeta / r) for b in (1e-1, 1e-2, 1e-3)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-3 * zeta / r + 1e-3


def test_manning_rosen_parameters():
    assert manning_rosen_spec(2, 1, 1) == PotentialSpec(1.0, 0.0, 1.0, 1.0)
    s = manning_rosen_spec(2 * 4 * 0.3, 2, 2)
    assert (s.V0, s.V1, s.beta, s.q) == pytest.approx((0.3, 0.25, 0.5, 1.0))
    z = manning_rosen_spec(0, 0, 1)
    assert z.V0 == 0 and z.V1 == 0


def test_hulthen_spec():
    assert hulthen_spec(1, 0.2) == PotentialSpec(1.0, 0.0, 0.2, 1.0, 1.0)
    assert hulthen_spec(0, 1).V0 == 0


@pytest.mark.parametrize(
    "kwargs", [dict(V0=1, V1=0, beta=0), dict(V0=1, V1=0, beta=-1), dict(V0=1, V1=0, beta=1, q=0), dict(V0=1, V1=0, beta=1, m0=0)]
)
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        PotentialSpec(**kwargs)


def test_r_must_be_positive():
    with pytest.raises(ValueError):
        potential_value(PotentialSpec(1, 0, 1), 0.0)


def test_pole_for_q_above_one():
    spec = PotentialSpec(1, 0, 1.0, q=2.0)
    with pytest.raises(PoleError):
        potential_value(spec, math.log(2.0))


def test_angular_factors():
    assert QuantumNumbers.kg(0, 2).angular_factor == 6
    assert QuantumNumbers.dirac(0, 2, "upper").angular_factor == 2
    assert QuantumNumbers.dirac(0, 2, "lower").angular_factor == 6
    assert QuantumNumbers.dirac(0, -1, "upper").angular_factor == 2
    with pytest.raises(ValueError):
        QuantumNumbers.dirac(0, 0)
    with pytest.raises(ValueError):
        QuantumNumbers.kg(-1, 0)


def test_units():
    u = UnitSystem(hbar=2.0, c=3.0)
    assert u.Q == pytest.approx(1 / 6) and u.hbar_c == 6.0
    assert NATURAL.Q == 1.0
    with pytest.raises(ValueError):
        UnitSystem(hbar=0)
