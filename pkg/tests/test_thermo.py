import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dustflame.core import IF, IN, IO, IP, SpeciesTable
from dustflame.errors import ConsistencyError, DomainError
from dustflame.thermo import (
    MixtureSample,
    adiabatic_flame_temperature,
    complete_combustion,
    eos_density,
    mixture_cp,
    reduced_z,
    sample_density,
    total_enthalpy,
    y_O_from_z,
)

SP = SpeciesTable()
P = 101325.0
FRESH = (0.4, 0.4, 0.0, 0.2)
BURNT = (0.0, 0.0, 0.8, 0.2)

# Hand-evaluated: 1 / (0.6 R 300 / (P 0.02) + 0.4 / 100)
RHO_FRESH_300 = 1.346764157372233
# Enthalpy balance: (1800 * 300 + 2e5 + 2.6e6) / 3800
THETA_AD = 878.9473684210526
# P 0.02 / (R THETA_AD), gas only
RHO_BURNT = 0.27729821750111666


def test_fresh_density_oracle():
    assert sample_density(MixtureSample(FRESH, 300.0), SP, P) == pytest.approx(RHO_FRESH_300, rel=1e-14)


def test_burnt_density_oracle():
    assert sample_density(MixtureSample(BURNT, THETA_AD), SP, P) == pytest.approx(RHO_BURNT, rel=1e-14)


def test_density_vectorised_matches_scalar():
    y = np.array([FRESH, BURNT]).T
    theta = np.array([300.0, THETA_AD])
    np.testing.assert_allclose(eos_density(y, theta, SP, P), [RHO_FRESH_300, RHO_BURNT], rtol=1e-14)


def test_pure_solid_fuel_density_is_rho_F():
    assert sample_density(MixtureSample((1, 0, 0, 0), 500.0), SP, P) == pytest.approx(100.0)


def test_density_rejects_bad_temperature():
    with pytest.raises(DomainError):
        eos_density(np.array(FRESH), 0.0, SP, P)


def test_sample_validation():
    with pytest.raises(DomainError):
        MixtureSample((0.5, 0.5, 0.5, 0.0), 300.0)
    with pytest.raises(DomainError):
        MixtureSample(FRESH, -1.0)


def test_mixture_cp_values():
    assert mixture_cp(np.array(FRESH), SP) == pytest.approx(1800.0)
    assert mixture_cp(np.array(BURNT), SP) == pytest.approx(3800.0)


def test_adiabatic_temperature_oracle():
    y_b, theta_b = adiabatic_flame_temperature(MixtureSample(FRESH, 300.0), SP)
    np.testing.assert_allclose(y_b, BURNT, atol=1e-15)
    assert theta_b == pytest.approx(THETA_AD, rel=1e-13)


def test_adiabatic_temperature_conserves_enthalpy():
    y_b, theta_b = adiabatic_flame_temperature(MixtureSample(FRESH, 300.0), SP)
    assert total_enthalpy(y_b, theta_b, SP) == pytest.approx(total_enthalpy(np.array(FRESH), 300.0, SP))


def test_adiabatic_of_inert_mixture_is_identity():
    y_b, theta_b = adiabatic_flame_temperature(MixtureSample((0, 0, 0.3, 0.7), 450.0), SP)
    assert theta_b == pytest.approx(450.0)


def test_adiabatic_raises_when_burnt_temperature_negative():
    hot_products = SpeciesTable(dh=(1e6, -2e6, 4e8, 3e6))
    with pytest.raises(DomainError):
        adiabatic_flame_temperature(MixtureSample(FRESH, 300.0), hot_products)


def test_lean_mixture_keeps_excess_oxidant():
    y_b = complete_combustion(np.array([0.1, 0.5, 0.0, 0.4]), SP)
    np.testing.assert_allclose(y_b, [0.0, 0.4, 0.2, 0.4], atol=1e-15)


def test_stoichiometric_z_is_half():
    assert reduced_z(0.4, 0.4, SP) == pytest.approx(0.5)


fractions = st.floats(0.0, 1.0, allow_nan=False)


@given(fractions, fractions)
def test_z_inverse_roundtrip(y_F, y_O):
    z = reduced_z(y_F, y_O, SP)
    assert y_O_from_z(z, y_F, SP) == pytest.approx(y_O, abs=1e-14)


@given(fractions, fractions)
def test_z_is_invariant_under_reaction(y_F, extent):
    # burning mass m of F burns s m of O; z must not change
    y_O = 1.0 - y_F
    m = extent * min(y_F, y_O / SP.s)
    assert reduced_z(y_F - m, y_O - SP.s * m, SP) == pytest.approx(reduced_z(y_F, y_O, SP), abs=1e-14)


def test_y_O_from_z_raises_beyond_tolerance():
    with pytest.raises(ConsistencyError):
        y_O_from_z(0.9, 0.0, SP)


def test_y_O_from_z_clips_roundoff():
    z = reduced_z(0.2, 0.0, SP) + 1e-12
    assert y_O_from_z(z, 0.2, SP) == 0.0


@given(st.lists(st.floats(0.01, 1.0), min_size=4, max_size=4), st.floats(200.0, 3000.0))
def test_density_positive_and_decreasing_in_temperature(raw, theta):
    y = np.array(raw) / sum(raw)
    r1 = eos_density(y, theta, SP, P)
    r2 = eos_density(y, theta * 1.5, SP, P)
    assert r1 > 0 and r2 <= r1


def test_species_indices():
    assert (IF, IO, IP, IN) == (0, 1, 2, 3)
    assert math.isclose(SP.s, 1.0)
