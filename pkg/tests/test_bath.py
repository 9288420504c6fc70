import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from hybrid_coherence.bath import (
    BathParams, QuadratureConfig, QuadratureError, RateModel, Weight, bose_occupation,
    gamma_rates, hilbert_pv, principal_value_hilbert, spectral_density, spectral_width,
    upper_cutoff,
)

OHMIC = BathParams(gamma0=0.02, xi_c=1.0, s_exp=1.0)


def brute_force_pv(bath, weight, omega, dnu=1e-5, upper=60.0):
    """Midpoint sum on a grid whose cell edges straddle the pole symmetrically."""
    n_cells = int(round(upper / dnu))
    m = int(round(omega / dnu))
    nu = (np.arange(n_cells) + 0.5) * dnu
    w = spectral_density(bath, nu)
    if weight is Weight.ABSORPTION:
        w = w / np.expm1(bath.inv_temp * nu)
    elif weight is Weight.EMISSION and not bath.zero_temperature:
        w = w * (1 + 1 / np.expm1(bath.inv_temp * nu))
    return float(np.sum(w / (nu - m * dnu)) * dnu)


def ohmic_pv_closed_form(gamma0, omega):
    # P int_0^inf nu e^{1-nu} / (nu - omega) dnu = e (1 - omega e^{-omega} Ei(omega))
    return gamma0 * math.e * (1 - omega * math.exp(-omega) * special.expi(omega))


# --- spectral density -----------------------------------------------------------

def test_spectral_density_examples():
    assert spectral_density(OHMIC, 1.0) == pytest.approx(0.02, rel=1e-15)
    assert spectral_density(OHMIC, 0.0) == 0.0
    assert spectral_density(OHMIC, 0.5) == pytest.approx(0.02 * 0.5 * math.exp(0.5), rel=1e-14)
    assert spectral_density(OHMIC, 0.5) == pytest.approx(0.016487, abs=1e-6)


def test_spectral_density_rejects_negative_frequency():
    with pytest.raises(ValueError):
        spectral_density(OHMIC, -0.1)


@given(gamma0=st.floats(1e-4, 1.0), xi_c=st.floats(0.1, 5.0), s=st.floats(0.2, 3.0),
       x=st.floats(0.0, 30.0))
def test_spectral_density_nonnegative_with_peak_at_cutoff(gamma0, xi_c, s, x):
    bath = BathParams(gamma0=gamma0, xi_c=xi_c, s_exp=s)
    value = spectral_density(bath, x * xi_c)
    assert 0.0 <= value <= gamma0 * (1 + 1e-12)
    assert spectral_density(bath, xi_c) == pytest.approx(gamma0, rel=1e-14)


def test_bath_params_validation():
    with pytest.raises(ValueError):
        BathParams(gamma0=-0.1)
    with pytest.raises(ValueError):
        BathParams(xi_c=0.0)
    with pytest.raises(ValueError):
        BathParams(s_exp=0.0)
    with pytest.raises(ValueError):
        BathParams(inv_temp=-1.0)
    assert BathParams().zero_temperature
    assert BathParams(inv_temp=2.0).temperature == 0.5


# --- Bose occupation -------------------------------------------------------------

def test_bose_occupation_examples():
    assert bose_occupation(OHMIC, 0.7) == 0.0
    assert bose_occupation(BathParams(inv_temp=math.log(2)), 1.0) == pytest.approx(1.0, rel=1e-14)
    x = 0.01
    series = 1 / x - 0.5 + x / 12
    value = bose_occupation(BathParams(inv_temp=x), 1.0)
    assert value == pytest.approx(99.5008, abs=1e-4)
    assert value == pytest.approx(series, rel=1e-9)


def test_bose_occupation_domain_and_overflow():
    with pytest.raises(ValueError):
        bose_occupation(BathParams(inv_temp=1.0), 0.0)
    with pytest.raises(ValueError):
        bose_occupation(BathParams(inv_temp=1.0), -1.0)
    # deep in the frozen regime the occupation underflows cleanly to zero
    assert bose_occupation(BathParams(inv_temp=1e4), 1.0) == 0.0


# --- principal value ---------------------------------------------------------------

@pytest.mark.parametrize("omega", [0.5, 0.8, 1.0, 1.2])
def test_pv_matches_symmetric_grid_brute_force(omega):
    value = principal_value_hilbert(OHMIC, Weight.PLAIN, omega)
    reference = brute_force_pv(OHMIC, Weight.PLAIN, omega)
    assert value == pytest.approx(reference, rel=1e-6)


@pytest.mark.parametrize("omega", [0.05, 0.5, 0.8, 1.0, 1.2, 3.0, 10.0])
def test_pv_matches_exponential_integral_closed_form(omega):
    value = principal_value_hilbert(OHMIC, Weight.PLAIN, omega)
    assert value == pytest.approx(ohmic_pv_closed_form(0.02, omega), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("omega", [0.8, 1.2])
def test_thermal_pv_matches_brute_force(omega):
    bath = BathParams(gamma0=0.02, inv_temp=1.0)
    for weight in (Weight.EMISSION, Weight.ABSORPTION):
        value = principal_value_hilbert(bath, weight, omega)
        assert value == pytest.approx(brute_force_pv(bath, weight, omega), rel=1e-6)


def test_pv_of_symmetric_box_vanishes():
    omega, half = 0.7, 0.3
    box = lambda v: 1.0 if abs(v - omega) <= half else 0.0  # noqa: E731
    quad = QuadratureConfig(limit=800)
    assert abs(hilbert_pv(box, omega, 2.0, 0.1, quad)) < 1e-8


def test_pv_of_box_matches_logarithm():
    # P int_a^b dnu / (nu - omega) = ln((b - omega) / (omega - a))
    omega, a, b = 0.6, 0.2, 1.3
    box = lambda v: 1.0 if a <= v <= b else 0.0  # noqa: E731
    value = hilbert_pv(box, omega, 2.0, 0.05, QuadratureConfig(limit=800))
    assert value == pytest.approx(math.log((b - omega) / (omega - a)), rel=1e-8)


def test_absorption_pv_vanishes_at_zero_temperature():
    assert principal_value_hilbert(OHMIC, Weight.ABSORPTION, 1.0) == 0.0


def test_pv_rejects_nonpositive_frequency():
    with pytest.raises(ValueError):
        principal_value_hilbert(OHMIC, Weight.PLAIN, 0.0)


def test_quadrature_failure_carries_error_estimate():
    quad = QuadratureConfig(epsabs=1e-15, epsrel=1e-15, limit=3)
    wild = lambda v: math.sin(1 / v) if v > 0 else 0.0  # noqa: E731
    with pytest.raises(QuadratureError) as info:
        hilbert_pv(wild, 0.5, 1.0, 0.1, quad)
    assert info.value.error_estimate > 0


def test_sub_ohmic_absorption_weight_integrable_at_origin():
    # J n ~ nu^(s-1) near zero for s = 1/2; the integral must still converge
    bath = BathParams(gamma0=0.02, xi_c=3.0, s_exp=0.5, inv_temp=0.01)
    value = principal_value_hilbert(bath, Weight.ABSORPTION, 1.0)
    assert math.isfinite(value)
    # brute force in x = sqrt(nu), where the endpoint singularity is gone;
    # cell edges straddle the pole at x = 1 symmetrically
    dx = 1e-5
    x = (np.arange(int(round(12.5 / dx))) + 0.5) * dx
    nu = x * x
    integrand = spectral_density(bath, nu) / np.expm1(bath.inv_temp * nu) * 2 * x / (nu - 1.0)
    assert value == pytest.approx(float(np.sum(integrand) * dx), rel=1e-6)


def test_upper_cutoff_is_where_density_is_negligible():
    for s in (0.5, 1.0, 2.0):
        bath = BathParams(gamma0=1.0, xi_c=1.0, s_exp=s)
        nu = upper_cutoff(bath)
        cap = 1 + 40 / s
        assert nu == pytest.approx(cap) or spectral_density(bath, nu) == pytest.approx(1e-14, rel=1e-6)
        assert nu <= cap * (1 + 1e-12)


# --- rates -----------------------------------------------------------------------

def test_zero_temperature_rates():
    pair = gamma_rates(OHMIC, 1.0)
    assert pair.gamma_up == 0j
    assert pair.gamma_down.real == pytest.approx(0.02, rel=1e-14)
    assert pair.gamma_down.imag == pytest.approx(-ohmic_pv_closed_form(0.02, 1.0) / math.pi,
                                                 rel=1e-9)


@pytest.mark.parametrize("beta", [0.01, 0.3, 1.0, 5.0])
def test_emission_minus_absorption_is_density(beta):
    pair = gamma_rates(BathParams(gamma0=0.02, inv_temp=beta), 1.0)
    assert pair.gamma_down.real - pair.gamma_up.real == pytest.approx(0.02, rel=1e-10)
    assert pair.gamma_down.real >= 0 and pair.gamma_up.real >= 0


@settings(max_examples=40, deadline=None)
@given(beta=st.floats(1e-3, 20.0), omega=st.floats(0.05, 3.0), s=st.sampled_from([0.5, 1.0, 2.0]))
def test_detailed_balance(beta, omega, s):
    bath = BathParams(gamma0=0.05, xi_c=1.5, s_exp=s, inv_temp=beta)
    pair = gamma_rates(bath, omega, model=RateModel.NO_LAMB_SHIFT)
    assert pair.gamma_up.real == pytest.approx(pair.gamma_down.real * math.exp(-beta * omega),
                                               rel=1e-11)


def test_rate_models():
    bath = BathParams(gamma0=0.02, inv_temp=0.5)
    full = gamma_rates(bath, 0.8)
    nolamb = gamma_rates(bath, 0.8, model=RateModel.NO_LAMB_SHIFT)
    flat = gamma_rates(bath, 0.8, model=RateModel.FLAT)
    assert nolamb.gamma_down == full.gamma_down.real
    assert nolamb.gamma_up == full.gamma_up.real
    n = bose_occupation(bath, 0.8)
    assert flat.gamma_down == pytest.approx(0.02 * (n + 1), rel=1e-15)
    assert flat.gamma_up == pytest.approx(0.02 * n, rel=1e-15)


def test_rates_vanish_without_bath():
    pair = gamma_rates(BathParams(gamma0=0.0, inv_temp=1.0), 1.0)
    assert pair.gamma_down == 0 and pair.gamma_up == 0


# --- spectral width --------------------------------------------------------------

@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("xi_c", [1.0, 3.0])
def test_spectral_width_gamma_moment_closed_form(s, xi_c):
    bath = BathParams(gamma0=0.02, xi_c=xi_c, s_exp=s)
    assert spectral_width(bath) == pytest.approx(xi_c / s * math.sqrt(s + 1), rel=1e-8)


def test_spectral_width_sub_ohmic_value():
    width = spectral_width(BathParams(gamma0=0.02, xi_c=3.0, s_exp=0.5))
    assert width == pytest.approx(math.sqrt(54), rel=1e-10)
    # the quoted figure of 7.3 omega0 rounds this value
    assert round(width, 1) == 7.3


def test_spectral_width_scaling():
    w1 = spectral_width(BathParams(xi_c=1.0, s_exp=0.7))
    w2 = spectral_width(BathParams(xi_c=2.0, s_exp=0.7))
    assert w2 == pytest.approx(2 * w1, rel=1e-10)
    assert spectral_width(BathParams(s_exp=1.0)) == pytest.approx(math.sqrt(2), rel=1e-10)
