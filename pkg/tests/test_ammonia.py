"""Property correlations and the saturation relation against independent oracles."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lhpsim.ammonia import (
    AMMONIA_ANTOINE,
    AntoineParams,
    R_GAS_AMMONIA,
    SatProps,
    T_ZERO_C,
    antoine_pressure,
    antoine_temperature,
    drho_v_dT,
    sat_props,
    sat_props_K,
)
from lhpsim.errors import AntoineDomainError, PropertyRangeError

mpmath.mp.dps = 50


def test_constant_terms_at_zero_celsius():
    # At 0 degC every polynomial reduces to its constant term.
    p = sat_props(0.0)
    assert p.rho_l == 638.57
    assert p.rho_v == 3.4553
    assert p.cp_l == 4616.5
    assert p.cp_v == 2680.8
    assert p.dh_v == 1262300.0
    assert p.mu_l == 170.1e-6


def test_sigma_at_27C_against_extended_precision():
    t = 27.0
    oracle = mpmath.mpf("0.10175") * (1 - (mpmath.mpf(t) + mpmath.mpf("273.15"))
                                      / mpmath.mpf("405.50")) ** mpmath.mpf("1.21703")
    got = sat_props(t).sigma
    assert abs(got / float(oracle) - 1) < 1e-12
    assert got == pytest.approx(0.0197, abs=2e-4)


def test_cp_l_tracks_reference_ammonia_data():
    # Saturated-liquid heat capacity of ammonia (reference tables, J/(kg K)).
    table = {0.0: 4617.0, 20.0: 4745.0, 40.0: 4927.0}
    for t, ref in table.items():
        assert sat_props(t).cp_l == pytest.approx(ref, rel=0.015)


def test_density_ordering_over_model_range():
    for t in np.linspace(-20.0, 60.0, 81):
        p = sat_props(float(t))
        assert p.rho_l > p.rho_v > 0.0
        assert p.dh_v > 0.0 and p.sigma > 0.0 and p.mu_l > 0.0 and p.cp_l > 0.0


def test_out_of_range_raises_with_correlation_name():
    with pytest.raises(PropertyRangeError, match="saturated-ammonia"):
        sat_props(-41.0)
    with pytest.raises(PropertyRangeError):
        sat_props(80.5)


def test_sat_props_deterministic():
    a = sat_props(13.372)
    b = sat_props(13.372)
    assert a == b


def test_antoine_pressure_at_300K():
    # Direct-evaluation oracle; the kelvin-argument reading lands near the
    # published ammonia saturation pressure (~1.07 MPa at 300 K).
    T = 300.15
    a = AMMONIA_ANTOINE
    oracle = float(mpmath.mpf(10) ** (mpmath.mpf("9.394997")
                                      - mpmath.mpf("879.9236")
                                      / (mpmath.mpf("-38.15") + mpmath.mpf(T))))
    got = antoine_pressure(T)
    assert abs(got / oracle - 1) < 1e-13
    assert got == pytest.approx(1.088e6, rel=2e-3)
    assert 1.00e6 < got < 1.15e6   # cross-check against published data


def test_antoine_limit_is_10_to_A():
    # B -> 0 removes the temperature dependence entirely.
    params = AntoineParams(A_wf=9.394997, B_wf=1e-12, C_wf=-38.15)
    assert antoine_pressure(300.0, params) == pytest.approx(10.0 ** 9.394997, rel=1e-12)


def test_antoine_temperature_against_bisection():
    p_target = 1.0e6

    lo, hi = 250.0, 350.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if antoine_pressure(mid) < p_target:
            lo = mid
        else:
            hi = mid
    oracle = 0.5 * (lo + hi)
    got = antoine_temperature(p_target)
    assert got == pytest.approx(oracle, abs=1e-9)
    assert got == pytest.approx(297.332, abs=0.01)


def test_antoine_domain_errors():
    with pytest.raises(AntoineDomainError):
        antoine_temperature(0.0)
    with pytest.raises(AntoineDomainError):
        antoine_temperature(-5.0)
    with pytest.raises(AntoineDomainError):
        antoine_pressure(38.0)   # C_wf + T <= 0


@settings(deadline=None, max_examples=60)
@given(st.floats(min_value=0.05e6, max_value=3e6))
def test_antoine_round_trip(p):
    T = antoine_temperature(p)
    assert antoine_pressure(T) == pytest.approx(p, rel=1e-10)


@settings(deadline=None, max_examples=60)
@given(st.floats(min_value=233.15, max_value=353.15),
       st.floats(min_value=1e-3, max_value=20.0))
def test_antoine_strictly_increasing(T, dT):
    assert antoine_pressure(T + dT) > antoine_pressure(T)


def test_round_trip_from_temperature():
    p = antoine_pressure(300.15)
    assert antoine_temperature(p) == pytest.approx(300.15, rel=1e-10)


# ---------------------------------------------------------------------------
# Vapor-density temperature sensitivity
# ---------------------------------------------------------------------------

def test_drho_v_dT_zero_evaporation_limit():
    props = SatProps(rho_l=600.0, rho_v=5.0, cp_l=4700.0, cp_v=2800.0,
                     dh_v=0.0, mu_l=1.7e-4, sigma=0.02)
    got = drho_v_dT(300.0, props)
    assert got == pytest.approx(-5.0 / 300.0, rel=1e-14)


def test_drho_v_dT_dilute_vapor_limit():
    props = SatProps(rho_l=600.0, rho_v=600.0e-9, cp_l=4700.0, cp_v=2800.0,
                     dh_v=1.2e6, mu_l=1.7e-4, sigma=0.02)
    T = 300.0
    got = drho_v_dT(T, props)
    approx = props.rho_v * (props.dh_v / (R_GAS_AMMONIA * T * T) - 1.0 / T)
    assert got == pytest.approx(approx, rel=1e-6)


def test_drho_v_dT_structural_identity_with_consistent_inputs():
    # With an ideal-gas vapor density and an evaporation enthalpy chosen so the
    # Clausius slope equals the saturation-curve slope, the formula must equal
    # the finite difference of p_sat/(R T) (the construction it came from).
    T = 300.15
    h = 1e-3
    R = R_GAS_AMMONIA
    p = antoine_pressure(T)
    dpdT = (antoine_pressure(T + h) - antoine_pressure(T - h)) / (2 * h)
    rho_v = p / (R * T)
    rho_l = 599.305
    dh_consistent = dpdT * T * (1.0 / rho_v - 1.0 / rho_l)
    props = SatProps(rho_l=rho_l, rho_v=rho_v, cp_l=4700.0, cp_v=2800.0,
                     dh_v=dh_consistent, mu_l=1.7e-4, sigma=0.02)
    fd = ((antoine_pressure(T + h) / (R * (T + h)))
          - (antoine_pressure(T - h) / (R * (T - h)))) / (2 * h)
    assert drho_v_dT(T, props) == pytest.approx(fd, rel=1e-7)


def test_drho_v_dT_at_27C_against_extended_precision():
    props = sat_props(27.0)
    T = mpmath.mpf("300.15")
    rl, rv, dh = (mpmath.mpf(repr(props.rho_l)), mpmath.mpf(repr(props.rho_v)),
                  mpmath.mpf(repr(props.dh_v)))
    R = mpmath.mpf(repr(R_GAS_AMMONIA))
    oracle = dh * rl * rv / (R * T ** 2 * (rl - rv)) - rv / T
    got = drho_v_dT(300.15, props)
    assert abs(got / float(oracle) - 1) < 1e-12


def test_drho_v_dT_degenerate_densities():
    from lhpsim.errors import ModelValidityError
    props = SatProps(rho_l=5.0, rho_v=5.0, cp_l=4700.0, cp_v=2800.0,
                     dh_v=1.2e6, mu_l=1.7e-4, sigma=0.02)
    with pytest.raises(ModelValidityError):
        drho_v_dT(300.0, props)


def test_clausius_clapeyron_consistency_band():
    """The saturation-curve slope and the Clausius slope from the property
    polynomials agree within 10 % only up to ~12 degC; beyond that the vapor
    density polynomial flattens and the mismatch grows (~45 % at 40 degC).
    Both bands are asserted to keep the divergence visible."""
    h = 1e-3

    def slopes(tC):
        T = tC + T_ZERO_C
        dpdT = (antoine_pressure(T + h) - antoine_pressure(T - h)) / (2 * h)
        p = sat_props(tC)
        clausius = p.dh_v / (T * (1.0 / p.rho_v - 1.0 / p.rho_l))
        return dpdT, clausius

    for tC in np.linspace(0.0, 10.0, 11):
        dpdT, clausius = slopes(float(tC))
        assert abs(clausius / dpdT - 1) < 0.10
    for tC in np.linspace(0.0, 40.0, 21):
        dpdT, clausius = slopes(float(tC))
        assert abs(clausius / dpdT - 1) < 0.50


def test_sat_props_K_matches_celsius():
    assert sat_props_K(T_ZERO_C + 12.5) == sat_props(12.5)
