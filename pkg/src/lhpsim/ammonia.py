"""Saturated-ammonia property correlations and the Antoine saturation relation.

Polynomial fits to saturated-ammonia reference-table data, valid for
-40 degC <= T <= 80 degC.  The polynomials take temperature in degC; every other
interface in this package works in kelvin, so conversions happen here and only here.

Correlations
------------
rho_l     saturated liquid density            kg/m^3
rho_v     saturated vapor density             kg/m^3
cp_l      saturated liquid heat capacity      J/(kg K)
cp_v      saturated vapor heat capacity       J/(kg K)   (unused by the model ODEs,
          provided for completeness; the energy balances eliminate it)
dh_v      specific heat of evaporation        J/kg
mu_l      liquid dynamic viscosity            Pa s
sigma     surface tension, power law in the    N/m
          reduced temperature 1 - T_K/405.50

Note on cp_l: the quadratic coefficient is 3.0e-2.  Transcriptions of this fit
sometimes drop the exponent and print a bare "3", which is off by 25-45 % against
tabulated ammonia data over 0-40 degC; 3.0e-2 reproduces the tables to <0.5 %.

The Antoine relation 10**(A - B/(C + T)) takes T in kelvin and returns Pa.  With
the constants below, the degC reading would put the singularity C + T = 0 at
38.15 degC and produce absurd pressures near room temperature, while the kelvin
reading matches published ammonia saturation data (~1.07 MPa at 300 K).
"""

import math
from dataclasses import dataclass

from ._jit import jit
from .errors import AntoineDomainError, ModelValidityError, PropertyRangeError

# Celsius/kelvin offset used throughout the package.
T_ZERO_C = 273.15

# Validity window of the property polynomials, degC.
T_MIN_C = -40.0
T_MAX_C = 80.0

# Ammonia critical temperature used by the surface-tension correlation, K.
T_CRIT_K = 405.50

# Specific gas constant of ammonia: 8.314462 J/(mol K) / 0.017031 kg/mol.
R_GAS_AMMONIA = 8.314462 / 0.017031  # J/(kg K)


@dataclass(frozen=True)
class AntoineParams:
    """Antoine constants (kelvin argument, Pa result) plus the specific gas constant."""

    A_wf: float = 9.394997
    B_wf: float = 879.9236
    C_wf: float = -38.15
    R_gas: float = R_GAS_AMMONIA  # J/(kg K)


AMMONIA_ANTOINE = AntoineParams()


@dataclass(frozen=True)
class SatProps:
    """Saturated-ammonia property bundle at one temperature."""

    rho_l: float   # kg/m^3
    rho_v: float   # kg/m^3
    cp_l: float    # J/(kg K)
    cp_v: float    # J/(kg K)
    dh_v: float    # J/kg
    mu_l: float    # Pa s
    sigma: float   # N/m


# ---------------------------------------------------------------------------
# Raw correlations (degC argument, no range guard; hot-path building blocks)
# ---------------------------------------------------------------------------

@jit
def rho_l_c(t):
    return -4e-5 * t * t * t - 0.0027 * t * t - 1.3522 * t + 638.57


@jit
def rho_v_c(t):
    return 1e-5 * t * t * t - 0.0017 * t * t + 0.1229 * t + 3.4553


@jit
def cp_l_c(t):
    return 5e-4 * t * t * t + 3e-2 * t * t + 5.6 * t + 4616.5


@jit
def cp_v_c(t):
    return 0.1 * t * t + 15.1 * t + 2680.8


@jit
def dh_v_c(t):
    return -3e-2 * t * t * t - 11.5 * t * t - 3572.3 * t + 1262300.0


@jit
def mu_l_c(t):
    poly = (-2e-8 * t**5 + 1e-6 * t**4 - 1e-4 * t**3
            + 0.0151 * t * t - 1.8665 * t + 170.1)
    return poly * 1e-6


@jit
def sigma_c(t):
    return 0.10175 * (1.0 - (t + T_ZERO_C) / T_CRIT_K) ** 1.21703


@jit
def antoine_p(T_kelvin, A_wf, B_wf, C_wf):
    return 10.0 ** (A_wf - B_wf / (C_wf + T_kelvin))


@jit
def antoine_T(p, A_wf, B_wf, C_wf):
    return -B_wf / (math.log10(p) - A_wf) - C_wf


# ---------------------------------------------------------------------------
# Guarded public operations
# ---------------------------------------------------------------------------

def _check_range(t_celsius, correlation):
    if not (T_MIN_C <= t_celsius <= T_MAX_C):
        raise PropertyRangeError(
            f"temperature {t_celsius:.3f} degC outside the validity range "
            f"[{T_MIN_C:.0f}, {T_MAX_C:.0f}] degC of the {correlation} correlation"
        )


def sat_props(t_celsius):
    """All saturated-ammonia correlations at `t_celsius` (degC).

    Raises PropertyRangeError outside [-40, 80] degC.
    """
    _check_range(t_celsius, "saturated-ammonia property")
    return SatProps(
        rho_l=rho_l_c(t_celsius),
        rho_v=rho_v_c(t_celsius),
        cp_l=cp_l_c(t_celsius),
        cp_v=cp_v_c(t_celsius),
        dh_v=dh_v_c(t_celsius),
        mu_l=mu_l_c(t_celsius),
        sigma=sigma_c(t_celsius),
    )


def sat_props_K(T_kelvin):
    """`sat_props` with a kelvin argument (package-internal convention)."""
    return sat_props(T_kelvin - T_ZERO_C)


def antoine_pressure(T_kelvin, params=AMMONIA_ANTOINE):
    """Saturation pressure 10**(A - B/(C + T)) in Pa, temperature in K.

    Raises AntoineDomainError at or beyond the C_wf + T = 0 singularity.
    """
    if params.C_wf + T_kelvin <= 0.0:
        raise AntoineDomainError(
            f"C_wf + T = {params.C_wf + T_kelvin:.6g} <= 0: saturation relation singular"
        )
    return antoine_p(T_kelvin, params.A_wf, params.B_wf, params.C_wf)


def antoine_temperature(p_pa, params=AMMONIA_ANTOINE):
    """Saturation temperature in K for pressure `p_pa` (Pa); inverse of antoine_pressure."""
    if p_pa <= 0.0:
        raise AntoineDomainError(f"pressure {p_pa:.6g} Pa <= 0: log10 undefined")
    if math.log10(p_pa) == params.A_wf:
        raise AntoineDomainError("log10(p) equals A_wf: inverse saturation relation singular")
    return antoine_T(p_pa, params.A_wf, params.B_wf, params.C_wf)


def drho_v_dT(T_kelvin, props, R_gas=R_GAS_AMMONIA):
    """Temperature sensitivity of the saturated vapor density, kg/(m^3 K).

    Ideal-gas vapor with the Clausius-Clapeyron slope for dp/dT:

        drho_v/dT = dh_v rho_l rho_v / (R T^2 (rho_l - rho_v)) - rho_v / T
    """
    if props.rho_l == props.rho_v:
        raise ModelValidityError("rho_l equals rho_v: phase densities degenerate")
    if T_kelvin <= 0.0:
        raise AntoineDomainError(f"absolute temperature {T_kelvin:.6g} K <= 0")
    return (props.dh_v * props.rho_l * props.rho_v
            / (R_gas * T_kelvin**2 * (props.rho_l - props.rho_v))
            - props.rho_v / T_kelvin)
