"""Loop-heat-pipe simulation, parameter identification, and heater control."""

from .ammonia import (
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
from .control import (
    ControlLog,
    ControlRecord,
    ControllerConfig,
    DisturbanceProfile,
    closed_loop,
    control_law,
)
from .defaults import (
    DEFAULT_GEOMETRY,
    DEFAULT_PARAMS,
    DEFAULT_T_CC_IN_OP,
    REFERENCE_COEFFS,
    REFERENCE_INPUTS,
    REFERENCE_STATE,
    REFERENCE_T_COND,
    REFERENCE_T_COND_OUT,
    REFERENCE_T_EVAP,
    T_SET_DEFAULT,
)
from .engine import (
    Event,
    InputProfile,
    IntegratorOptions,
    Trajectory,
    find_equilibrium,
    find_heater_equilibrium,
    integrate,
)
from .identify import (
    IdentifiedParams,
    OperatingPoint,
    SolverConfig,
    clamp_condenser_outlet,
    friction_pressure_loss,
    identify,
)
from .model import (
    AuxCache,
    AuxOutputs,
    ExogenousInputs,
    Geometry,
    LhpState,
    LumpedParams,
    T_AMB_DEFAULT,
    capillary_pressure,
    cc_coefficients,
    cc_energy_denominator,
    condenser_chain,
    evaporator_chain,
    fast_mode_rate,
    liquid_line_outlet,
    reynolds_number,
    state_derivatives,
    steady_state_residual,
    vapor_mass_flow,
    wick_heat_leak,
)
from .scenarios import Metrics, compute_metrics, props_table

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
