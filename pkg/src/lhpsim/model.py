"""Four-state loop-heat-pipe model: algebraic chain and state derivatives.

States (SI):
    T_cc     compensation-chamber saturation temperature, K
    eta      length of the condenser two-phase region, m
    V_cc_l   liquid volume in the compensation chamber, m^3
    mdot_l   liquid mass flow in the return line, kg/s

Exogenous inputs: heat load Q_evap (W), sink temperature T_sink (K), and the
control-heater power Q_cc (W).  The ambient around the liquid line, T_amb,
is a fixed boundary condition (25 degC by default).

The right-hand side is assembled in one pass:

    evaporator:    p_cc -> p_evap = p_cc + dp_cap - dp_fri -> T_evap -> Q_wick
                   -> mdot_v from the evaporator energy balance
    condenser:     homogeneous two-phase density (mean void fraction),
                   interface mass flow mdot_star, saturation temperature T_cond
                   (mutually implicit; damped fixed point, seeded warm or from T_cc),
                   subcooled outlet T_cond_out (heat exchanger, implicit in its
                   own mean heat capacity)
    liquid line:   T_cc_in (heat exchanger against T_amb, implicit likewise)
    CC balances:   mass + energy collapsed to dT_cc/dt and dV_cc_l/dt through
                   the coefficients A, B, C, D
    momentum:      dmdot_l/dt over the liquid column (condenser subcooled
                   section + liquid line), laminar Hagen-Poiseuille friction

Properties are evaluated at the current subsystem temperatures; only the vapor
density keeps its temperature derivative (inside the CC coefficients).  The
liquid column viscosity uses the mean of T_cond_out and T_cc_in; the liquid
densities at the column ends use T_cond and T_cc_in respectively.

The model is only defined in variable conductance mode, 0 < eta < L_cond; the
right-hand side reports a mode-boundary error instead of clamping.

A note on time scales: the algebraic feedback T_cond(mdot_star) -> p_cond makes
the momentum equation stiff (fast eigenvalue ~ -5e3 1/s at the reference
operating point even though the CC pole is ~1/80 s).  `fast_mode_rate` returns
a closed-form estimate used by the integrators to pick stable explicit steps.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._jit import jit
from .ammonia import (
    AMMONIA_ANTOINE,
    AntoineParams,
    T_ZERO_C,
    antoine_pressure,
    antoine_temperature,
    cp_l_c,
    dh_v_c,
    mu_l_c,
    rho_l_c,
    rho_v_c,
    sigma_c,
)
from .errors import (
    AntoineDomainError,
    FixedPointError,
    ModeBoundaryError,
    ModelValidityError,
    PropertyRangeError,
)

T_AMB_DEFAULT = 25.0 + T_ZERO_C  # K, fixed ambient around the liquid line

# Operating range of the modeled hardware (soft guard: warn, don't fail).
Q_EVAP_RANGE = (20.0, 100.0)        # W
T_SINK_RANGE = (-15.0 + T_ZERO_C, 15.0 + T_ZERO_C)  # K
Q_CC_RANGE = (0.0, 10.0)            # W

_FP_TOL = 1e-12     # K, auxiliary fixed-point convergence (just above ulp at 300 K)
_FP_MAXIT = 80


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LhpState:
    """Model state vector."""

    T_cc: float     # K
    eta: float      # m
    V_cc_l: float   # m^3
    mdot_l: float   # kg/s

    def as_array(self):
        return np.array([self.T_cc, self.eta, self.V_cc_l, self.mdot_l])

    @staticmethod
    def from_array(x):
        return LhpState(float(x[0]), float(x[1]), float(x[2]), float(x[3]))


@dataclass(frozen=True)
class ExogenousInputs:
    """Disturbances plus the manipulated heater power."""

    Q_evap: float   # W
    T_sink: float   # K
    Q_cc: float     # W

    def as_array(self):
        return np.array([self.Q_evap, self.T_sink, self.Q_cc])

    def warn_if_outside_range(self):
        """Soft operating-range guard; warns instead of failing."""
        if not Q_EVAP_RANGE[0] <= self.Q_evap <= Q_EVAP_RANGE[1]:
            warnings.warn(f"Q_evap = {self.Q_evap:.3f} W outside the "
                          f"{Q_EVAP_RANGE} W operating range", stacklevel=2)
        if not T_SINK_RANGE[0] <= self.T_sink <= T_SINK_RANGE[1]:
            warnings.warn(f"T_sink = {self.T_sink - T_ZERO_C:.3f} degC outside the "
                          f"[-15, 15] degC operating range", stacklevel=2)
        if not Q_CC_RANGE[0] <= self.Q_cc <= Q_CC_RANGE[1]:
            warnings.warn(f"Q_cc = {self.Q_cc:.3f} W outside the "
                          f"{Q_CC_RANGE} W heater range", stacklevel=2)


@dataclass(frozen=True)
class Geometry:
    """Loop geometry.  A_c is always pi D_c^2 / 4."""

    V_cc: float       # m^3, total compensation-chamber volume
    L_cond: float     # m, condenser length
    L_ll: float       # m, liquid-line length
    D_c: float        # m, transport-line/condenser inner diameter
    R_p: float = 1e-6  # m, wick pore radius
    theta: float = 0.0  # rad, contact angle (0 = maximum capillary pressure)

    def __post_init__(self):
        for name in ("V_cc", "L_cond", "L_ll", "D_c", "R_p"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"Geometry.{name} must be strictly positive")

    @property
    def A_c(self):
        return math.pi * self.D_c ** 2 / 4.0  # m^2


@dataclass(frozen=True)
class LumpedParams:
    """Lumped parameters identified at an operating point."""

    R_wick: float    # K/W, wick thermal resistance
    k_2phi: float    # W/(m^2 K), condensing-region heat transfer coefficient
    k_sc: float      # W/(m^2 K), subcooled-region heat transfer coefficient
    k_ll: float      # W/(m^2 K), liquid-line heat transfer coefficient
    dp_fri: float    # Pa, wick friction pressure loss
    alpha_bar: float = 0.82  # mean void fraction of the two-phase region

    def __post_init__(self):
        for name in ("R_wick", "k_2phi", "k_sc", "k_ll", "dp_fri"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"LumpedParams.{name} must be strictly positive")
        if not 0.0 < self.alpha_bar < 1.0:
            raise ValueError("LumpedParams.alpha_bar must lie in (0, 1)")


@dataclass(frozen=True)
class AuxOutputs:
    """Algebraic intermediates of one right-hand-side evaluation."""

    T_evap: float       # K
    T_cond: float       # K
    T_cond_out: float   # K
    T_cc_in: float      # K
    mdot_v: float       # kg/s
    mdot_star: float    # kg/s, flow across the moving condensation interface
    p_cc: float         # Pa
    p_evap: float       # Pa
    p_cond: float       # Pa
    Q_wick: float       # W, heat leak evaporator -> CC
    dp_cap: float       # Pa, capillary pressure
    rho_2phi: float     # kg/m^3, homogeneous two-phase density


class AuxCache:
    """Warm-start storage for the auxiliary fixed points of one evaluation context.

    Not safe for concurrent use from multiple threads; create one per context.
    """

    def __init__(self):
        self.values = np.zeros(3)  # T_cond, T_cond_out, T_cc_in (K); 0 = unseeded

    def reset(self):
        self.values[:] = 0.0


# Error codes shared between the jitted kernel and the wrapper.
_OK = 0
_ERR_ETA = 1
_ERR_VCCL = 2
_ERR_MDOT = 3
_ERR_PROP_RANGE = 4
_ERR_ANTOINE = 5
_ERR_FIXED_POINT = 6
_ERR_CONDENSATION = 7
_ERR_CC_DENOM = 8
_ERR_EVAP_DENOM = 9
_ERR_DENSITY = 10

_ERR_MESSAGES = {
    _ERR_ETA: "eta left the variable-conductance interval (0, L_cond)",
    _ERR_VCCL: "V_cc_l left the interval (0, V_cc)",
    _ERR_MDOT: "mdot_l <= 0: liquid-column model undefined for reversed flow",
    _ERR_PROP_RANGE: "a subsystem temperature left the property-correlation range "
                     "[-40, 80] degC",
    _ERR_ANTOINE: "saturation relation evaluated outside its domain",
    _ERR_FIXED_POINT: "auxiliary fixed point did not converge",
    _ERR_CONDENSATION: "condensation direction lost (mdot_star <= 0 or "
                       "T_cond <= T_sink)",
    _ERR_CC_DENOM: "compensation-chamber energy denominator not positive",
    _ERR_EVAP_DENOM: "evaporator energy-balance denominator not positive",
    _ERR_DENSITY: "liquid/vapor density ordering violated",
}

_ERR_CLASSES = {
    _ERR_ETA: ModeBoundaryError,
    _ERR_VCCL: ModeBoundaryError,
    _ERR_MDOT: ModelValidityError,
    _ERR_PROP_RANGE: PropertyRangeError,
    _ERR_ANTOINE: AntoineDomainError,
    _ERR_FIXED_POINT: FixedPointError,
    _ERR_CONDENSATION: ModelValidityError,
    _ERR_CC_DENOM: ModelValidityError,
    _ERR_EVAP_DENOM: ModelValidityError,
    _ERR_DENSITY: ModelValidityError,
}

N_AUX = 15  # 12 public fields + den_cc, A_coef, cp_cc_in (kernel extras)


# ---------------------------------------------------------------------------
# Jitted building blocks
# ---------------------------------------------------------------------------

@jit
def _condenser_two_phase(eta, mdot_v, mdot_l, T_sink, k_2phi, alpha_bar, D_c,
                         seed, strict=1):
    """Fixed point for (rho_2phi, mdot_star, T_cond); returns (rho2, mstar, Tcond, code)."""
    T_cond = seed
    rho2 = 0.0
    mstar = 0.0
    for _ in range(_FP_MAXIT):
        tc = T_cond - T_ZERO_C
        if tc < -40.0 or tc > 80.0:
            if strict == 1:
                return 0.0, 0.0, 0.0, _ERR_PROP_RANGE
            tc = min(max(tc, -40.0), 80.0)
        rl = rho_l_c(tc)
        rv = rho_v_c(tc)
        rho2 = rl * (1.0 - alpha_bar) + rv * alpha_bar
        if rl == rho2:
            return 0.0, 0.0, 0.0, _ERR_DENSITY
        mstar = mdot_v - (mdot_v - mdot_l) / (1.0 - rl / rho2)
        T_new = T_sink + dh_v_c(tc) * mstar / (k_2phi * math.pi * D_c * eta)
        done = abs(T_new - T_cond) < _FP_TOL
        T_cond = T_new
        if done:
            if strict == 1 and (mstar <= 0.0 or T_cond <= T_sink):
                return rho2, mstar, T_cond, _ERR_CONDENSATION
            return rho2, mstar, T_cond, _OK
    return rho2, mstar, T_cond, _ERR_FIXED_POINT


@jit
def _exp_outlet(T_in, T_wall, coeff, mdot, seed, strict=1):
    """Heat-exchanger outlet T_out = T_wall + (T_in - T_wall) exp(-coeff/(mdot cp_m)),
    cp_m the arithmetic mean of cp_l at T_in and at T_out (implicit).

    Returns (T_out, cp_m, code)."""
    cp_in = cp_l_c(min(max(T_in - T_ZERO_C, -40.0), 80.0))
    T_out = seed
    cpm = cp_in
    for _ in range(_FP_MAXIT):
        to = T_out - T_ZERO_C
        if to < -40.0 or to > 80.0:
            if strict == 1:
                return 0.0, 0.0, _ERR_PROP_RANGE
            to = min(max(to, -40.0), 80.0)
        cpm = 0.5 * (cp_in + cp_l_c(to))
        T_new = T_wall + (T_in - T_wall) * math.exp(-coeff / (mdot * cpm))
        done = abs(T_new - T_out) < _FP_TOL
        T_out = T_new
        if done:
            return T_out, cpm, _OK
    return T_out, cpm, _ERR_FIXED_POINT


@jit
def rhs_kernel(x, u, par, geo, fl, cache, dx, aux, strict=1):
    """Evaluate the four state derivatives and all intermediates.

    x   [T_cc K, eta m, V_cc_l m^3, mdot_l kg/s]
    u   [Q_evap W, T_sink K, Q_cc W]
    par [R_wick, k_2phi, k_sc, k_ll, dp_fri, alpha_bar]
    geo [V_cc, L_cond, L_ll, D_c, A_c, R_p, theta]
    fl  [A_wf, B_wf, C_wf, R_gas, T_amb]
    cache  warm-start seeds [T_cond, T_cond_out, T_cc_in] (0 = unseeded);
           updated in place on success only
    dx, aux  output buffers (4 and N_AUX); returns an error code (0 = ok).

    `strict=0` is for adaptive-solver trial evaluations only: the state is
    clamped just inside the mode region and the condensation-direction check
    is skipped, so slightly-outside trials return finite values instead of
    failing; accepted samples and events are still policed in strict mode.
    """
    T_cc = x[0]
    eta = x[1]
    V_cc_l = x[2]
    mdot_l = x[3]
    Q_evap = u[0]
    T_sink = u[1]
    Q_cc = u[2]
    R_wick = par[0]
    k_2phi = par[1]
    k_sc = par[2]
    k_ll = par[3]
    dp_fri = par[4]
    alpha_bar = par[5]
    V_cc = geo[0]
    L_cond = geo[1]
    L_ll = geo[2]
    D_c = geo[3]
    A_c = geo[4]
    R_p = geo[5]
    theta = geo[6]
    A_wf = fl[0]
    B_wf = fl[1]
    C_wf = fl[2]
    R_gas = fl[3]
    T_amb = fl[4]

    if strict == 1:
        if not (0.0 < eta < L_cond):
            return _ERR_ETA
        if not (0.0 < V_cc_l < V_cc):
            return _ERR_VCCL
        if mdot_l <= 0.0:
            return _ERR_MDOT
    else:
        eta = min(max(eta, 1e-9), L_cond - 1e-9)
        V_cc_l = min(max(V_cc_l, 1e-12), V_cc - 1e-12)
        mdot_l = max(mdot_l, 1e-9)

    tcc = T_cc - T_ZERO_C
    if tcc < -40.0 or tcc > 80.0:
        if strict == 1:
            return _ERR_PROP_RANGE
        tcc = min(max(tcc, -40.0), 80.0)
        T_cc = tcc + T_ZERO_C

    # --- evaporator saturation chain ---
    if C_wf + T_cc <= 0.0:
        return _ERR_ANTOINE
    p_cc = 10.0 ** (A_wf - B_wf / (C_wf + T_cc))
    dp_cap = 2.0 * sigma_c(tcc) * math.cos(theta) / R_p
    p_evap = p_cc + dp_cap - dp_fri
    if p_evap <= 0.0:
        return _ERR_ANTOINE
    lg = math.log10(p_evap)
    if lg == A_wf:
        return _ERR_ANTOINE
    T_evap = -B_wf / (lg - A_wf) - C_wf
    tev = T_evap - T_ZERO_C
    if tev < -40.0 or tev > 80.0:
        if strict == 1:
            return _ERR_PROP_RANGE
        tev = min(max(tev, -40.0), 80.0)

    Q_wick = (T_evap - T_cc) / R_wick
    cpm_ev = 0.5 * (cp_l_c(tev) + cp_l_c(tcc))
    den_ev = cpm_ev * (T_evap - T_cc) + dh_v_c(tev)
    if den_ev <= 0.0:
        return _ERR_EVAP_DENOM
    mdot_v = (Q_evap - Q_wick) / den_ev

    # --- condenser two-phase region (implicit) ---
    seed = cache[0] if cache[0] > 0.0 else T_cc
    rho_2phi, mdot_star, T_cond, code = _condenser_two_phase(
        eta, mdot_v, mdot_l, T_sink, k_2phi, alpha_bar, D_c, seed, strict)
    if code != _OK:
        return code
    if strict == 0:
        T_cond = min(max(T_cond, T_ZERO_C - 40.0), T_ZERO_C + 80.0)
    tcd = min(max(T_cond - T_ZERO_C, -40.0), 80.0)
    rho_l_cond = rho_l_c(tcd)
    rho_v_cond = rho_v_c(tcd)
    dh_cond = dh_v_c(tcd)

    # --- subcooled outlet and liquid-line return (implicit heat exchangers) ---
    seed = cache[1] if cache[1] > 0.0 else T_sink
    T_cond_out, _, code = _exp_outlet(
        T_cond, T_sink, math.pi * D_c * k_sc * (L_cond - eta), mdot_l, seed, strict)
    if code != _OK:
        return code
    seed = cache[2] if cache[2] > 0.0 else T_amb
    T_cc_in, _, code = _exp_outlet(
        T_cond_out, T_amb, math.pi * D_c * k_ll * L_ll, mdot_l, seed, strict)
    if code != _OK:
        return code
    tci = min(max(T_cc_in - T_ZERO_C, -40.0), 80.0)

    # --- compensation-chamber coefficients and balances ---
    rho_l_cc = rho_l_c(tcc)
    rho_v_cc = rho_v_c(tcc)
    dh_cc = dh_v_c(tcc)
    cp_cc = cp_l_c(tcc)
    if rho_l_cc <= rho_v_cc:
        return _ERR_DENSITY
    A_coef = rho_v_cc * dh_cc / (rho_l_cc - rho_v_cc)
    B_coef = rho_l_cc * A_coef / R_gas
    C_coef = B_coef / (T_cc * T_cc) - rho_v_cc / T_cc
    D_vol = V_cc - V_cc_l
    den_cc = ((rho_l_cc * V_cc_l + D_vol * rho_v_cc) * cp_cc
              + C_coef * D_vol * dh_cc
              - (V_cc * R_gas / T_cc) * B_coef
              + A_coef * C_coef * D_vol)
    if den_cc <= 0.0:
        return _ERR_CC_DENOM
    cpm_cc = 0.5 * (cp_l_c(tci) + cp_cc)
    num_cc = (mdot_l * cpm_cc * (T_cc_in - T_cc) + Q_cc + Q_wick
              + A_coef * (mdot_l - mdot_v))
    dT_cc = num_cc / den_cc
    dV_cc_l = (mdot_l - mdot_v - C_coef * D_vol * dT_cc) / (rho_l_cc - rho_v_cc)

    # --- condensation interface ---
    d_eta = (-k_2phi * math.pi * D_c * (T_cond - T_sink)
             / (rho_v_cond * alpha_bar * A_c * dh_cond) * eta
             + mdot_v / (rho_v_cond * alpha_bar * A_c))

    # --- liquid-column momentum ---
    if C_wf + T_cond <= 0.0:
        return _ERR_ANTOINE
    p_cond = 10.0 ** (A_wf - B_wf / (C_wf + T_cond))
    tco = T_cond_out - T_ZERO_C
    mu = mu_l_c(0.5 * (tco + tci))
    rho_cc_in = rho_l_c(tci)
    L_tot = L_cond - eta + L_ll
    d_mdot_l = (mdot_l * mdot_l / (rho_l_cond * A_c)
                - mdot_l * mdot_l / (rho_cc_in * A_c)
                + (p_cond - p_cc) * A_c
                - (128.0 / math.pi) * (L_tot / D_c ** 4)
                * (mu * A_c * mdot_l / rho_cc_in)) / L_tot

    dx[0] = dT_cc
    dx[1] = d_eta
    dx[2] = dV_cc_l
    dx[3] = d_mdot_l

    aux[0] = T_evap
    aux[1] = T_cond
    aux[2] = T_cond_out
    aux[3] = T_cc_in
    aux[4] = mdot_v
    aux[5] = mdot_star
    aux[6] = p_cc
    aux[7] = p_evap
    aux[8] = p_cond
    aux[9] = Q_wick
    aux[10] = dp_cap
    aux[11] = rho_2phi
    aux[12] = den_cc
    aux[13] = A_coef
    aux[14] = cpm_cc

    cache[0] = T_cond
    cache[1] = T_cond_out
    cache[2] = T_cc_in
    return _OK


# ---------------------------------------------------------------------------
# Array packing and the Python-facing evaluation
# ---------------------------------------------------------------------------

def pack_params(params: LumpedParams):
    return np.array([params.R_wick, params.k_2phi, params.k_sc, params.k_ll,
                     params.dp_fri, params.alpha_bar])


def pack_geometry(geom: Geometry):
    return np.array([geom.V_cc, geom.L_cond, geom.L_ll, geom.D_c, geom.A_c,
                     geom.R_p, geom.theta])


def pack_fluid(antoine: AntoineParams = AMMONIA_ANTOINE, T_amb: float = T_AMB_DEFAULT):
    return np.array([antoine.A_wf, antoine.B_wf, antoine.C_wf, antoine.R_gas, T_amb])


def _raise_kernel_error(code, t=None):
    cls = _ERR_CLASSES[code]
    msg = _ERR_MESSAGES[code]
    if cls in (ModeBoundaryError, ModelValidityError):
        raise cls(msg, t=t)
    raise cls(msg)


def aux_from_array(a):
    return AuxOutputs(*(float(v) for v in a[:12]))


def state_derivatives(x, u, params, geom, antoine=AMMONIA_ANTOINE,
                      T_amb=T_AMB_DEFAULT, cache=None):
    """Evaluate dx/dt and the auxiliary outputs at one state.

    `x` may be an LhpState or a length-4 array; `u` an ExogenousInputs or a
    length-3 array.  `cache` is an optional AuxCache for warm-starting the
    implicit auxiliary equations; without it the fixed points are seeded from
    T_cc / T_sink / T_amb.

    Returns (dx, aux): a length-4 ndarray and an AuxOutputs.
    """
    xa = x.as_array() if isinstance(x, LhpState) else np.asarray(x, dtype=float)
    ua = u.as_array() if isinstance(u, ExogenousInputs) else np.asarray(u, dtype=float)
    cache_arr = cache.values if cache is not None else np.zeros(3)
    dx = np.empty(4)
    aux = np.empty(N_AUX)
    code = rhs_kernel(xa, ua, pack_params(params), pack_geometry(geom),
                      pack_fluid(antoine, T_amb), cache_arr, dx, aux)
    if code != _OK:
        _raise_kernel_error(code)
    return dx, aux_from_array(aux)


def steady_state_residual(x, u, params, geom, antoine=AMMONIA_ANTOINE,
                          T_amb=T_AMB_DEFAULT, cache=None):
    """The state derivatives viewed as a residual: zero iff `x` is an equilibrium for `u`."""
    dx, _ = state_derivatives(x, u, params, geom, antoine, T_amb, cache)
    return dx


# ---------------------------------------------------------------------------
# Spec operations exposed individually
# ---------------------------------------------------------------------------

def capillary_pressure(T_cc, geom):
    """Maximum capillary pressure 2 sigma cos(theta) / R_p at T_cc (K), in Pa."""
    tcc = T_cc - T_ZERO_C
    if not (-40.0 <= tcc <= 80.0):
        raise PropertyRangeError(
            f"temperature {tcc:.3f} degC outside the surface-tension correlation range")
    return 2.0 * sigma_c(tcc) * math.cos(geom.theta) / geom.R_p


def evaporator_chain(T_cc, params, geom, antoine=AMMONIA_ANTOINE):
    """Saturation chain CC -> evaporator: returns (p_cc, p_evap, T_evap)."""
    p_cc = antoine_pressure(T_cc, antoine)
    p_evap = p_cc + capillary_pressure(T_cc, geom) - params.dp_fri
    T_evap = antoine_temperature(p_evap, antoine)
    return p_cc, p_evap, T_evap


def wick_heat_leak(T_evap, T_cc, params):
    """Conductive heat leak (T_evap - T_cc)/R_wick from evaporator to CC, W."""
    return (T_evap - T_cc) / params.R_wick


def vapor_mass_flow(Q_evap, Q_wick, T_evap, T_cc):
    """Vapor flow from the evaporator steady-state energy balance, kg/s.

    The liquid heat capacity is the arithmetic mean of cp_l at T_evap and T_cc;
    the evaporation enthalpy is taken at T_evap.
    """
    cpm = 0.5 * (cp_l_c(T_evap - T_ZERO_C) + cp_l_c(T_cc - T_ZERO_C))
    den = cpm * (T_evap - T_cc) + dh_v_c(T_evap - T_ZERO_C)
    if den <= 0.0:
        raise ModelValidityError("evaporator energy-balance denominator not positive")
    return (Q_evap - Q_wick) / den


def condenser_chain(eta, mdot_v, mdot_l, T_sink, params, geom, T_cond_seed=None):
    """Two-phase density, interface flow, T_cond and T_cond_out of the condenser.

    Returns (rho_2phi, mdot_star, T_cond, T_cond_out).  The T_cond relation is
    implicit through the density evaluation temperature; seeded from
    `T_cond_seed` when given (warm start), else from T_sink + a direct estimate.
    """
    if not 0.0 < eta < geom.L_cond:
        raise ModeBoundaryError(_ERR_MESSAGES[_ERR_ETA])
    if mdot_l <= 0.0:
        raise ModelValidityError(_ERR_MESSAGES[_ERR_MDOT])
    seed = T_cond_seed if T_cond_seed is not None else (
        T_sink + dh_v_c(T_sink - T_ZERO_C) * mdot_v
        / (params.k_2phi * math.pi * geom.D_c * eta))
    rho2, mstar, T_cond, code = _condenser_two_phase(
        eta, mdot_v, mdot_l, T_sink, params.k_2phi, params.alpha_bar, geom.D_c, seed)
    if code != _OK:
        _raise_kernel_error(code)
    T_cond_out, _, code = _exp_outlet(
        T_cond, T_sink, math.pi * geom.D_c * params.k_sc * (geom.L_cond - eta),
        mdot_l, T_sink)
    if code != _OK:
        _raise_kernel_error(code)
    return rho2, mstar, T_cond, T_cond_out


def liquid_line_outlet(T_cond_out, mdot_l, params, geom, T_amb=T_AMB_DEFAULT):
    """CC inlet temperature after the liquid line heat exchanger, K."""
    if mdot_l <= 0.0:
        raise ModelValidityError(_ERR_MESSAGES[_ERR_MDOT])
    T_cc_in, _, code = _exp_outlet(
        T_cond_out, T_amb, math.pi * geom.D_c * params.k_ll * geom.L_ll, mdot_l, T_amb)
    if code != _OK:
        _raise_kernel_error(code)
    return T_cc_in


def cc_coefficients(T_cc, V_cc_l, geom, antoine=AMMONIA_ANTOINE):
    """Compensation-chamber balance coefficients (A, B, C, D) at CC conditions.

    A = rho_v dh_v/(rho_l - rho_v) [J/kg], B = rho_l A / R [kg K/m^3],
    C = B/T^2 - rho_v/T [kg/(m^3 K)], D = V_cc - V_cc_l [m^3].
    """
    tcc = T_cc - T_ZERO_C
    if not (-40.0 <= tcc <= 80.0):
        raise PropertyRangeError(
            f"temperature {tcc:.3f} degC outside the property-correlation range")
    if V_cc_l >= geom.V_cc:
        # D = 0 is legal (all vapor-phase storage terms vanish); beyond is not.
        if V_cc_l > geom.V_cc:
            raise ModelValidityError("V_cc_l exceeds the chamber volume")
    rl = rho_l_c(tcc)
    rv = rho_v_c(tcc)
    if rl == rv:
        raise ModelValidityError(_ERR_MESSAGES[_ERR_DENSITY])
    A = rv * dh_v_c(tcc) / (rl - rv)
    B = rl * A / antoine.R_gas
    C = B / T_cc ** 2 - rv / T_cc
    D = geom.V_cc - V_cc_l
    return A, B, C, D


def cc_energy_denominator(T_cc, V_cc_l, geom, antoine=AMMONIA_ANTOINE):
    """Denominator of dT_cc/dt: the effective CC thermal capacity, J/K."""
    tcc = T_cc - T_ZERO_C
    A, B, C, D = cc_coefficients(T_cc, V_cc_l, geom, antoine)
    rl = rho_l_c(tcc)
    rv = rho_v_c(tcc)
    return ((rl * V_cc_l + D * rv) * cp_l_c(tcc) + C * D * dh_v_c(tcc)
            - (geom.V_cc * antoine.R_gas / T_cc) * B + A * C * D)


def reynolds_number(mdot, T_celsius, geom):
    """Re = 4 mdot / (pi D_c mu_l) for the liquid line; laminar below ~2300."""
    return 4.0 * mdot / (math.pi * geom.D_c * mu_l_c(T_celsius))


def fast_mode_rate(x, aux, params, geom, antoine=AMMONIA_ANTOINE):
    """Magnitude estimate (1/s) of the fast momentum/condenser eigenvalue.

    The condensation temperature reacts algebraically to the interface flow, so
    p_cond feeds back on mdot_l with gain A_c dp/dT |dmdot*/dmdot_l| dh_cond /
    (k_2phi pi D_c eta); Hagen-Poiseuille friction adds a smaller direct term.
    Classical RK4 is stable for h below roughly 2.785 / rate.
    """
    if isinstance(x, LhpState):
        eta, mdot_l = x.eta, x.mdot_l
    else:
        eta, mdot_l = float(x[1]), float(x[3])
    if isinstance(aux, AuxOutputs):
        T_cond, p_cond, mstar = aux.T_cond, aux.p_cond, aux.mdot_star
        T_co, T_ci, rho2 = aux.T_cond_out, aux.T_cc_in, aux.rho_2phi
    else:
        T_cond, p_cond, mstar = float(aux[1]), float(aux[8]), float(aux[5])
        T_co, T_ci, rho2 = float(aux[2]), float(aux[3]), float(aux[11])
    tcd = T_cond - T_ZERO_C
    dpdT = p_cond * math.log(10.0) * antoine.B_wf / (antoine.C_wf + T_cond) ** 2
    rl_cd = rho_l_c(tcd)
    dms = rho2 / abs(rl_cd - rho2)           # |dmdot*/dmdot_l|
    denom_cd = params.k_2phi * math.pi * geom.D_c * eta
    # (T_cond - T_sink)/mstar equals dh_cond/denom_cd at the converged
    # condenser relation, which removes T_sink and mstar from the gain; the
    # implicit dh(T_cond) dependence contributes the 1/(1 - dg/dT) factor.
    gain_T = dh_v_c(tcd) / denom_cd
    dh_prime = -9e-2 * tcd * tcd - 23.0 * tcd - 3572.3
    dg_dT = dh_prime * mstar / denom_cd
    gain_T /= max(1.0 - dg_dT, 0.1)
    mu = mu_l_c(0.5 * (T_co + T_ci) - T_ZERO_C)
    rho_ci = rho_l_c(T_ci - T_ZERO_C)
    L_tot = geom.L_cond - eta + geom.L_ll
    pressure_term = geom.A_c * dpdT * dms * gain_T
    friction_term = (128.0 / math.pi) * (L_tot / geom.D_c ** 4) * mu * geom.A_c / rho_ci
    return (pressure_term + friction_term) / L_tot
