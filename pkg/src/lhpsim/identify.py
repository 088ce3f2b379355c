"""Lumped-parameter identification at a stationary operating point.

Given one operating point (inputs, states, and the measured/simulated
temperatures T_evap, T_cond, T_cond_out), the five unknowns

    R_wick, k_2phi, k_sc, k_ll, T_cc_in

are determined from the stationary system: CC energy balance = 0, interface
balance = 0, and the three algebraic relations for T_cond, T_cond_out and
T_cc_in, with T_cond and T_cond_out pinned to their operating-point values.
The wick friction loss dp_fri comes first, from inverting the evaporator
saturation chain at the given T_evap.

The stationary system decouples sequentially:

    interface balance + T_cond relation  =>  mdot_v = mdot_star = mdot_l,
                                             which fixes Q_wick and so R_wick;
    T_cond relation                      =>  k_2phi  (closed form);
    T_cond_out relation                  =>  k_sc    (closed form);
    CC energy balance                    =>  T_cc_in (scalar fixed point in
                                             its own mean heat capacity);
    T_cc_in relation                     =>  k_ll    (closed form).

The sequential solution already satisfies the equations to round-off; a damped
Newton pass on the full 5x5 system (finite-difference sensitivities) verifies
this and supplies the residual diagnostics.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .ammonia import (
    AMMONIA_ANTOINE,
    T_ZERO_C,
    antoine_pressure,
    cp_l_c,
    dh_v_c,
    rho_l_c,
    rho_v_c,
)
from .errors import ConvergenceError, InfeasibleError, ModelValidityError
from .model import (
    ExogenousInputs,
    Geometry,
    LhpState,
    LumpedParams,
    T_AMB_DEFAULT,
    capillary_pressure,
    cc_coefficients,
    evaporator_chain,
)

DEFAULT_CLAMP_MARGIN = 1e-4  # K


@dataclass(frozen=True)
class OperatingPoint:
    """One stationary operating point used for identification."""

    inputs: ExogenousInputs
    state: LhpState
    T_evap: float       # K
    T_cond: float       # K
    T_cond_out: float   # K

    def __post_init__(self):
        if not (self.inputs.T_sink < self.T_cond_out < self.T_cond):
            raise ModelValidityError(
                "operating point violates T_sink < T_cond_out < T_cond; "
                "clamp the condenser outlet (clamp_condenser_outlet) first")


@dataclass(frozen=True)
class SolverConfig:
    """Newton settings for the verification pass."""

    tol: float = 1e-9          # absolute residual tolerance (scaled units)
    max_iter: int = 200
    fd_rel_step: float = 1e-6  # relative step of the central differences


@dataclass(frozen=True)
class IdentifiedParams:
    """Identification result: lumped parameters plus diagnostics."""

    params: LumpedParams
    T_cc_in_op: float       # K
    residual_norm: float
    iterations: int
    residuals: np.ndarray = field(repr=False, default=None)


def clamp_condenser_outlet(T_cond_out, T_sink, margin=DEFAULT_CLAMP_MARGIN):
    """Lift a (nonphysical) condenser outlet temperature to T_sink + margin.

    Discretized condenser references occasionally report outlet temperatures
    at or below the sink; the subcooler relation then has no finite k_sc.
    """
    if margin <= 0.0:
        raise ValueError("clamp margin must be positive")
    return max(T_cond_out, T_sink + margin)


def friction_pressure_loss(op: OperatingPoint, geom: Geometry,
                           antoine=AMMONIA_ANTOINE):
    """Wick friction loss dp_fri = p_sat(T_cc) + dp_cap(T_cc) - p_sat(T_evap), Pa."""
    dp = (antoine_pressure(op.state.T_cc, antoine)
          + capillary_pressure(op.state.T_cc, geom)
          - antoine_pressure(op.T_evap, antoine))
    if dp <= 0.0:
        raise InfeasibleError(
            f"inconsistent operating point: dp_fri = {dp:.6g} Pa is not positive "
            "(T_evap too far above T_cc for the capillary pressure)")
    return dp


def _solve_T_cc_in(T_cc, mdot_l, Q_total):
    """CC inlet temperature from mdot cp_m (T_cc_in - T_cc) + Q_total = 0.

    cp_m is the arithmetic mean of cp_l at T_cc_in (unknown) and T_cc; the
    weak cp(T) dependence makes this a strong contraction.
    """
    cp_cc = cp_l_c(T_cc - T_ZERO_C)
    T_ci = T_cc
    for _ in range(100):
        cpm = 0.5 * (cp_l_c(T_ci - T_ZERO_C) + cp_cc)
        T_new = T_cc - Q_total / (mdot_l * cpm)
        if abs(T_new - T_ci) < 1e-12:
            return T_new
        T_ci = T_new
    raise ConvergenceError("T_cc_in fixed point did not converge")


def _stationary_residuals(theta, op, geom, dp_fri, antoine, T_amb, alpha_bar):
    """Residual vector of the 5 stationary equations at theta =
    [R_wick, k_2phi, k_sc, k_ll, T_cc_in].

    r1, r2 in W; r3 in K; r4, r5 in log space of the heat-exchanger ratios
    (well conditioned even for the exponentially small subcooler approach)."""
    R_wick, k_2phi, k_sc, k_ll, T_cc_in = theta
    s = op.state
    u = op.inputs
    params = LumpedParams(R_wick=R_wick, k_2phi=k_2phi, k_sc=k_sc, k_ll=k_ll,
                          dp_fri=dp_fri, alpha_bar=alpha_bar)
    _, _, T_evap = evaporator_chain(s.T_cc, params, geom, antoine)
    Q_wick = (T_evap - s.T_cc) / R_wick
    cpm_ev = 0.5 * (cp_l_c(T_evap - T_ZERO_C) + cp_l_c(s.T_cc - T_ZERO_C))
    mdot_v = (u.Q_evap - Q_wick) / (cpm_ev * (T_evap - s.T_cc)
                                    + dh_v_c(T_evap - T_ZERO_C))

    A, _, _, _ = cc_coefficients(s.T_cc, s.V_cc_l, geom, antoine)
    cpm_cc = 0.5 * (cp_l_c(T_cc_in - T_ZERO_C) + cp_l_c(s.T_cc - T_ZERO_C))
    r1 = (s.mdot_l * cpm_cc * (T_cc_in - s.T_cc) + u.Q_cc + Q_wick
          + A * (s.mdot_l - mdot_v))

    dh_cd = dh_v_c(op.T_cond - T_ZERO_C)
    r2 = (mdot_v * dh_cd
          - k_2phi * math.pi * geom.D_c * s.eta * (op.T_cond - u.T_sink))

    tcd = op.T_cond - T_ZERO_C
    rho2 = rho_l_c(tcd) * (1.0 - alpha_bar) + rho_v_c(tcd) * alpha_bar
    mdot_star = mdot_v - (mdot_v - s.mdot_l) / (1.0 - rho_l_c(tcd) / rho2)
    r3 = op.T_cond - u.T_sink - dh_cd * mdot_star / (k_2phi * math.pi * geom.D_c * s.eta)

    cpm_sc = 0.5 * (cp_l_c(tcd) + cp_l_c(op.T_cond_out - T_ZERO_C))
    r4 = (math.log((op.T_cond_out - u.T_sink) / (op.T_cond - u.T_sink))
          + math.pi * geom.D_c * k_sc * (geom.L_cond - s.eta) / (s.mdot_l * cpm_sc))

    cpm_ll = 0.5 * (cp_l_c(op.T_cond_out - T_ZERO_C) + cp_l_c(T_cc_in - T_ZERO_C))
    r5 = (math.log((T_cc_in - T_amb) / (op.T_cond_out - T_amb))
          + math.pi * geom.D_c * k_ll * geom.L_ll / (s.mdot_l * cpm_ll))

    return np.array([r1, r2, r3, r4, r5])


def identify(op: OperatingPoint, geom: Geometry, solver: SolverConfig = SolverConfig(),
             antoine=AMMONIA_ANTOINE, T_amb=T_AMB_DEFAULT,
             alpha_bar=0.82) -> IdentifiedParams:
    """Identify {R_wick, k_2phi, k_sc, k_ll, T_cc_in} (and dp_fri) at `op`.

    Sequential closed-form solve first, then a damped-Newton verification pass
    on the full stationary system.  Raises ConvergenceError on non-convergence
    and InfeasibleError if any parameter comes out non-positive.
    """
    s = op.state
    u = op.inputs
    dp_fri = friction_pressure_loss(op, geom, antoine)

    # Sequential solution (see module docstring for the decoupling order).
    params0 = LumpedParams(R_wick=1.0, k_2phi=1.0, k_sc=1.0, k_ll=1.0, dp_fri=dp_fri)
    _, _, T_evap = evaporator_chain(s.T_cc, params0, geom, antoine)
    cpm_ev = 0.5 * (cp_l_c(T_evap - T_ZERO_C) + cp_l_c(s.T_cc - T_ZERO_C))
    den_ev = cpm_ev * (T_evap - s.T_cc) + dh_v_c(T_evap - T_ZERO_C)
    Q_wick = u.Q_evap - s.mdot_l * den_ev     # from mdot_v = mdot_l
    # T_evap - T_cc and Q_wick share the wick resistance as ratio; both flip
    # sign together when dp_fri exceeds the capillary pressure.  Opposite
    # signs (or a zero) leave no positive R_wick.
    if Q_wick == 0.0 or (T_evap - s.T_cc) * Q_wick <= 0.0:
        raise InfeasibleError(
            "wick temperature difference and heat leak are inconsistent; "
            "no positive R_wick reproduces this operating point")
    R_wick = (T_evap - s.T_cc) / Q_wick

    dh_cd = dh_v_c(op.T_cond - T_ZERO_C)
    k_2phi = s.mdot_l * dh_cd / (math.pi * geom.D_c * s.eta * (op.T_cond - u.T_sink))

    cpm_sc = 0.5 * (cp_l_c(op.T_cond - T_ZERO_C) + cp_l_c(op.T_cond_out - T_ZERO_C))
    ratio_sc = (op.T_cond_out - u.T_sink) / (op.T_cond - u.T_sink)
    k_sc = -s.mdot_l * cpm_sc * math.log(ratio_sc) / (
        math.pi * geom.D_c * (geom.L_cond - s.eta))

    T_cc_in = _solve_T_cc_in(s.T_cc, s.mdot_l, u.Q_cc + Q_wick)

    cpm_ll = 0.5 * (cp_l_c(op.T_cond_out - T_ZERO_C) + cp_l_c(T_cc_in - T_ZERO_C))
    ratio_ll = (T_cc_in - T_amb) / (op.T_cond_out - T_amb)
    if ratio_ll <= 0.0:
        raise InfeasibleError("T_cc_in crossed the ambient temperature; "
                              "liquid-line relation has no positive k_ll")
    k_ll = -s.mdot_l * cpm_ll * math.log(ratio_ll) / (math.pi * geom.D_c * geom.L_ll)

    theta = np.array([R_wick, k_2phi, k_sc, k_ll, T_cc_in])
    if np.any(theta[:4] <= 0.0):
        raise InfeasibleError(f"non-positive identified parameter: {theta[:4]}")

    # Damped Newton verification/polish on the full system.
    scales = np.abs(theta)
    res = _stationary_residuals(theta, op, geom, dp_fri, antoine, T_amb, alpha_bar)
    norm = float(np.linalg.norm(res))
    iterations = 0
    for iterations in range(1, solver.max_iter + 1):
        if norm < solver.tol:
            break
        J = np.empty((5, 5))
        for j in range(5):
            h = solver.fd_rel_step * scales[j]
            tp = theta.copy()
            tm = theta.copy()
            tp[j] += h
            tm[j] -= h
            J[:, j] = (_stationary_residuals(tp, op, geom, dp_fri, antoine,
                                              T_amb, alpha_bar)
                       - _stationary_residuals(tm, op, geom, dp_fri, antoine,
                                               T_amb, alpha_bar)) / (2.0 * h)
        step = np.linalg.solve(J, -res)
        lam = 1.0
        for _ in range(40):
            trial = theta + lam * step
            if np.all(trial[:4] > 0.0):
                trial_res = _stationary_residuals(trial, op, geom, dp_fri,
                                                  antoine, T_amb, alpha_bar)
                trial_norm = float(np.linalg.norm(trial_res))
                if trial_norm < norm:
                    theta, res, norm = trial, trial_res, trial_norm
                    break
            lam *= 0.5
        else:
            raise ConvergenceError(
                "identification Newton stalled", residual=norm, iterations=iterations)
    else:
        raise ConvergenceError(
            f"identification did not reach tolerance {solver.tol:g}",
            residual=norm, iterations=iterations)

    if np.any(theta[:4] <= 0.0):
        raise InfeasibleError(f"non-positive identified parameter: {theta[:4]}")

    params = LumpedParams(R_wick=float(theta[0]), k_2phi=float(theta[1]),
                          k_sc=float(theta[2]), k_ll=float(theta[3]),
                          dp_fri=dp_fri, alpha_bar=alpha_bar)
    return IdentifiedParams(params=params, T_cc_in_op=float(theta[4]),
                            residual_norm=norm, iterations=iterations,
                            residuals=res)
