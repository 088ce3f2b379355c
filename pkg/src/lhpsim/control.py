"""Lyapunov feedback-linearizing heater control and the closed-loop driver.

The law cancels every term of the CC energy balance and imposes
dT_cc/dt = lambda (T_set - T_cc), which makes V(e) = e^2/2 decrease along all
trajectories while the heater is inside its [Q_cc_min, Q_cc_max] range:

    Q_cc = lambda e * den_cc(T_cc, V_cc_l)
           - A (mdot_l - mdot_v) - cp_m mdot_l (T_cc_in - T_cc) - Q_wick

with den_cc the effective CC thermal capacity and cp_m the arithmetic-mean
liquid heat capacity between T_cc_in and T_cc - the same quantities the plant
balance uses.  The controller is static full-state feedback: it consumes the
state vector and the auxiliary outputs (idealized sensing of the plant's own
algebraic chain) and needs no observer or online parameter estimation.

`closed_loop` applies the law as a zero-order hold: Q_cc is computed from the
state at the start of every control interval (default 0.1 s) and held while
the plant is integrated across the interval with stability-scaled RK4
substeps.  Saturation is plain clipping; the law has no integrator, so no
anti-windup is needed.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .ammonia import AMMONIA_ANTOINE, T_ZERO_C, cp_l_c
from .defaults import T_SET_DEFAULT
from .engine import (
    RK4_STABILITY,
    Event,
    InputProfile,
    Trajectory,
    _advance_rk4,
    _event_kind,
    _Rhs,
)
from .errors import LhpError
from .model import (
    _ERR_MESSAGES,
    AuxCache,
    ExogenousInputs,
    LhpState,
    T_AMB_DEFAULT,
    aux_from_array,
    cc_coefficients,
    cc_energy_denominator,
    fast_mode_rate,
)


@dataclass(frozen=True)
class ControllerConfig:
    """Feedback-linearizing controller settings."""

    lam: float = 1.0                  # 1/s, closed-loop error decay rate
    T_set: float = T_SET_DEFAULT      # K, setpoint
    Q_cc_min: float = 0.0             # W, heater lower bound
    Q_cc_max: float = 10.0            # W, heater upper bound
    control_dt: float = 0.1           # s, zero-order-hold update interval

    def __post_init__(self):
        if self.lam <= 0.0:
            raise ValueError("decay rate lam must be positive")
        if self.Q_cc_min > self.Q_cc_max:
            raise ValueError("Q_cc_min must not exceed Q_cc_max")
        if self.control_dt <= 0.0:
            raise ValueError("control_dt must be positive")


class ControlRecord(NamedTuple):
    t: float            # s
    e: float            # K, T_set - T_cc
    Q_cc_unsat: float   # W, raw law output
    Q_cc_applied: float  # W, clipped to the heater range
    saturated: bool


@dataclass
class ControlLog:
    """Per-control-step records as arrays, with row access via `records`."""

    t: np.ndarray
    e: np.ndarray
    Q_cc_unsat: np.ndarray
    Q_cc_applied: np.ndarray
    saturated: np.ndarray

    def __len__(self):
        return len(self.t)

    @property
    def records(self):
        return [ControlRecord(float(t), float(e), float(qu), float(qa), bool(s))
                for t, e, qu, qa, s in zip(self.t, self.e, self.Q_cc_unsat,
                                           self.Q_cc_applied, self.saturated)]

    def lyapunov(self):
        return 0.5 * self.e ** 2


def control_law(x, aux, cfg, params, geom, antoine=AMMONIA_ANTOINE):
    """Heater power from the feedback-linearizing law.

    Returns (Q_cc_unsat, Q_cc_applied).  `x` is the state, `aux` the auxiliary
    outputs of the plant at that state (Q_cc does not enter the auxiliary
    chain, so any heater value may have been used to produce them).
    """
    T_cc = x.T_cc if isinstance(x, LhpState) else float(x[0])
    V_cc_l = x.V_cc_l if isinstance(x, LhpState) else float(x[2])
    mdot_l = x.mdot_l if isinstance(x, LhpState) else float(x[3])

    e = cfg.T_set - T_cc
    den = cc_energy_denominator(T_cc, V_cc_l, geom, antoine)
    A, _, _, _ = cc_coefficients(T_cc, V_cc_l, geom, antoine)
    cp_m = 0.5 * (cp_l_c(aux.T_cc_in - T_ZERO_C) + cp_l_c(T_cc - T_ZERO_C))
    Q_unsat = (cfg.lam * e * den
               - A * (mdot_l - aux.mdot_v)
               - cp_m * mdot_l * (aux.T_cc_in - T_cc)
               - aux.Q_wick)
    Q_applied = min(max(Q_unsat, cfg.Q_cc_min), cfg.Q_cc_max)
    return Q_unsat, Q_applied


class DisturbanceProfile:
    """(time, Q_evap, T_sink) breakpoints for closed-loop runs (no Q_cc channel)."""

    def __init__(self, breakpoints):
        self._profile = InputProfile(
            [(t, ExogenousInputs(Q_evap=q, T_sink=ts, Q_cc=0.0))
             for t, q, ts in breakpoints])

    @property
    def times(self):
        return self._profile.times

    def at(self, t):
        u = self._profile.at(t)
        return u.Q_evap, u.T_sink

    def warn_if_outside_range(self):
        # the placeholder Q_cc = 0 entries are always in range
        self._profile.warn_if_outside_range()

    @staticmethod
    def constant(Q_evap, T_sink):
        return DisturbanceProfile([(0.0, Q_evap, T_sink)])


def closed_loop(x0, disturbances, cfg, params, geom, t_end,
                antoine=AMMONIA_ANTOINE, T_amb=T_AMB_DEFAULT,
                sample_dt=1.0, h_inner=None, safety=0.35):
    """Run the nonlinear control loop; returns (Trajectory, ControlLog).

    Q_cc is recomputed from the current state at every control interval and
    held across it (sample-and-hold).  Disturbance breakpoints must fall on
    the control grid.  `h_inner=None` uses stability-scaled RK4 substeps.
    """
    if isinstance(disturbances, tuple):
        disturbances = DisturbanceProfile.constant(*disturbances)
    disturbances.warn_if_outside_range()
    for t in disturbances.times:
        n = round(float(t) / cfg.control_dt)
        if abs(n * cfg.control_dt - float(t)) > 1e-9:
            raise ValueError(
                f"disturbance breakpoint t = {t} s is not on the control grid "
                f"(control_dt = {cfg.control_dt} s)")
    n_ctrl = round(t_end / cfg.control_dt)
    if abs(n_ctrl * cfg.control_dt - t_end) > 1e-9:
        raise ValueError("t_end must be a multiple of control_dt")
    n_per_sample = max(1, round(sample_dt / cfg.control_dt))

    x = (x0.as_array() if isinstance(x0, LhpState) else
         np.asarray(x0, dtype=float)).copy()
    cache = AuxCache()
    rhs = _Rhs(params, geom, antoine, T_amb, cache)

    rec_t, rec_x, rec_aux, rec_u = [], [], [], []
    log_t, log_e, log_qu, log_qa, log_sat = [], [], [], [], []
    event = None
    error = None

    ua = np.zeros(3)
    for k in range(n_ctrl):
        t_k = k * cfg.control_dt
        Q_evap, T_sink = disturbances.at(t_k)
        ua[0], ua[1], ua[2] = Q_evap, T_sink, 0.0
        try:
            aux_arr = rhs.aux(x, ua, t_k)
        except LhpError as exc:
            error = str(exc)
            break
        aux = aux_from_array(aux_arr)
        Q_unsat, Q_applied = control_law(x, aux, cfg, params, geom, antoine)
        log_t.append(t_k)
        log_e.append(cfg.T_set - x[0])
        log_qu.append(Q_unsat)
        log_qa.append(Q_applied)
        log_sat.append(Q_applied != Q_unsat)

        if k % n_per_sample == 0:
            rec_t.append(t_k)
            rec_x.append(x.copy())
            rec_aux.append(aux_arr[:12])
            rec_u.append(np.array([Q_evap, T_sink, Q_applied]))

        ua[2] = Q_applied
        h = h_inner or (safety * RK4_STABILITY
                        / max(fast_mode_rate(x, aux, params, geom, antoine), 1e-12))
        status, code, t_loc = _advance_rk4(x, ua, rhs.par, rhs.geo, rhs.fl,
                                           rhs.cache, cfg.control_dt, h)
        if status == 1:
            event = Event(kind=_event_kind(code, x, geom), t=t_k + t_loc)
            break
        if status == 2:
            error = f"{_ERR_MESSAGES[code]} (at t = {t_k + t_loc:.6f} s)"
            break
    else:
        # final sample at t_end
        t_k = n_ctrl * cfg.control_dt
        Q_evap, T_sink = disturbances.at(t_k)
        try:
            aux_arr = rhs.aux(x, np.array([Q_evap, T_sink, log_qa[-1]]), t_k)
            rec_t.append(t_k)
            rec_x.append(x.copy())
            rec_aux.append(aux_arr[:12])
            rec_u.append(np.array([Q_evap, T_sink, log_qa[-1]]))
        except LhpError as exc:
            error = str(exc)

    traj = Trajectory(t=np.array(rec_t), states=np.array(rec_x),
                      aux=np.array(rec_aux), inputs=np.array(rec_u),
                      event=event, error=error)
    log = ControlLog(t=np.array(log_t), e=np.array(log_e),
                     Q_cc_unsat=np.array(log_qu), Q_cc_applied=np.array(log_qa),
                     saturated=np.array(log_sat, dtype=bool))
    return traj, log
