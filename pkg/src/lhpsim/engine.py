"""Time integration of the four-state model with piecewise-constant inputs.

Methods
-------
rk4     classical fixed-step Runge-Kutta 4.  Steps never straddle an input
        breakpoint or a sample instant.  `h=None` picks a stability-limited
        step from the fast-eigenvalue estimate each sample interval: the
        algebraic condenser/momentum coupling makes the system stiff (~0.2 ms
        at the reference point), so a naive 0.1 s step diverges immediately.
rk45    embedded Fehlberg 4(5) with per-state absolute tolerances
        [1e-6 K, 1e-7 m, 1e-12 m^3, 1e-9 kg/s]; explicit, so still
        stability-limited here - use for short horizons.
lsoda   scipy's stiff/non-stiff switching solver; the practical choice for
        long scenarios (hours of model time in ~1 s wall clock).

Mode boundaries (eta at 0 or L_cond, V_cc_l at 0 or V_cc, mdot_l at 0) halt
the integration with a typed event located to within 1e-3 s; the model does
not continue into fixed-conductance mode.
"""

from dataclasses import dataclass

import numpy as np

from ._jit import jit
from .ammonia import AMMONIA_ANTOINE
from .errors import ConvergenceError, LhpError, ModeBoundaryError
from .model import (
    _ERR_ETA,
    _ERR_MDOT,
    _ERR_MESSAGES,
    _ERR_VCCL,
    _OK,
    AuxCache,
    AuxOutputs,
    ExogenousInputs,
    LhpState,
    N_AUX,
    T_AMB_DEFAULT,
    _raise_kernel_error,
    aux_from_array,
    fast_mode_rate,
    pack_fluid,
    pack_geometry,
    pack_params,
    rhs_kernel,
)

RK4_STABILITY = 2.785          # |lambda h| real-axis stability limit of RK4
EVENT_LOCATE_DT = 1e-3         # s, bisection window for mode-boundary events
DEFAULT_ATOL = (1e-6, 1e-7, 1e-12, 1e-9)  # K, m, m^3, kg/s

# Equilibrium residual thresholds per state derivative (K/s, m/s, kg/s^2);
# comfortably above the fixed-point noise floor (~1e-11) and far below
# physical significance (1e-9 K/s over 2500 s is 2.5 uK).
EQ_RES_TOL = np.array([1e-9, 1e-9, 1e-10])


@dataclass(frozen=True)
class IntegratorOptions:
    method: str = "rk4"            # 'rk4' | 'rk45' | 'lsoda'
    h: float | None = None         # s; None = stability-scaled (rk4) / adaptive
    sample_dt: float = 1.0         # s, output sampling interval
    rtol: float = 1e-8
    atol: tuple = DEFAULT_ATOL
    safety: float = 0.5            # fraction of the RK4 stability limit used


@dataclass(frozen=True)
class Event:
    """Terminal integration event."""

    kind: str    # 'eta_min'|'eta_max'|'V_cc_l_min'|'V_cc_l_max'|'mdot_l_min'
    t: float     # s


class InputProfile:
    """Ordered (time, ExogenousInputs) breakpoints with hold-last semantics."""

    def __init__(self, breakpoints):
        bps = list(breakpoints)
        if not bps or bps[0][0] != 0.0:
            raise ValueError("profile must contain t = 0")
        times = [float(t) for t, _ in bps]
        if any(t1 >= t2 for t1, t2 in zip(times, times[1:])):
            raise ValueError("profile breakpoint times must be strictly increasing")
        self.times = np.array(times)
        self.values = [u for _, u in bps]

    def at(self, t) -> ExogenousInputs:
        """Inputs in effect at time t (hold-last)."""
        idx = int(np.searchsorted(self.times, t, side="right") - 1)
        return self.values[max(idx, 0)]

    def segment_times(self, t_end):
        """[0, inner breakpoints < t_end, t_end]."""
        inner = [float(t) for t in self.times if 0.0 < t < t_end]
        return [0.0] + inner + [float(t_end)]

    def warn_if_outside_range(self):
        for u in self.values:
            u.warn_if_outside_range()

    @staticmethod
    def constant(u):
        return InputProfile([(0.0, u)])


AUX_FIELDS = ("T_evap", "T_cond", "T_cond_out", "T_cc_in", "mdot_v", "mdot_star",
              "p_cc", "p_evap", "p_cond", "Q_wick", "dp_cap", "rho_2phi")
STATE_FIELDS = ("T_cc", "eta", "V_cc_l", "mdot_l")


@dataclass
class Trajectory:
    """Sampled integration result.  Arrays are read-only after production."""

    t: np.ndarray                      # (n,)
    states: np.ndarray                 # (n, 4): T_cc, eta, V_cc_l, mdot_l
    aux: np.ndarray                    # (n, 12), AUX_FIELDS order
    inputs: np.ndarray                 # (n, 3): Q_evap, T_sink, Q_cc applied
    event: Event | None = None
    error: str | None = None           # hard RHS failure, with timestamp

    def __post_init__(self):
        for a in (self.t, self.states, self.aux, self.inputs):
            a.setflags(write=False)

    def __len__(self):
        return len(self.t)

    def state(self, i) -> LhpState:
        return LhpState.from_array(self.states[i])

    def aux_at(self, i) -> AuxOutputs:
        return aux_from_array(self.aux[i])

    def final_state(self) -> LhpState:
        return self.state(len(self) - 1)

    def column(self, name):
        if name in STATE_FIELDS:
            return self.states[:, STATE_FIELDS.index(name)]
        if name in AUX_FIELDS:
            return self.aux[:, AUX_FIELDS.index(name)]
        raise KeyError(name)


# ---------------------------------------------------------------------------
# Fixed-step RK4 kernel with event bisection
# ---------------------------------------------------------------------------

@jit
def _rk4_step(x, u, par, geo, fl, cache, h, k1, k2, k3, k4, xt, x_out, aux):
    """One classical RK4 step of size h.  Returns an RHS error code (0 = ok)."""
    code = rhs_kernel(x, u, par, geo, fl, cache, k1, aux)
    if code != _OK:
        return code
    for i in range(4):
        xt[i] = x[i] + 0.5 * h * k1[i]
    code = rhs_kernel(xt, u, par, geo, fl, cache, k2, aux)
    if code != _OK:
        return code
    for i in range(4):
        xt[i] = x[i] + 0.5 * h * k2[i]
    code = rhs_kernel(xt, u, par, geo, fl, cache, k3, aux)
    if code != _OK:
        return code
    for i in range(4):
        xt[i] = x[i] + h * k3[i]
    code = rhs_kernel(xt, u, par, geo, fl, cache, k4, aux)
    if code != _OK:
        return code
    for i in range(4):
        x_out[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    return _OK


@jit
def _bounds_code(x, geo):
    """0 if strictly inside the mode region, else the violated-bound code."""
    if not (0.0 < x[1] < geo[1]):
        return _ERR_ETA
    if not (0.0 < x[2] < geo[0]):
        return _ERR_VCCL
    if x[3] <= 0.0:
        return _ERR_MDOT
    return _OK


@jit
def _is_boundary_code(code):
    return code == _ERR_ETA or code == _ERR_VCCL or code == _ERR_MDOT


@jit
def _advance_rk4(x, u, par, geo, fl, cache, dt, h):
    """Advance `x` in place by `dt` with fixed steps `h` (last step shortened).

    Returns (status, code, t_local):
      status 0 - completed; t_local == dt
      status 1 - mode boundary ahead at t_local (located within 1e-3 s);
                 x holds the last strictly-inside state; `code` names the bound
      status 2 - hard RHS error `code` at t_local
    """
    k1 = np.empty(4)
    k2 = np.empty(4)
    k3 = np.empty(4)
    k4 = np.empty(4)
    xt = np.empty(4)
    x_new = np.empty(4)
    aux = np.empty(N_AUX)
    t_loc = 0.0
    while t_loc < dt - 1e-12:
        hstep = min(h, dt - t_loc)
        code = _rk4_step(x, u, par, geo, fl, cache, hstep, k1, k2, k3, k4, xt,
                         x_new, aux)
        if code == _OK:
            code = _bounds_code(x_new, geo)
        if code == _OK:
            for i in range(4):
                x[i] = x_new[i]
            t_loc += hstep
            continue
        if not _is_boundary_code(code):
            return 2, code, t_loc
        # Boundary crossing inside [t_loc, t_loc + hstep]: bisect the step size.
        lo = 0.0
        hi = hstep
        hit = code
        while hi - lo > EVENT_LOCATE_DT:
            mid = 0.5 * (lo + hi)
            code = _rk4_step(x, u, par, geo, fl, cache, mid, k1, k2, k3, k4, xt,
                             x_new, aux)
            if code == _OK:
                code = _bounds_code(x_new, geo)
            if code == _OK:
                lo = mid
            elif _is_boundary_code(code):
                hi = mid
                hit = code
            else:
                return 2, code, t_loc + mid
        if lo > 0.0:
            code = _rk4_step(x, u, par, geo, fl, cache, lo, k1, k2, k3, k4, xt,
                             x_new, aux)
            if code == _OK:
                for i in range(4):
                    x[i] = x_new[i]
        return 1, hit, t_loc + hi
    return 0, _OK, dt


def _event_kind(code, x, geom):
    if code == _ERR_ETA:
        return "eta_max" if x[1] > 0.5 * geom.L_cond else "eta_min"
    if code == _ERR_VCCL:
        return "V_cc_l_max" if x[2] > 0.5 * geom.V_cc else "V_cc_l_min"
    return "mdot_l_min"


# ---------------------------------------------------------------------------
# RHS closure
# ---------------------------------------------------------------------------

class _Rhs:
    """RHS binding packed parameter arrays and one warm-start cache.

    `lenient=True` evaluates with the solver-trial kernel mode (state clamped
    just inside the mode region) so adaptive solvers can recover from trial
    steps that poke outside; domain enforcement then falls to the terminal
    events and to strict re-evaluation of recorded samples.
    """

    def __init__(self, params, geom, antoine, T_amb, cache=None, lenient=False):
        self.par = pack_params(params)
        self.geo = pack_geometry(geom)
        self.fl = pack_fluid(antoine, T_amb)
        self.cache = cache.values if cache is not None else np.zeros(3)
        self.strict = 0 if lenient else 1
        self._dx = np.empty(4)
        self._aux = np.empty(N_AUX)

    def __call__(self, x, u, t=None):
        code = rhs_kernel(np.asarray(x, dtype=float), u, self.par, self.geo,
                          self.fl, self.cache, self._dx, self._aux, self.strict)
        if code != _OK:
            _raise_kernel_error(code, t=t)
        return self._dx.copy()

    def aux(self, x, u, t=None):
        self(x, u, t)
        return self._aux.copy()

    def lenient_view(self):
        """A lenient-mode evaluator sharing this one's parameters and cache."""
        view = object.__new__(_Rhs)
        view.par, view.geo, view.fl = self.par, self.geo, self.fl
        view.cache = self.cache
        view.strict = 0
        view._dx = np.empty(4)
        view._aux = np.empty(N_AUX)
        return view


# ---------------------------------------------------------------------------
# Embedded Fehlberg 4(5)
# ---------------------------------------------------------------------------

_RKF_A = (
    (),
    (1 / 4,),
    (3 / 32, 9 / 32),
    (1932 / 2197, -7200 / 2197, 7296 / 2197),
    (439 / 216, -8, 3680 / 513, -845 / 4104),
    (-8 / 27, 2, -3544 / 2565, 1859 / 4104, -11 / 40),
)
_RKF_B5 = (16 / 135, 0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55)
_RKF_B4 = (25 / 216, 0, 1408 / 2565, 2197 / 4104, -1 / 5, 0)


def _rk45_segment(rhs, x, u, t0, t1, opts, params, geom, antoine):
    """Adaptive RKF45 at constant inputs.  Returns (x_end, t_reached, code)."""
    atol = np.asarray(opts.atol)
    geo = pack_geometry(geom)
    t = t0
    aux0 = rhs.aux(x, u, t)
    h = opts.h or min(t1 - t0, opts.safety * RK4_STABILITY
                      / max(fast_mode_rate(x, aux0, params, geom, antoine), 1e-12))
    k = [np.zeros(4)] * 6
    while t < t1 - 1e-12:
        h = min(h, t1 - t)
        try:
            k[0] = rhs(x, u, t)
            for i in range(1, 6):
                xi = x + h * sum(a * k[j] for j, a in enumerate(_RKF_A[i]))
                k[i] = rhs(xi, u, t)
            x5 = x + h * sum(b * ki for b, ki in zip(_RKF_B5, k))
            x4 = x + h * sum(b * ki for b, ki in zip(_RKF_B4, k))
        except LhpError:
            h *= 0.5
            if h < 1e-10:
                raise ConvergenceError(
                    "rk45 step size collapsed at a model-validity limit")
            continue
        err = float(np.max(np.abs(x5 - x4) / (atol + opts.rtol * np.abs(x5))))
        if err <= 1.0:
            code = _bounds_code(x5, geo)
            if code != _OK:
                return x, t, code
            x = x5
            t += h
        h *= float(np.clip(0.9 * max(err, 1e-12) ** -0.2, 0.2, 5.0))
    return x, t1, _OK


# ---------------------------------------------------------------------------
# Public drivers
# ---------------------------------------------------------------------------

def _auto_h(x, aux, params, geom, antoine, opts):
    rate = fast_mode_rate(x, aux, params, geom, antoine)
    return opts.safety * RK4_STABILITY / max(rate, 1e-12)


def integrate(x0, profile, params, geom, t_end,
              opts: IntegratorOptions = IntegratorOptions(),
              antoine=AMMONIA_ANTOINE, T_amb=T_AMB_DEFAULT) -> Trajectory:
    """Integrate from `x0` under `profile` until `t_end` (or a mode boundary).

    Output is sampled every `opts.sample_dt` seconds plus at t_end; steps are
    split at profile breakpoints and sample instants, never straddling either.
    Mode-boundary crossings terminate the trajectory with a typed `Event`;
    other model-validity failures are recorded on `Trajectory.error` with the
    failure time.
    """
    if t_end <= 0.0:
        raise ValueError("t_end must be positive")
    if isinstance(profile, ExogenousInputs):
        profile = InputProfile.constant(profile)
    profile.warn_if_outside_range()

    x = (x0.as_array() if isinstance(x0, LhpState) else
         np.asarray(x0, dtype=float)).copy()
    rhs = _Rhs(params, geom, antoine, T_amb, AuxCache())

    sample_times = np.arange(0.0, t_end + 0.5 * opts.sample_dt, opts.sample_dt)
    if sample_times[-1] < t_end:
        sample_times = np.append(sample_times, t_end)

    if opts.method == "lsoda":
        return _integrate_lsoda(x, profile, geom, t_end, opts, sample_times, rhs)
    if opts.method not in ("rk4", "rk45"):
        raise ValueError(f"unknown integration method {opts.method!r}")

    rec_t, rec_x, rec_aux, rec_u = [], [], [], []
    event = None
    error = None

    def record(t):
        u = profile.at(t)
        aux = rhs.aux(x, u.as_array(), t)
        rec_t.append(t)
        rec_x.append(x.copy())
        rec_aux.append(aux[:12])
        rec_u.append(u.as_array())
        return aux

    aux = record(0.0)
    seg_times = profile.segment_times(t_end)
    done = False
    for t_seg0, t_seg1 in zip(seg_times, seg_times[1:]):
        if done:
            break
        ua = profile.at(t_seg0).as_array()
        pts = [float(t) for t in sample_times if t_seg0 < t <= t_seg1]
        if not pts or pts[-1] < t_seg1:
            pts = pts + [t_seg1]
        t_cur = t_seg0
        for t_next in pts:
            if opts.method == "rk4":
                h = opts.h or _auto_h(x, aux, params, geom, antoine, opts)
                status, code, t_loc = _advance_rk4(
                    x, ua, rhs.par, rhs.geo, rhs.fl, rhs.cache, t_next - t_cur, h)
                if status == 1:
                    event = Event(kind=_event_kind(code, x, geom), t=t_cur + t_loc)
                    done = True
                elif status == 2:
                    error = f"{_ERR_MESSAGES[code]} (at t = {t_cur + t_loc:.6f} s)"
                    done = True
            else:
                try:
                    x, t_r, code = _rk45_segment(rhs, x, ua, t_cur, t_next, opts,
                                                 params, geom, antoine)
                    if code != _OK:
                        event = Event(kind=_event_kind(code, x, geom), t=t_r)
                        done = True
                except LhpError as exc:
                    error = f"{exc} (at t ~ {t_cur:.6f} s)"
                    done = True
            if done:
                break
            t_cur = t_next
            if t_cur in sample_times:
                aux = record(t_cur)
    return Trajectory(t=np.array(rec_t), states=np.array(rec_x),
                      aux=np.array(rec_aux), inputs=np.array(rec_u),
                      event=event, error=error)


def _integrate_lsoda(x, profile, geom, t_end, opts, sample_times, rhs):
    from scipy.integrate import solve_ivp

    # Trial evaluations use the lenient kernel mode; recorded samples use the
    # strict `rhs`, and the terminal events below police real crossings.
    trial_rhs = rhs.lenient_view()

    kinds = ["eta_min", "eta_max", "V_cc_l_min", "V_cc_l_max", "mdot_l_min"]

    def make_events():
        evs = [
            lambda t, y: y[1],
            lambda t, y: geom.L_cond - y[1],
            lambda t, y: y[2],
            lambda t, y: geom.V_cc - y[2],
            lambda t, y: y[3],
        ]
        for e in evs:
            e.terminal = True
        return evs

    rec_t, rec_x, rec_aux, rec_u = [], [], [], []
    event = None
    error = None

    def record(t, y):
        u = profile.at(t)
        aux = rhs.aux(y, u.as_array(), t)   # strict evaluation
        rec_t.append(float(t))
        rec_x.append(np.asarray(y, dtype=float).copy())
        rec_aux.append(aux[:12])
        rec_u.append(u.as_array())

    record(0.0, x)
    seg_times = profile.segment_times(t_end)
    for t_seg0, t_seg1 in zip(seg_times, seg_times[1:]):
        if error is not None:
            break
        ua = profile.at(t_seg0).as_array()

        def fun(t, y, _ua=ua):
            return trial_rhs(y, _ua, t)

        pts = [float(t) for t in sample_times if t_seg0 < t <= t_seg1]
        t_eval = sorted(set(pts + [t_seg1]))
        try:
            sol = solve_ivp(fun, (t_seg0, t_seg1), x, method="LSODA",
                            t_eval=t_eval, events=make_events(),
                            rtol=opts.rtol, atol=np.asarray(opts.atol))
        except LhpError as exc:
            error = str(exc)
            break
        sol_y = np.asarray(sol.y)
        for ti, yi in zip(sol.t, sol_y.T):
            if float(ti) in pts:
                try:
                    record(float(ti), yi)
                except LhpError as exc:
                    error = f"{exc} (at t = {float(ti):.6f} s)"
                    break
        if sol_y.size:
            x = sol_y[:, -1].copy()
        if sol.status == 1:
            for idx, te in enumerate(sol.t_events):
                if len(te):
                    event = Event(kind=kinds[idx], t=float(te[0]))
                    break
            break
        if sol.status < 0:
            error = f"lsoda failure: {sol.message}"
            break
    return Trajectory(t=np.array(rec_t), states=np.array(rec_x),
                      aux=np.array(rec_aux), inputs=np.array(rec_u),
                      event=event, error=error)


# ---------------------------------------------------------------------------
# Equilibrium solve
# ---------------------------------------------------------------------------

def find_equilibrium(u, params, geom, guess, antoine=AMMONIA_ANTOINE,
                     T_amb=T_AMB_DEFAULT, res_tol=EQ_RES_TOL,
                     max_iter=60) -> LhpState:
    """Model equilibrium for inputs `u`, holding V_cc_l at the guess value.

    Equilibria form a one-parameter family in V_cc_l: the CC energy numerator
    does not involve V_cc_l, so stationarity cannot pin the fill level (it is
    set by the fluid inventory, not the balances).  The remaining 3x3 system
    (dT_cc/dt, deta/dt, dmdot_l/dt) is solved by damped Newton with central
    differences; its zero implies mdot_v = mdot_l, hence dV_cc_l/dt = 0 too.

    Converged when |dT_cc/dt| < res_tol[0] K/s, |deta/dt| < res_tol[1] m/s and
    |dmdot_l/dt| < res_tol[2] kg/s^2.  Raises ConvergenceError otherwise.
    """
    x = (guess.as_array() if isinstance(guess, LhpState) else
         np.asarray(guess, dtype=float)).copy()
    rhs = _Rhs(params, geom, antoine, T_amb, AuxCache())
    ua = u.as_array() if isinstance(u, ExogenousInputs) else np.asarray(u, dtype=float)

    idx = np.array([0, 1, 3])                # T_cc, eta, mdot_l
    z_scales = np.array([1.0, 1e-2, 1e-6])   # K, m, kg/s
    res_tol = np.asarray(res_tol)

    def residual(z):
        xf = x.copy()
        xf[idx] = z
        return rhs(xf, ua)[idx] / res_tol     # converged when max |.| < 1

    z = x[idx].copy()
    r = residual(z)
    norm = float(np.max(np.abs(r)))
    for _ in range(max_iter):
        if norm < 1.0:
            break
        J = np.empty((3, 3))
        for j in range(3):
            h = 1e-6 * z_scales[j]
            zp = z.copy()
            zm = z.copy()
            zp[j] += h
            zm[j] -= h
            J[:, j] = (residual(zp) - residual(zm)) / (2.0 * h)
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(
                f"singular Jacobian in equilibrium solve: {exc}", residual=norm)
        lam = 1.0
        improved = False
        for _ in range(50):
            trial = z + lam * step
            try:
                tr = residual(trial)
            except LhpError:
                lam *= 0.5
                continue
            tn = float(np.max(np.abs(tr)))
            if tn < norm:
                z, r, norm = trial, tr, tn
                improved = True
                break
            lam *= 0.5
        if not improved:
            _raise_equilibrium_failure("equilibrium Newton stalled", z, geom, norm)
    else:
        _raise_equilibrium_failure("equilibrium solve did not converge", z, geom,
                                   norm)
    x[idx] = z
    return LhpState.from_array(x)


def _raise_equilibrium_failure(message, z, geom, norm):
    # A stall pinned against the eta bounds means the stationary interface
    # balance needs the fixed-conductance mode; report it as such.
    eta = z[1]
    if eta > 0.98 * geom.L_cond or eta < 0.02 * geom.L_cond:
        raise ModeBoundaryError(
            "no variable-conductance equilibrium: the stationary interface "
            f"balance pushes eta to {eta:.4f} m against the condenser length "
            f"{geom.L_cond:.4f} m")
    raise ConvergenceError(message, residual=norm)


def find_heater_equilibrium(T_cc_target, Q_evap, T_sink, params, geom, guess,
                            antoine=AMMONIA_ANTOINE, T_amb=T_AMB_DEFAULT,
                            tol=1e-6, max_iter=40):
    """Heater power holding T_cc at `T_cc_target` for given disturbances.

    Secant iteration on Q_cc over the equilibrium map (T_cc rises monotonically
    with heater power).  `tol` (K) cannot usefully go below ~1e-7: that is the
    T_cc resolution implied by the equilibrium residual thresholds.  Returns
    (Q_cc, equilibrium LhpState); V_cc_l stays at the guess value.  The result
    may lie outside the physical heater range - the caller decides whether
    that is acceptable.
    """
    def T_eq(q, g):
        u = ExogenousInputs(Q_evap=Q_evap, T_sink=T_sink, Q_cc=q)
        eq = find_equilibrium(u, params, geom, g, antoine, T_amb)
        return eq.T_cc, eq

    q0, q1 = 0.0, 5.0
    g = guess
    f0, g = T_eq(q0, g)
    f1, g = T_eq(q1, g)
    for _ in range(max_iter):
        if abs(f1 - T_cc_target) < tol:
            return q1, g
        denom = f1 - f0
        if denom == 0.0:
            raise ConvergenceError("heater power has no authority over T_cc here",
                                   residual=abs(f1 - T_cc_target))
        q2 = q1 + (T_cc_target - f1) * (q1 - q0) / denom
        q0, f0 = q1, f1
        q1 = q2
        f1, g = T_eq(q1, g)
    raise ConvergenceError("heater-equilibrium secant did not converge",
                           residual=abs(f1 - T_cc_target))
