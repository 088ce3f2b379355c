"""Run configuration, scenario execution, metrics, and data export.

A run config is one JSON document; every physical key carries its unit in the
name (D_c_m, Q_evap_W, T_sink_degC) so a mis-scaled value is visible at the
call site.  Any key can be overridden from the environment with the LHPSIM_
prefix and '__' as the path separator, e.g.

    LHPSIM_integrator__method=rk4  LHPSIM_controller__lambda_1_s=2.0

Scenario outputs land in the config's output_dir: `trajectory.csv` (fixed,
versioned column schema; SI units plus *_degC convenience columns),
`control.csv` for closed-loop runs, and `manifest.json` echoing the fully
resolved config plus solver diagnostics and metrics, so a run can be
reproduced from its manifest alone.  Floats are serialized with 17 significant
digits (exact round-trip).
"""

import json
import math
import os
import time
from dataclasses import dataclass

import numpy as np

from .ammonia import AMMONIA_ANTOINE, AntoineParams, T_ZERO_C, sat_props
from .control import ControllerConfig, DisturbanceProfile, closed_loop
from .defaults import (
    DEFAULT_GEOMETRY,
    DEFAULT_PARAMS,
    REFERENCE_STATE,
)
from .engine import (
    AUX_FIELDS,
    InputProfile,
    IntegratorOptions,
    Trajectory,
    find_equilibrium,
    integrate,
)
from .errors import ConfigError, GridMismatchError
from .identify import OperatingPoint, clamp_condenser_outlet, identify
from .model import ExogenousInputs, Geometry, LhpState, LumpedParams

CSV_SCHEMA_VERSION = "lhpsim-trajectory-v1"
ENV_PREFIX = "LHPSIM_"

TRAJECTORY_COLUMNS = (
    "t", "T_cc", "eta", "V_cc_l", "mdot_l",
    "T_evap", "T_cond", "T_cond_out", "T_cc_in",
    "mdot_v", "mdot_star", "p_cc", "p_evap", "p_cond", "Q_wick",
    "Q_cc_applied", "Q_evap", "T_sink",
    "T_cc_degC", "T_evap_degC", "T_cond_degC", "T_cond_out_degC",
    "T_cc_in_degC", "T_sink_degC",
)


def fmt(x):
    """17-significant-digit float formatting (exact round-trip)."""
    return f"{float(x):.17g}"


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Metrics:
    """Maximum absolute deviation and root-mean-square error of a signal pair."""

    mad: float    # K
    rmse: float   # K
    reference: str = ""

    def as_dict(self):
        return {"mad_K": self.mad, "rmse_K": self.rmse, "reference": self.reference}


def compute_metrics(a, b, t_a=None, t_b=None, reference=""):
    """MAD and RMSE between two signals sampled on the same grid."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if t_a is not None or t_b is not None:
        if t_a is None or t_b is None or len(t_a) != len(t_b) \
                or not np.array_equal(np.asarray(t_a), np.asarray(t_b)):
            raise GridMismatchError("signals are not on identical sample grids")
    if a.shape != b.shape:
        raise GridMismatchError(
            f"signal lengths differ: {a.shape} vs {b.shape}")
    d = a - b
    return Metrics(mad=float(np.max(np.abs(d))),
                   rmse=float(math.sqrt(np.mean(d * d))),
                   reference=reference)


# ---------------------------------------------------------------------------
# Property table
# ---------------------------------------------------------------------------

PROPS_COLUMNS = ("T_degC", "rho_l_kg_m3", "rho_v_kg_m3", "cp_l_J_kgK",
                 "cp_v_J_kgK", "dh_v_J_kg", "mu_l_Pa_s", "sigma_N_m", "p_sat_Pa")


def props_table(t_min=-40.0, t_max=80.0, step=1.0):
    """Rows of all saturated-ammonia correlations over [t_min, t_max] degC."""
    from .ammonia import antoine_pressure
    if step <= 0.0:
        raise ValueError("step must be positive")
    rows = []
    n = int(round((t_max - t_min) / step))
    for i in range(n + 1):
        t = t_min + i * step
        p = sat_props(t)
        rows.append((t, p.rho_l, p.rho_v, p.cp_l, p.cp_v, p.dh_v, p.mu_l,
                     p.sigma, antoine_pressure(t + T_ZERO_C)))
    return rows


def write_props_csv(path, t_min=-40.0, t_max=80.0, step=1.0):
    with open(path, "w") as f:
        f.write(",".join(PROPS_COLUMNS) + "\n")
        for row in props_table(t_min, t_max, step):
            f.write(",".join(fmt(v) for v in row) + "\n")


# ---------------------------------------------------------------------------
# Config loading
# ---------------------------------------------------------------------------

_REQUIRED = object()


def _get(cfg, path, default=_REQUIRED):
    node = cfg
    for p in path.split("."):
        if not isinstance(node, dict) or p not in node:
            if default is _REQUIRED:
                raise ConfigError("missing required config field", path=path)
            return default
        node = node[p]
    return node


def apply_env_overrides(cfg, environ=None):
    """Override config keys from LHPSIM_a__b__c=value environment entries."""
    environ = os.environ if environ is None else environ
    for key, raw in environ.items():
        if not key.startswith(ENV_PREFIX):
            continue
        path = key[len(ENV_PREFIX):].split("__")
        node = cfg
        for p in path[:-1]:
            node = node.setdefault(p, {})
            if not isinstance(node, dict):
                raise ConfigError("environment override descends into a scalar",
                                  path=".".join(path))
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node[path[-1]] = value
    return cfg


def load_config(path, environ=None):
    try:
        with open(path) as f:
            cfg = json.load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    return apply_env_overrides(cfg, environ)


def geometry_from_config(cfg):
    g = cfg.get("geometry", {})
    d = DEFAULT_GEOMETRY
    return Geometry(
        V_cc=float(g.get("V_cc_m3", d.V_cc)),
        L_cond=float(g.get("L_cond_m", d.L_cond)),
        L_ll=float(g.get("L_ll_m", d.L_ll)),
        D_c=float(g.get("D_c_m", d.D_c)),
        R_p=float(g.get("R_p_m", d.R_p)),
        theta=float(g.get("theta_rad", d.theta)),
    )


def fluid_from_config(cfg):
    fl = cfg.get("fluid", {})
    a = AMMONIA_ANTOINE
    antoine = AntoineParams(
        A_wf=float(fl.get("A_wf", a.A_wf)),
        B_wf=float(fl.get("B_wf", a.B_wf)),
        C_wf=float(fl.get("C_wf", a.C_wf)),
        R_gas=float(fl.get("R_gas_J_kgK", a.R_gas)),
    )
    T_amb = float(fl.get("T_amb_degC", 25.0)) + T_ZERO_C
    return antoine, T_amb


def params_from_config(cfg):
    p = cfg.get("params", {})
    d = DEFAULT_PARAMS
    return LumpedParams(
        R_wick=float(p.get("R_wick_K_W", d.R_wick)),
        k_2phi=float(p.get("k_2phi_W_m2K", d.k_2phi)),
        k_sc=float(p.get("k_sc_W_m2K", d.k_sc)),
        k_ll=float(p.get("k_ll_W_m2K", d.k_ll)),
        dp_fri=float(p.get("dp_fri_Pa", d.dp_fri)),
        alpha_bar=float(p.get("alpha_bar", d.alpha_bar)),
    )


def state_from_config(node, path="initial_state"):
    if not isinstance(node, dict):
        raise ConfigError("expected a state object", path=path)
    try:
        return LhpState(
            T_cc=float(node["T_cc_degC"]) + T_ZERO_C,
            eta=float(node["eta_m"]),
            V_cc_l=float(node["V_cc_l_m3"]),
            mdot_l=float(node["mdot_l_kg_s"]),
        )
    except KeyError as exc:
        raise ConfigError("missing required config field",
                          path=f"{path}.{exc.args[0]}")


def _inputs_from_entry(entry, i, need_qcc):
    try:
        q = float(entry["Q_evap_W"])
        ts = float(entry["T_sink_degC"]) + T_ZERO_C
    except KeyError as exc:
        raise ConfigError("missing required config field",
                          path=f"profile[{i}].{exc.args[0]}")
    if need_qcc:
        if "Q_cc_W" not in entry:
            raise ConfigError("missing required config field",
                              path=f"profile[{i}].Q_cc_W")
        return float(entry["t_s"]), ExogenousInputs(q, ts, float(entry["Q_cc_W"]))
    return float(entry["t_s"]), (q, ts)


def profile_from_config(cfg, need_qcc=True):
    entries = _get(cfg, "profile")
    if not isinstance(entries, list) or not entries:
        raise ConfigError("profile must be a non-empty list", path="profile")
    bps = []
    for i, entry in enumerate(entries):
        if "t_s" not in entry:
            raise ConfigError("missing required config field", path=f"profile[{i}].t_s")
        bps.append(_inputs_from_entry(entry, i, need_qcc))
    try:
        if need_qcc:
            return InputProfile(bps)
        return DisturbanceProfile([(t, q, ts) for t, (q, ts) in bps])
    except ValueError as exc:
        raise ConfigError(str(exc), path="profile")


def integrator_from_config(cfg):
    it = cfg.get("integrator", {})
    return IntegratorOptions(
        method=str(it.get("method", "lsoda")),
        h=None if it.get("h_s") in (None, "auto") else float(it["h_s"]),
        sample_dt=float(it.get("sample_dt_s", 1.0)),
        rtol=float(it.get("rtol", 1e-8)),
        atol=tuple(it.get("atol", (1e-6, 1e-7, 1e-12, 1e-9))),
    )


def controller_from_config(cfg):
    c = cfg.get("controller", {})
    return ControllerConfig(
        lam=float(c.get("lambda_1_s", 1.0)),
        T_set=float(c.get("T_set_degC", 27.0)) + T_ZERO_C,
        Q_cc_min=float(c.get("Q_cc_min_W", 0.0)),
        Q_cc_max=float(c.get("Q_cc_max_W", 10.0)),
        control_dt=float(c.get("control_dt_s", 0.1)),
    )


def resolve_initial_state(cfg, params, geom, antoine, T_amb, first_inputs):
    node = _get(cfg, "initial_state", "equilibrium")
    if node == "equilibrium":
        guess = state_from_config(cfg["initial_guess"], "initial_guess") \
            if "initial_guess" in cfg else REFERENCE_STATE
        return find_equilibrium(first_inputs, params, geom, guess, antoine, T_amb)
    return state_from_config(node)


def resolve_control_initial_state(cfg, params, geom, antoine, T_amb,
                                  Q_evap, T_sink, ctrl):
    """Closed-loop 'equilibrium' start = the setpoint-holding rest point.

    If holding the setpoint needs heater power outside the actuator range, the
    loop cannot rest at the setpoint; fall back to the equilibrium at the
    clipped bound (an honestly saturated start)."""
    node = _get(cfg, "initial_state", "equilibrium")
    if node != "equilibrium":
        return state_from_config(node)
    from .engine import find_heater_equilibrium
    guess = state_from_config(cfg["initial_guess"], "initial_guess") \
        if "initial_guess" in cfg else REFERENCE_STATE
    q_hold, eq = find_heater_equilibrium(ctrl.T_set, Q_evap, T_sink, params,
                                         geom, guess, antoine, T_amb)
    if ctrl.Q_cc_min <= q_hold <= ctrl.Q_cc_max:
        return eq
    q_clip = min(max(q_hold, ctrl.Q_cc_min), ctrl.Q_cc_max)
    return find_equilibrium(ExogenousInputs(Q_evap, T_sink, q_clip), params,
                            geom, guess, antoine, T_amb)


# ---------------------------------------------------------------------------
# Output writers
# ---------------------------------------------------------------------------

def write_trajectory_csv(path, traj: Trajectory):
    with open(path, "w") as f:
        f.write(",".join(TRAJECTORY_COLUMNS) + "\n")
        for i in range(len(traj)):
            t = traj.t[i]
            s = traj.states[i]
            a = traj.aux[i]
            u = traj.inputs[i]
            row = [
                t, s[0], s[1], s[2], s[3],
                a[0], a[1], a[2], a[3],
                a[4], a[5], a[6], a[7], a[8], a[9],
                u[2], u[0], u[1],
                s[0] - T_ZERO_C, a[0] - T_ZERO_C, a[1] - T_ZERO_C,
                a[2] - T_ZERO_C, a[3] - T_ZERO_C, u[1] - T_ZERO_C,
            ]
            f.write(",".join(fmt(v) for v in row) + "\n")


def write_control_csv(path, log):
    with open(path, "w") as f:
        f.write("t,e,Q_cc_unsat,Q_cc_applied,saturated\n")
        for i in range(len(log)):
            f.write(",".join([fmt(log.t[i]), fmt(log.e[i]), fmt(log.Q_cc_unsat[i]),
                              fmt(log.Q_cc_applied[i]),
                              "1" if log.saturated[i] else "0"]) + "\n")


class _JsonFloat(float):
    def __repr__(self):
        return fmt(self)


def _json_ready(obj):
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return _JsonFloat(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_json_ready(v) for v in obj.tolist()]
    return obj


def write_manifest(path, manifest):
    with open(path, "w") as f:
        json.dump(_json_ready(manifest), f, indent=2)
        f.write("\n")


# ---------------------------------------------------------------------------
# Scenario runners
# ---------------------------------------------------------------------------

def _resolved_config(cfg, geom, antoine, T_amb, params, x0):
    out = dict(cfg)
    out["geometry"] = {"V_cc_m3": geom.V_cc, "L_cond_m": geom.L_cond,
                       "L_ll_m": geom.L_ll, "D_c_m": geom.D_c,
                       "R_p_m": geom.R_p, "theta_rad": geom.theta}
    out["fluid"] = {"A_wf": antoine.A_wf, "B_wf": antoine.B_wf,
                    "C_wf": antoine.C_wf, "R_gas_J_kgK": antoine.R_gas,
                    "T_amb_degC": T_amb - T_ZERO_C}
    out["params"] = {"R_wick_K_W": params.R_wick, "k_2phi_W_m2K": params.k_2phi,
                     "k_sc_W_m2K": params.k_sc, "k_ll_W_m2K": params.k_ll,
                     "dp_fri_Pa": params.dp_fri, "alpha_bar": params.alpha_bar}
    out["initial_state"] = {"T_cc_degC": x0.T_cc - T_ZERO_C, "eta_m": x0.eta,
                            "V_cc_l_m3": x0.V_cc_l, "mdot_l_kg_s": x0.mdot_l}
    return out


def _traj_diag(traj, wall, geom):
    d = {"samples": len(traj), "wall_time_s": wall,
         "csv_schema": CSV_SCHEMA_VERSION}
    if len(traj):
        # Laminar-friction assumption diagnostic: warn above Re 2300 but keep
        # the correlation (the model has no turbulent branch).
        from .ammonia import mu_l_c
        t_line = 0.5 * (traj.aux[:, 2] + traj.aux[:, 3]) - T_ZERO_C
        mu = np.array([mu_l_c(float(t)) for t in t_line])
        re = 4.0 * traj.states[:, 3] / (math.pi * geom.D_c * mu)
        d["max_reynolds"] = float(re.max())
        if re.max() > 2300.0:
            import warnings
            warnings.warn(
                f"liquid-line Reynolds number reached {re.max():.0f} (> 2300); "
                "the laminar friction correlation is extrapolating",
                stacklevel=2)
    if traj.event is not None:
        d["event"] = {"kind": traj.event.kind, "t_s": traj.event.t}
    if traj.error is not None:
        d["error"] = traj.error
    return d


def run_sim_scenario(cfg, output_dir=None):
    """Open-loop scenario: integrate the profile, write CSV + manifest."""
    geom = geometry_from_config(cfg)
    antoine, T_amb = fluid_from_config(cfg)
    params = params_from_config(cfg)
    profile = profile_from_config(cfg, need_qcc=True)
    t_end = float(_get(cfg, "t_end_s"))
    opts = integrator_from_config(cfg)
    x0 = resolve_initial_state(cfg, params, geom, antoine, T_amb, profile.at(0.0))

    out_dir = output_dir or cfg.get("output_dir", ".")
    os.makedirs(out_dir, exist_ok=True)
    t0 = time.perf_counter()
    traj = integrate(x0, profile, params, geom, t_end, opts, antoine, T_amb)
    wall = time.perf_counter() - t0

    write_trajectory_csv(os.path.join(out_dir, "trajectory.csv"), traj)
    manifest = {
        "scenario": cfg.get("title", "sim"),
        "mode": "sim",
        "config": _resolved_config(cfg, geom, antoine, T_amb, params, x0),
        "diagnostics": _traj_diag(traj, wall, geom),
    }
    write_manifest(os.path.join(out_dir, "manifest.json"), manifest)
    return traj, manifest


def run_control_scenario(cfg, output_dir=None):
    """Closed-loop scenario: run the heater control loop over the disturbances."""
    geom = geometry_from_config(cfg)
    antoine, T_amb = fluid_from_config(cfg)
    params = params_from_config(cfg)
    disturbances = profile_from_config(cfg, need_qcc=False)
    t_end = float(_get(cfg, "t_end_s"))
    ctrl = controller_from_config(cfg)
    it = cfg.get("integrator", {})
    sample_dt = float(it.get("sample_dt_s", 1.0))
    h_inner = it.get("h_s")
    h_inner = None if h_inner in (None, "auto") else float(h_inner)
    q0, ts0 = disturbances.at(0.0)
    x0 = resolve_control_initial_state(cfg, params, geom, antoine, T_amb,
                                       q0, ts0, ctrl)

    out_dir = output_dir or cfg.get("output_dir", ".")
    os.makedirs(out_dir, exist_ok=True)
    t0 = time.perf_counter()
    traj, log = closed_loop(x0, disturbances, ctrl, params, geom, t_end,
                            antoine, T_amb, sample_dt=sample_dt, h_inner=h_inner)
    wall = time.perf_counter() - t0

    write_trajectory_csv(os.path.join(out_dir, "trajectory.csv"), traj)
    write_control_csv(os.path.join(out_dir, "control.csv"), log)
    m = compute_metrics(traj.states[:, 0], np.full(len(traj), ctrl.T_set),
                        reference="T_cc vs T_set")
    dV = np.diff(0.5 * log.e ** 2)
    unsat = ~log.saturated[:-1]
    manifest = {
        "scenario": cfg.get("title", "control"),
        "mode": "control",
        "config": _resolved_config(cfg, geom, antoine, T_amb, params, x0),
        "controller": {"lambda_1_s": ctrl.lam, "T_set_degC": ctrl.T_set - T_ZERO_C,
                       "Q_cc_min_W": ctrl.Q_cc_min, "Q_cc_max_W": ctrl.Q_cc_max,
                       "control_dt_s": ctrl.control_dt},
        "diagnostics": _traj_diag(traj, wall, geom),
        "metrics": m.as_dict(),
        "lyapunov": {
            "unsaturated_steps": int(unsat.sum()),
            "saturated_steps": int(log.saturated.sum()),
            "max_dV_unsaturated": float(dV[unsat].max()) if unsat.any() else 0.0,
            "max_abs_e_unsaturated_K": float(np.abs(log.e[~log.saturated]).max())
            if (~log.saturated).any() else 0.0,
            "Q_cc_min_applied_W": float(log.Q_cc_applied.min()),
            "Q_cc_max_applied_W": float(log.Q_cc_applied.max()),
        },
    }
    write_manifest(os.path.join(out_dir, "manifest.json"), manifest)
    return (traj, log), manifest


def run_equilibrium(cfg, output_dir=None):
    """Solve the equilibrium for the first profile entry and write it out."""
    geom = geometry_from_config(cfg)
    antoine, T_amb = fluid_from_config(cfg)
    params = params_from_config(cfg)
    profile = profile_from_config(cfg, need_qcc=True)
    guess = state_from_config(cfg["initial_guess"], "initial_guess") \
        if "initial_guess" in cfg else REFERENCE_STATE
    u0 = profile.at(0.0)
    eq = find_equilibrium(u0, params, geom, guess, antoine, T_amb)
    from .model import state_derivatives
    dx, aux = state_derivatives(eq, u0, params, geom, antoine, T_amb)
    result = {
        "mode": "equilibrium",
        "inputs": {"Q_evap_W": u0.Q_evap, "T_sink_degC": u0.T_sink - T_ZERO_C,
                   "Q_cc_W": u0.Q_cc},
        "state": {"T_cc_degC": eq.T_cc - T_ZERO_C, "eta_m": eq.eta,
                  "V_cc_l_m3": eq.V_cc_l, "mdot_l_kg_s": eq.mdot_l},
        "aux": {name: getattr(aux, name) for name in AUX_FIELDS},
        "residual": list(dx),
    }
    if output_dir:
        os.makedirs(output_dir, exist_ok=True)
        write_manifest(os.path.join(output_dir, "equilibrium.json"), result)
    return eq, result


def run_lambda_sweep(cfg, output_dir=None):
    """Closed-loop runs over a list of decay rates; summary per lambda."""
    lambdas = _get(cfg, "lambdas")
    if not isinstance(lambdas, list) or not lambdas:
        raise ConfigError("lambdas must be a non-empty list", path="lambdas")
    rows = []
    for lam in lambdas:
        sub = dict(cfg)
        sub.setdefault("controller", {})
        sub["controller"] = dict(sub["controller"], lambda_1_s=float(lam))
        (traj, log), manifest = run_control_scenario(
            sub, output_dir=os.path.join(output_dir or cfg.get("output_dir", "."),
                                         f"lambda_{lam:g}"))
        rows.append({
            "lambda_1_s": float(lam),
            "mad_K": manifest["metrics"]["mad_K"],
            "rmse_K": manifest["metrics"]["rmse_K"],
            "saturated_steps": manifest["lyapunov"]["saturated_steps"],
            "max_abs_e_unsaturated_K":
                manifest["lyapunov"]["max_abs_e_unsaturated_K"],
            "max_dV_unsaturated": manifest["lyapunov"]["max_dV_unsaturated"],
            "event": manifest["diagnostics"].get("event"),
            "error": manifest["diagnostics"].get("error"),
        })
    out_dir = output_dir or cfg.get("output_dir", ".")
    os.makedirs(out_dir, exist_ok=True)
    write_manifest(os.path.join(out_dir, "lambda_sweep.json"),
                   {"mode": "sweep-lambda", "rows": rows})
    return rows


def run_fit_params(op_cfg, output_path=None):
    """Identify lumped parameters from an operating-point file."""
    geom = geometry_from_config(op_cfg)
    antoine, T_amb = fluid_from_config(op_cfg)
    inputs_node = _get(op_cfg, "inputs")
    state = state_from_config(_get(op_cfg, "state"), "state")
    try:
        inputs = ExogenousInputs(
            Q_evap=float(inputs_node["Q_evap_W"]),
            T_sink=float(inputs_node["T_sink_degC"]) + T_ZERO_C,
            Q_cc=float(inputs_node["Q_cc_W"]))
    except KeyError as exc:
        raise ConfigError("missing required config field", path=f"inputs.{exc.args[0]}")
    T_evap = float(_get(op_cfg, "T_evap_degC")) + T_ZERO_C
    T_cond = float(_get(op_cfg, "T_cond_degC")) + T_ZERO_C
    T_cond_out = float(_get(op_cfg, "T_cond_out_degC")) + T_ZERO_C
    margin = float(op_cfg.get("clamp_margin_K", 1e-4))
    T_cond_out = clamp_condenser_outlet(T_cond_out, inputs.T_sink, margin)
    op = OperatingPoint(inputs=inputs, state=state, T_evap=T_evap,
                        T_cond=T_cond, T_cond_out=T_cond_out)
    res = identify(op, geom, antoine=antoine, T_amb=T_amb)
    out = {
        "mode": "fit-params",
        "params": {
            "R_wick_K_W": res.params.R_wick,
            "k_2phi_W_m2K": res.params.k_2phi,
            "k_sc_W_m2K": res.params.k_sc,
            "k_ll_W_m2K": res.params.k_ll,
            "dp_fri_Pa": res.params.dp_fri,
            "alpha_bar": res.params.alpha_bar,
        },
        "T_cc_in_op_degC": res.T_cc_in_op - T_ZERO_C,
        "diagnostics": {"residual_norm": res.residual_norm,
                        "iterations": res.iterations},
    }
    if output_path:
        write_manifest(output_path, out)
    return res, out


# ---------------------------------------------------------------------------
# Built-in scenarios
# ---------------------------------------------------------------------------

def builtin_fig6_openloop():
    """Open-loop input steps: heater +1 W, load +1 W, sink +1 K, each held
    then reverted, over a 133 min horizon."""
    return {
        "title": "fig6_openloop",
        "initial_state": {"T_cc_degC": 26.86, "eta_m": 0.3268,
                          "V_cc_l_m3": 6.276e-6, "mdot_l_kg_s": 50.85e-6},
        "profile": [
            {"t_s": 0.0, "Q_evap_W": 60.0, "T_sink_degC": 0.0, "Q_cc_W": 4.653},
            {"t_s": 600.0, "Q_evap_W": 60.0, "T_sink_degC": 0.0, "Q_cc_W": 5.653},
            {"t_s": 1800.0, "Q_evap_W": 60.0, "T_sink_degC": 0.0, "Q_cc_W": 4.653},
            {"t_s": 3000.0, "Q_evap_W": 61.0, "T_sink_degC": 0.0, "Q_cc_W": 4.653},
            {"t_s": 4200.0, "Q_evap_W": 60.0, "T_sink_degC": 0.0, "Q_cc_W": 4.653},
            {"t_s": 5400.0, "Q_evap_W": 60.0, "T_sink_degC": 1.0, "Q_cc_W": 4.653},
            {"t_s": 6600.0, "Q_evap_W": 60.0, "T_sink_degC": 0.0, "Q_cc_W": 4.653},
        ],
        "t_end_s": 7980.0,
        "integrator": {"method": "lsoda", "sample_dt_s": 1.0},
        "output_dir": "out/fig6_openloop",
    }


def builtin_staircase_control():
    """Closed-loop disturbance staircase covering the operating range.

    Step sizes respect the model's validity limits for sudden input drops:
    an instantaneous load reduction beyond ~18 % (or a sink drop beyond
    ~0.23 (T_cc - T_sink)) collapses the condensation pressure faster than the
    interface can retreat and momentarily reverses the liquid column, which
    the model cannot represent.  Load increases and sink increases are benign
    in any size, so those legs move in large steps.
    """
    descent = [87.0, 76.0, 67.0, 59.0, 52.0, 46.0, 41.0, 36.0, 32.0, 28.0,
               25.0, 22.0, 20.0]
    stages = [
        (0.0, 60.0, 0.0),
        (90.0, 80.0, 0.0),
        (180.0, 100.0, 0.0),
        (270.0, 100.0, -5.0),
        (330.0, 100.0, -10.0),
        (390.0, 100.0, -15.0),
    ]
    stages += [(480.0 + 24.0 * k, q, -15.0) for k, q in enumerate(descent)]
    stages += [
        (870.0, 20.0, 0.0),
        (930.0, 20.0, 15.0),
        (1020.0, 60.0, 15.0),
        (1110.0, 100.0, 15.0),
    ]
    return {
        "title": "staircase_control",
        "initial_state": "equilibrium",
        "profile": [{"t_s": t, "Q_evap_W": q, "T_sink_degC": ts}
                    for t, q, ts in stages],
        "t_end_s": 1200.0,
        "controller": {"lambda_1_s": 1.0, "T_set_degC": 27.0,
                       "Q_cc_min_W": 0.0, "Q_cc_max_W": 10.0, "control_dt_s": 0.1},
        "integrator": {"sample_dt_s": 1.0},
        "output_dir": "out/staircase_control",
    }


BUILTIN_SCENARIOS = {
    "fig6_openloop": builtin_fig6_openloop,
    "staircase_control": builtin_staircase_control,
}
