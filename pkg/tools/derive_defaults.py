"""Re-derive the reconstructed default geometry and the frozen default parameters.

The loop hardware behind the bundled reference operating point is not public.
This script inverts the stationary relations at that operating point to back
out geometry values that make `identify` return the reference transfer
coefficients, then runs `identify` itself and prints the parameter literals
frozen into `lhpsim.defaults`.

Run:  python3 tools/derive_defaults.py
"""

import math

from lhpsim import (
    DEFAULT_GEOMETRY,
    REFERENCE_COEFFS,
    REFERENCE_INPUTS,
    REFERENCE_STATE,
    REFERENCE_T_COND,
    REFERENCE_T_COND_OUT,
    REFERENCE_T_EVAP,
    Geometry,
    OperatingPoint,
    identify,
)
from lhpsim.ammonia import T_ZERO_C, cp_l_c, dh_v_c
from lhpsim.identify import _solve_T_cc_in, friction_pressure_loss


def derive_geometry():
    s = REFERENCE_STATE
    u = REFERENCE_INPUTS
    mdot = s.mdot_l                      # stationary: mdot_v = mdot_star = mdot_l

    # D_c from the interface balance k_2phi pi D_c eta (T_cond - T_sink) = mdot dh_v
    dh_cd = dh_v_c(REFERENCE_T_COND - T_ZERO_C)
    D_c = mdot * dh_cd / (math.pi * s.eta * (REFERENCE_T_COND - u.T_sink)
                          * REFERENCE_COEFFS["k_2phi"])

    # L_cond from the subcooler outlet relation at the reference k_sc
    cpm_sc = 0.5 * (cp_l_c(REFERENCE_T_COND - T_ZERO_C)
                    + cp_l_c(REFERENCE_T_COND_OUT - T_ZERO_C))
    lnr = math.log((REFERENCE_T_COND_OUT - u.T_sink)
                   / (REFERENCE_T_COND - u.T_sink))
    L_cond = s.eta - mdot * cpm_sc * lnr / (
        math.pi * DEFAULT_GEOMETRY.D_c * REFERENCE_COEFFS["k_sc"])

    # T_cc_in from the stationary CC energy balance, then L_ll from the
    # liquid-line relation at the reference k_ll
    op = OperatingPoint(inputs=u, state=s, T_evap=REFERENCE_T_EVAP,
                        T_cond=REFERENCE_T_COND, T_cond_out=REFERENCE_T_COND_OUT)
    dp_fri = friction_pressure_loss(op, DEFAULT_GEOMETRY)
    cpm_ev = 0.5 * (cp_l_c(REFERENCE_T_EVAP - T_ZERO_C) + cp_l_c(s.T_cc - T_ZERO_C))
    Q_wick = u.Q_evap - mdot * (cpm_ev * (REFERENCE_T_EVAP - s.T_cc)
                                + dh_v_c(REFERENCE_T_EVAP - T_ZERO_C))
    T_cc_in = _solve_T_cc_in(s.T_cc, mdot, u.Q_cc + Q_wick)
    cpm_ll = 0.5 * (cp_l_c(REFERENCE_T_COND_OUT - T_ZERO_C)
                    + cp_l_c(T_cc_in - T_ZERO_C))
    lnr_ll = math.log((T_cc_in - (25.0 + T_ZERO_C))
                      / (REFERENCE_T_COND_OUT - (25.0 + T_ZERO_C)))
    L_ll = -mdot * cpm_ll * lnr_ll / (
        math.pi * DEFAULT_GEOMETRY.D_c * REFERENCE_COEFFS["k_ll"])

    print("derived geometry (before rounding to the shipped defaults):")
    print(f"  D_c    = {D_c * 1e3:.6f} mm   (shipped {DEFAULT_GEOMETRY.D_c * 1e3:.3f} mm)")
    print(f"  L_cond = {L_cond:.6f} m     (shipped {DEFAULT_GEOMETRY.L_cond:.3f} m)")
    print(f"  L_ll   = {L_ll:.6f} m     (shipped {DEFAULT_GEOMETRY.L_ll:.3f} m)")
    print(f"  dp_fri = {dp_fri:.3f} Pa   (reference {REFERENCE_COEFFS['dp_fri']:.0f} Pa)")
    print(f"  T_cc_in(op) = {T_cc_in - T_ZERO_C:.6f} degC")


def print_identified_defaults():
    op = OperatingPoint(inputs=REFERENCE_INPUTS, state=REFERENCE_STATE,
                        T_evap=REFERENCE_T_EVAP, T_cond=REFERENCE_T_COND,
                        T_cond_out=REFERENCE_T_COND_OUT)
    res = identify(op, DEFAULT_GEOMETRY)
    p = res.params
    print("\nDEFAULT_PARAMS literals (identify at the shipped geometry):")
    print(f"  R_wick = {p.R_wick:.17g}")
    print(f"  k_2phi = {p.k_2phi:.17g}")
    print(f"  k_sc   = {p.k_sc:.17g}")
    print(f"  k_ll   = {p.k_ll:.17g}")
    print(f"  dp_fri = {p.dp_fri:.17g}")
    print(f"  T_cc_in_op = {res.T_cc_in_op:.17g} K")
    for name, ref in REFERENCE_COEFFS.items():
        got = p.dp_fri if name == "dp_fri" else getattr(p, name)
        print(f"  {name}: {got:.6g} vs reference {ref:g}  ({got / ref - 1:+.4%})")


if __name__ == "__main__":
    derive_geometry()
    print_identified_defaults()
