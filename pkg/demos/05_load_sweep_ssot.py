"""Natural steady-state operating temperature (SSOT) versus heat load.

Sweeps equilibria at zero heater power and 0 degC sink.  The classic U-shape
appears, but for the bundled parameterization its minimum sits near 130 W -
beyond the 20-100 W operating range, which stays entirely on the falling
branch (the implied condenser is generously sized: at 100 W only about half
of it condenses).  Within 25-100 W the curve is therefore strictly
decreasing; the acceptance criterion that expects an interior minimum inside
that window is red for exactly this reason.

Also prints the sensitivity of the CC thermal capacity (and hence the
open-loop T_cc time constant and heater authority) to the unpublished chamber
volume V_cc: it is a required config item, not a constant of nature.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from lhpsim import (
    DEFAULT_GEOMETRY,
    DEFAULT_PARAMS,
    REFERENCE_STATE,
    ExogenousInputs,
    Geometry,
    cc_energy_denominator,
    find_equilibrium,
)
from lhpsim.ammonia import T_ZERO_C

OUT = os.path.join(os.path.dirname(__file__), "output")


def main():
    os.makedirs(OUT, exist_ok=True)
    qs = np.arange(25.0, 161.0, 2.5)
    temps, etas = [], []
    guess = REFERENCE_STATE
    for q in qs:
        u = ExogenousInputs(Q_evap=float(q), T_sink=T_ZERO_C, Q_cc=0.0)
        guess = find_equilibrium(u, DEFAULT_PARAMS, DEFAULT_GEOMETRY, guess)
        temps.append(guess.T_cc - T_ZERO_C)
        etas.append(guess.eta)
    temps = np.array(temps)
    etas = np.array(etas)

    i_min = int(np.argmin(temps))
    print("natural SSOT at T_sink = 0 degC, Q_cc = 0:")
    for q, T, eta in zip(qs[::6], temps[::6], etas[::6]):
        print(f"  {q:5.0f} W  T_cc {T:6.2f} degC   eta {eta:5.2f} m "
              f"({eta / DEFAULT_GEOMETRY.L_cond:4.0%} of condenser)")
    print(f"\nminimum {temps[i_min]:.2f} degC at {qs[i_min]:.0f} W "
          f"(outside the 20-100 W operating range)")

    fig, ax1 = plt.subplots(figsize=(8, 5))
    ax1.plot(qs, temps, "b-")
    ax1.axvspan(20.0, 100.0, color="0.9", label="operating range")
    ax1.plot(qs[i_min], temps[i_min], "bv")
    ax1.set_xlabel("Q_evap / W")
    ax1.set_ylabel("natural SSOT T_cc / degC", color="b")
    ax2 = ax1.twinx()
    ax2.plot(qs, etas / DEFAULT_GEOMETRY.L_cond, "r--")
    ax2.set_ylabel("condenser utilization eta/L_cond", color="r")
    fig.tight_layout()
    path = os.path.join(OUT, "ssot_curve.png")
    fig.savefig(path, dpi=120)
    print(f"wrote {path}")

    print("\nCC thermal capacity vs chamber volume (fill fixed at the "
          "reference liquid volume):")
    for v_cc in (8e-6, 12.5e-6, 20e-6):
        geom = Geometry(V_cc=v_cc, L_cond=DEFAULT_GEOMETRY.L_cond,
                        L_ll=DEFAULT_GEOMETRY.L_ll, D_c=DEFAULT_GEOMETRY.D_c)
        den = cc_energy_denominator(REFERENCE_STATE.T_cc,
                                    REFERENCE_STATE.V_cc_l, geom)
        print(f"  V_cc {v_cc * 1e6:5.1f} cm^3 -> effective capacity "
              f"{den:6.2f} J/K (~{den / 0.24:5.0f} s open-loop time constant)")


if __name__ == "__main__":
    main()
