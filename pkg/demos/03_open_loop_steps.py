"""Open-loop response to heater, load, and sink steps (the bundled scenario).

Runs the built-in step scenario (heater +1 W, load +1 W, sink +1 K, each held
and reverted over 133 min) and plots the CC temperature and the other states.
Note the opposite signs: extra heater power RAISES T_cc, extra heat load
LOWERS it (more subcooled return flow) - the signature of a loop heat pipe in
variable conductance mode.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from lhpsim.ammonia import T_ZERO_C
from lhpsim.scenarios import builtin_fig6_openloop, run_sim_scenario

OUT = os.path.join(os.path.dirname(__file__), "output")


def main():
    os.makedirs(OUT, exist_ok=True)
    cfg = builtin_fig6_openloop()
    cfg["output_dir"] = os.path.join(OUT, "fig6_openloop")
    traj, manifest = run_sim_scenario(cfg)
    print(f"integrated {traj.t[-1]:.0f} s of model time in "
          f"{manifest['diagnostics']['wall_time_s']:.2f} s wall clock "
          f"({len(traj)} samples)")

    t = traj.t / 60.0
    fig, axes = plt.subplots(5, 1, figsize=(9, 11), sharex=True)
    axes[0].plot(t, traj.states[:, 0] - T_ZERO_C)
    axes[0].set_ylabel("T_cc / degC")
    axes[1].plot(t, traj.inputs[:, 2], label="Q_cc")
    axes[1].plot(t, traj.inputs[:, 0] - 55.0, label="Q_evap - 55")
    axes[1].plot(t, traj.inputs[:, 1] - T_ZERO_C, label="T_sink")
    axes[1].legend(loc="upper right")
    axes[1].set_ylabel("inputs")
    axes[2].plot(t, traj.states[:, 1])
    axes[2].set_ylabel("eta / m")
    axes[3].plot(t, traj.states[:, 3] * 1e6)
    axes[3].set_ylabel("mdot_l / mg s^-1")
    axes[4].plot(t, traj.states[:, 2] * 1e6)
    axes[4].set_ylabel("V_cc_l / cm^3")
    axes[4].set_xlabel("t / min")
    fig.tight_layout()
    path = os.path.join(OUT, "open_loop_steps.png")
    fig.savefig(path, dpi=120)
    print(f"wrote {path}")

    T = traj.states[:, 0] - T_ZERO_C
    print(f"\nT_cc spans {T.min():.2f} .. {T.max():.2f} degC;")
    i = np.searchsorted(traj.t, 1790.0)
    print(f"  heater +1 W  -> {T[i] - T[0]:+.2f} K")
    i = np.searchsorted(traj.t, 4190.0)
    print(f"  load   +1 W  -> {T[i] - T[0]:+.2f} K (note the sign)")
    i = np.searchsorted(traj.t, 6590.0)
    print(f"  sink   +1 K  -> {T[i] - T[0]:+.2f} K")


if __name__ == "__main__":
    main()
