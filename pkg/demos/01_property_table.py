"""Saturated-ammonia property correlations.

Prints a compact property table over the model's operating range and writes
the full table to demos/output/props.csv.  Two unit conventions worth knowing:
the property polynomials take degC, while the saturation relation takes kelvin
(the degC reading would put its singularity at 38 degC, mid-range).
"""

import os

from lhpsim import antoine_pressure, sat_props
from lhpsim.ammonia import T_ZERO_C
from lhpsim.scenarios import write_props_csv

OUT = os.path.join(os.path.dirname(__file__), "output")


def main():
    os.makedirs(OUT, exist_ok=True)
    write_props_csv(os.path.join(OUT, "props.csv"), -40.0, 80.0, 1.0)

    print(f"{'T degC':>7} {'rho_l':>8} {'rho_v':>7} {'cp_l':>8} {'dh_v':>10} "
          f"{'mu_l uPa*s':>10} {'sigma mN/m':>10} {'p_sat MPa':>9}")
    for t in range(-20, 61, 10):
        p = sat_props(float(t))
        psat = antoine_pressure(t + T_ZERO_C)
        print(f"{t:7d} {p.rho_l:8.2f} {p.rho_v:7.3f} {p.cp_l:8.1f} "
              f"{p.dh_v:10.0f} {p.mu_l * 1e6:10.1f} {p.sigma * 1e3:10.2f} "
              f"{psat / 1e6:9.4f}")
    print(f"\nfull table written to {OUT}/props.csv")


if __name__ == "__main__":
    main()
