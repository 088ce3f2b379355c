"""Command-line interface.

Subcommands
-----------
props         tabulate the saturated-ammonia correlations to CSV
fit-params    identify lumped parameters from an operating-point JSON file
sim           run an open-loop scenario config (supports --jobs for batches)
control       run a closed-loop scenario config
equilibrium   solve and print the equilibrium for a config's first inputs
sweep-lambda  closed-loop runs over a list of controller decay rates

Configs may be JSON files or `builtin:<name>` (fig6_openloop,
staircase_control).  Any config key can be overridden via LHPSIM_-prefixed
environment variables (see scenarios module).  Exit codes: 0 success,
2 config error, 3 numerical failure.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .errors import ConfigError, LhpError
from .scenarios import (
    BUILTIN_SCENARIOS,
    apply_env_overrides,
    load_config,
    run_control_scenario,
    run_equilibrium,
    run_fit_params,
    run_lambda_sweep,
    run_sim_scenario,
    write_props_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _load(spec):
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        if name not in BUILTIN_SCENARIOS:
            raise ConfigError(
                f"unknown builtin scenario {name!r}; have: "
                + ", ".join(sorted(BUILTIN_SCENARIOS)))
        return apply_env_overrides(BUILTIN_SCENARIOS[name]())
    return load_config(spec)


def _run_one_sim(args_tuple):
    spec, out_dir = args_tuple
    cfg = _load(spec)
    run_sim_scenario(cfg, output_dir=out_dir)
    return spec


def main(argv=None):
    parser = argparse.ArgumentParser(prog="lhpsim", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("props", help="tabulate property correlations to CSV")
    p.add_argument("-o", "--output", default="props.csv")
    p.add_argument("--t-min", type=float, default=-40.0)
    p.add_argument("--t-max", type=float, default=80.0)
    p.add_argument("--step", type=float, default=1.0)

    p = sub.add_parser("fit-params", help="identify parameters from an OP file")
    p.add_argument("op_file")
    p.add_argument("-o", "--output", default="identified_params.json")

    p = sub.add_parser("sim", help="run open-loop scenario config(s)")
    p.add_argument("configs", nargs="+",
                   help="JSON config path(s) or builtin:<name>")
    p.add_argument("-o", "--output-dir", default=None,
                   help="override output directory (single config only)")
    p.add_argument("--jobs", type=int, default=1,
                   help="run multiple configs in parallel processes")

    p = sub.add_parser("control", help="run a closed-loop scenario config")
    p.add_argument("config")
    p.add_argument("-o", "--output-dir", default=None)

    p = sub.add_parser("equilibrium", help="solve the equilibrium for a config")
    p.add_argument("config")
    p.add_argument("-o", "--output-dir", default=None)

    p = sub.add_parser("sweep-lambda", help="closed-loop sweep over decay rates")
    p.add_argument("config")
    p.add_argument("-o", "--output-dir", default=None)

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (LhpError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def _dispatch(args):
    if args.command == "props":
        write_props_csv(args.output, args.t_min, args.t_max, args.step)
        print(f"wrote {args.output}")
        return EXIT_OK

    if args.command == "fit-params":
        op_cfg = load_config(args.op_file)
        res, out = run_fit_params(op_cfg, output_path=args.output)
        print(json.dumps({k: out["params"][k] for k in out["params"]}, indent=2))
        print(f"T_cc_in_op = {out['T_cc_in_op_degC']:.4f} degC; "
              f"residual {out['diagnostics']['residual_norm']:.3e}; "
              f"wrote {args.output}")
        return EXIT_OK

    if args.command == "sim":
        if len(args.configs) > 1 and args.output_dir:
            raise ConfigError("-o/--output-dir applies to a single config only")
        if args.jobs > 1 and len(args.configs) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                for spec in pool.map(_run_one_sim,
                                     [(s, None) for s in args.configs]):
                    print(f"done: {spec}")
        else:
            for spec in args.configs:
                cfg = _load(spec)
                traj, manifest = run_sim_scenario(cfg, output_dir=args.output_dir)
                d = manifest["diagnostics"]
                note = d.get("event") or d.get("error") or "completed"
                print(f"done: {spec} ({d['samples']} samples, "
                      f"{d['wall_time_s']:.2f} s wall, {note})")
        return EXIT_OK

    if args.command == "control":
        cfg = _load(args.config)
        (_, log), manifest = run_control_scenario(cfg, output_dir=args.output_dir)
        m = manifest["metrics"]
        print(f"done: MAD {m['mad_K']:.4f} K, RMSE {m['rmse_K']:.4f} K, "
              f"{manifest['lyapunov']['saturated_steps']} saturated steps")
        return EXIT_OK

    if args.command == "equilibrium":
        cfg = _load(args.config)
        eq, result = run_equilibrium(cfg, output_dir=args.output_dir)
        print(json.dumps({"state": result["state"]}, indent=2))
        return EXIT_OK

    if args.command == "sweep-lambda":
        cfg = _load(args.config)
        rows = run_lambda_sweep(cfg, output_dir=args.output_dir)
        for r in rows:
            print(f"lambda {r['lambda_1_s']:g}: MAD {r['mad_K']:.4f} K, "
                  f"RMSE {r['rmse_K']:.4f} K, sat {r['saturated_steps']}")
        return EXIT_OK

    raise ConfigError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
