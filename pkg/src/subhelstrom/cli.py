"""Command-line front end.

Subcommands: `figure` reproduces a figure dataset as CSV (plus a rendered
image unless --no-plot), `optimize` runs a single constrained optimization,
`simulate` runs the Monte Carlo protocol check, and `verify` executes the
oracle verification suite.  Exit codes: 0 success, 1 verification failure,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import figures, mcsim, scenarios, verify
from .optimizer import ConstraintSet, InfeasibleError, OptimizerConfig, optimize

_FIXED_FLAGS = (
    ("--chi", "chi"), ("--delta", "delta"), ("--m", "m"), ("--n", "n"), ("--p", "p"),
    ("--lambda", "lam"), ("--mu", "mu"), ("--x", "x"), ("--y", "y"),
)
_FREE_FLAGS = (("--theta", "theta"), ("--phi", "phi"))


def _add_scenario_options(parser: argparse.ArgumentParser, with_free: bool) -> None:
    parser.add_argument("--scenario", required=True, choices=scenarios.SCENARIO_IDS,
                        help="joint-state family")
    for flag, dest in _FIXED_FLAGS:
        parser.add_argument(flag, dest=dest, type=float, default=None,
                            help="fixed scenario parameter")
    if with_free:
        for flag, dest in _FREE_FLAGS:
            parser.add_argument(flag, dest=dest, type=float, default=0.0,
                                help="auxiliary parameter (default 0)")
    parser.add_argument("--params", type=Path, default=None,
                        help="flat key=value file with scenario parameters")


def _load_params_file(path: Path) -> dict:
    entries: dict = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        entries[key] = float(value)
    return entries


def _gather_fixed(args: argparse.Namespace) -> dict:
    fixed: dict = {}
    if args.params is not None:
        fixed.update(_load_params_file(args.params))
    for _, dest in _FIXED_FLAGS:
        value = getattr(args, dest, None)
        if value is not None:
            fixed[dest] = value
    # free parameters may legitimately appear in a params file for simulate
    for _, dest in _FREE_FLAGS:
        fixed.pop(dest, None)
    return fixed


def _print_notes(params: scenarios.ScenarioParams) -> None:
    for note in params.notes:
        print(f"note: {note}", file=sys.stderr)


def _cmd_figure(args: argparse.Namespace) -> int:
    dataset = figures.run_figure(
        args.id, resolution=args.resolution, d=args.d, e=args.E, e_mode=args.e_mode,
        body_text_values=args.body_text_values)
    out = args.out if args.out is not None else Path(f"{args.id}.csv")
    figures.write_csv(dataset, out)
    print(f"wrote {len(dataset.rows)} rows to {out}")
    if not args.no_plot:
        image = out.with_suffix(".png")
        from . import plotting  # deferred: matplotlib import is slow

        plotting.render_figure(dataset, image)
        print(f"rendered {image}")
    return 0


def _cmd_optimize(args: argparse.Namespace) -> int:
    params = scenarios.make_params(args.scenario, **_gather_fixed(args))
    _print_notes(params)
    constraints = ConstraintSet(d=args.d, e=args.E, e_mode=args.e_mode)
    config = OptimizerConfig() if args.grid_points is None \
        else OptimizerConfig(grid_points_per_dim=args.grid_points)
    result = optimize(params, constraints, config)
    print(f"scenario={args.scenario}")
    print(f"p_npovm={result.p_npovm:.12g}")
    print(f"p_povm={result.p_povm:.12g}")
    print(f"delta_p={result.delta_p:.12g}")
    for name, value in result.argmin.items():
        print(f"argmin.{name}={value:.12g}")
    for name, value in result.constraint_slacks.items():
        print(f"slack_{name}={value:.12g}")
    for name, value in result.boundary_active.items():
        print(f"boundary_active_{name}={str(bool(value)).lower()}")
    print(f"feasible={str(result.feasible).lower()}")
    print(f"converged={str(result.converged).lower()}")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    params = scenarios.make_params(args.scenario, **_gather_fixed(args))
    _print_notes(params)
    fam = scenarios.family(args.scenario)
    point = {name: getattr(args, name) for name in fam.free_names}
    pair = scenarios.build_point(params, point)
    report = mcsim.simulate(pair, trials=args.trials, seed=args.seed)
    print(f"scenario={args.scenario}")
    print(f"trials={report.trials}")
    print(f"errors={report.errors}")
    print(f"empirical_error={report.empirical_error:.12g}")
    print(f"standard_error={report.standard_error:.12g}")
    print(f"analytic_error={report.analytic_error:.12g}")
    print(f"z_score={report.z_score:.12g}")
    print(f"seed={report.seed}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    return verify.run_verify(report_path=args.report)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subhelstrom",
        description="Constrained sub-Helstrom binary state discrimination toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fig = sub.add_parser("figure", help="emit a figure dataset as CSV (and image)")
    p_fig.add_argument("--id", required=True, choices=figures.FIGURE_IDS)
    p_fig.add_argument("--resolution", type=int, default=None,
                       help="grid points per axis (figure-specific default)")
    p_fig.add_argument("--d", type=float, default=None, help="distinguishability bound")
    p_fig.add_argument("--E", type=float, default=None, help="concurrence bound")
    p_fig.add_argument("--e-mode", choices=("strict", "report"), default=None)
    p_fig.add_argument("--out", type=Path, default=None, help="CSV output path")
    p_fig.add_argument("--no-plot", action="store_true",
                       help="skip rendering the image next to the CSV")
    p_fig.add_argument("--body-text-values", action="store_true",
                       help="use the alternative Schmidt coefficients (1/3, 1/4)")
    p_fig.set_defaults(func=_cmd_figure)

    p_opt = sub.add_parser("optimize", help="run one constrained optimization")
    _add_scenario_options(p_opt, with_free=False)
    p_opt.add_argument("--d", type=float, required=True, help="distinguishability bound")
    p_opt.add_argument("--E", type=float, default=1.0, help="concurrence bound")
    p_opt.add_argument("--e-mode", choices=("strict", "report"), default="strict")
    p_opt.add_argument("--grid-points", type=int, default=None,
                       help="override the scan resolution per free parameter")
    p_opt.set_defaults(func=_cmd_optimize)

    p_sim = sub.add_parser("simulate", help="Monte Carlo protocol check")
    _add_scenario_options(p_sim, with_free=True)
    p_sim.add_argument("--trials", type=int, required=True)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.set_defaults(func=_cmd_simulate)

    p_ver = sub.add_parser("verify", help="run the oracle verification suite")
    p_ver.add_argument("--report", type=Path, default=None, help="CSV report path")
    p_ver.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, InfeasibleError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
