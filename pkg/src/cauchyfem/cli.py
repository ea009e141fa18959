"""Command line driver: convergence studies, penalty sweeps, single solves.

Options may also come from a key=value config file (--config); options given
on the command line win over the file.
"""

from __future__ import annotations

import argparse
import sys

from . import experiments
from .assembly import SW_VARIANTS, dump_matrix
from .experiments import RunConfig


def _parse_levels(text):
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


def _parse_gammas(text):
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def _add_common(parser):
    parser.add_argument("--degree", type=int, choices=(1, 2), default=None,
                        help="polynomial degree (default 1)")
    parser.add_argument("--gamma-v", type=float, default=None,
                        help="primal penalty (default 0.01 for P1, 0.001 for P2)")
    parser.add_argument("--gamma-w", type=float, default=None,
                        help="dual penalty (same defaults as --gamma-v)")
    parser.add_argument("--sw-variant", choices=SW_VARIANTS, default=None,
                        help="dual stabilizer: galerkin energy or face jumps "
                             "(default jump)")
    parser.add_argument("--jitter", type=float, default=None,
                        help="interior-vertex jitter in [0, 0.3) (default 0)")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for the jitter directions (default 0)")
    parser.add_argument("--out", default=None, help="output file path")
    parser.add_argument("--config", default=None,
                        help="key=value file supplying defaults for any option")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cauchyfem",
        description="Stabilized primal-dual FEM for the elliptic Cauchy "
                    "problem on the unit square")
    sub = parser.add_subparsers(dest="command", required=True)

    conv = sub.add_parser("convergence", help="refinement study over mesh levels")
    _add_common(conv)
    conv.add_argument("--levels", type=_parse_levels, default=None,
                      help="comma-separated mesh levels (default 8,16,32,64)")

    sweep = sub.add_parser("sweep", help="penalty-parameter sweep on a fixed mesh")
    _add_common(sweep)
    sweep.add_argument("--n", type=int, default=None, help="mesh level (default 64)")
    sweep.add_argument("--gammas", type=_parse_gammas, default=None,
                       help="comma-separated penalty values "
                            "(default 9 log-spaced in [1e-4, 1])")

    single = sub.add_parser("solve", help="single solve with optional field dump")
    _add_common(single)
    single.add_argument("--n", type=int, default=None, help="mesh level (default 8)")
    single.add_argument("--emit-fields", action="store_true", default=None,
                        help="write u_h, z_h and the pointwise error as legacy VTK")
    single.add_argument("--dump-matrices", default=None, metavar="DIR",
                        help="debug: dump assembled matrices in matrix-market form")

    return parser


_CONVERTERS = {
    "degree": int,
    "n": int,
    "seed": int,
    "gamma_v": float,
    "gamma_w": float,
    "jitter": float,
    "levels": _parse_levels,
    "gammas": _parse_gammas,
    "emit_fields": lambda s: s.lower() in ("1", "true", "yes", "on"),
}


def read_config_file(path):
    """Parse `key = value` lines; '#' starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            values[key] = _CONVERTERS.get(key, str)(value)
    return values


def _merge_options(args):
    """Config file fills options the command line left unset."""
    opts = vars(args).copy()
    if opts.get("config"):
        for key, value in read_config_file(opts["config"]).items():
            if opts.get(key) is None:
                opts[key] = value
    return opts


def _make_config(opts, out_default=None):
    return RunConfig(
        degree=opts.get("degree") or 1,
        sw_variant=opts.get("sw_variant") or "jump",
        gamma_v=opts.get("gamma_v"),
        gamma_w=opts.get("gamma_w"),
        levels=opts.get("levels") or experiments.DEFAULT_LEVELS,
        jitter=opts.get("jitter") or 0.0,
        seed=opts.get("seed") or 0,
        output_path=opts.get("out") or out_default,
        emit_fields=bool(opts.get("emit_fields")),
    )


def _print_reports(rows):
    print(f"{'case':>10} {'global_l2':>12} {'local_l2':>12} {'stab_u':>12} "
          f"{'stab_z':>12} {'eta':>12}")
    for label, report in rows:
        if report is None:
            print(f"{label:>10} {'failed':>12}")
            continue
        print(f"{label:>10} {report.global_l2:12.4e} {report.local_l2:12.4e} "
              f"{report.stab_u:12.4e} {report.stab_z:12.4e} {report.eta:12.4e}")


def cmd_convergence(opts):
    config = _make_config(opts, out_default="convergence.csv")
    results = experiments.run_convergence(config)
    _print_reports([(f"n={row.n}", row.report) for row in results])
    print(f"wrote {config.output_path}")
    return 0 if all(row.report is not None for row in results) else 1


def cmd_sweep(opts):
    config = _make_config(opts, out_default="sweep.csv")
    gammas = opts.get("gammas") or experiments.DEFAULT_SWEEP_GAMMAS
    n = opts.get("n") or 64
    results = experiments.run_sweep(config, gammas=gammas, n=n)
    _print_reports([(f"{row['gamma']:.1e}", row["report"]) for row in results])
    print(f"wrote {config.output_path}")
    return 0 if all(row["report"] is not None for row in results) else 1


def cmd_solve(opts):
    out_default = "fields.vtk" if opts.get("emit_fields") else None
    config = _make_config(opts, out_default=out_default)
    n = opts.get("n") or 8
    if opts.get("dump_matrices"):
        from pathlib import Path
        from .analysis import error_report
        from .mesh import unit_square_mesh
        from .problem import quartic_example
        from .solver import solve_problem

        mesh = unit_square_mesh(n, config.jitter, config.seed)
        solution, trial, test, blocks = solve_problem(
            mesh, config.degree, quartic_example(), config.resolved_gamma_v,
            config.resolved_gamma_w, config.sw_variant)
        outdir = Path(opts["dump_matrices"])
        outdir.mkdir(parents=True, exist_ok=True)
        for name, matrix in (("a", blocks.a), ("s_v", blocks.s_v), ("s_w", blocks.s_w)):
            dump_matrix(matrix, outdir / f"{name}.mtx")
        report = error_report(solution, trial, test, blocks, quartic_example())
    else:
        solution, report = experiments.run_single(config, n)
    _print_reports([(f"n={n}", report)])
    if config.emit_fields and config.output_path:
        print(f"wrote {config.output_path}")
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    opts = _merge_options(args)
    handler = {"convergence": cmd_convergence, "sweep": cmd_sweep,
               "solve": cmd_solve}[args.command]
    return handler(opts)


if __name__ == "__main__":
    sys.exit(main())
