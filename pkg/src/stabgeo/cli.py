"""Command-line entry point.

Subcommands: santalo, pl1d, fmp, pln, cap-scan, bs-scan, pl-scan.
Exit codes: 0 success, 1 configuration error, 2 numerical failure
(diagnostics go to stderr).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bodies, experiments, fileio, fmp, pl1d, pln, polarity
from .errors import ConfigError, ConvergenceError

_NUMERIC_ERRORS = (
    ConvergenceError,
    FloatingPointError,
    ArithmeticError,
    ValueError,
    TypeError,
)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    return format(float(v), ".12g")


def _row(*values) -> str:
    return ",".join(_fmt(v) for v in values)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stabgeo", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("santalo", help="Santalo point and volume-product deficit")
    s.add_argument("--body", required=True)
    kind = s.add_mutually_exclusive_group()
    kind.add_argument("--polygon", action="store_true")
    kind.add_argument("--profile", action="store_true")
    s.add_argument("--dim", type=int, default=3)
    s.add_argument("--o-symmetric", action="store_true",
                   help="treat a polygon input as o-symmetric")

    s = sub.add_parser("pl1d", help="1-D midpoint deficit and stability report")
    s.add_argument("--f", required=True, dest="f_path")
    s.add_argument("--g", required=True, dest="g_path")
    s.add_argument("--mode", choices=("arith", "geom"), default="arith")

    s = sub.add_parser("fmp", help="Brunn-Minkowski stability bound check")
    s.add_argument("--k", required=True, dest="k_path")
    s.add_argument("--c", required=True, dest="c_path")
    s.add_argument("--dim", type=int, default=3)

    s = sub.add_parser("pln", help="level-stack midpoint trace")
    s.add_argument("--f", required=True, dest="f_path")
    s.add_argument("--g", required=True, dest="g_path")
    s.add_argument("--m", dest="m_path")

    for name in ("cap-scan", "bs-scan", "pl-scan"):
        s = sub.add_parser(name, help=f"run the {name} experiment")
        s.add_argument("--config")
        s.add_argument("--dim", type=int)
        s.add_argument("--grid")
        s.add_argument("--seed", type=int)
        s.add_argument("--out", dest="output_path")
        s.add_argument("--profile-samples", type=int, dest="profile_samples")
        s.add_argument("--grid-samples", type=int, dest="grid_samples")
        s.add_argument("--level-count", type=int, dest="level_count")
        s.add_argument("--r-samples", type=int, dest="r_samples")
        s.add_argument("--family")
        s.add_argument("--min-deficit", type=float, dest="min_deficit")
    return p


def _load_cli_body(args):
    if args.polygon:
        return fileio.load_polygon(args.body, o_symmetric=args.o_symmetric)
    if args.profile:
        return fileio.load_profile(args.body, args.dim)
    return fileio.load_body(args.body, dim=args.dim, o_symmetric=args.o_symmetric)


def _cmd_santalo(args) -> int:
    body = _load_cli_body(args)
    res = polarity.santalo_point(body)
    z = np.zeros(2) if len(res.point) < 2 else res.point[:2]
    print("zx,zy,volume,polar_volume,product,deficit")
    print(_row(z[0], z[1], bodies.volume(body), res.polar_volume,
               res.volume_product, res.bs_deficit))
    return 0


def _cmd_pl1d(args) -> int:
    domain = pl1d.HALF_LINE if args.mode == "geom" else pl1d.WHOLE_LINE
    f = fileio.load_gridfn(args.f_path, domain=domain)
    g = fileio.load_gridfn(args.g_path, domain=domain)
    mean = "geometric" if args.mode == "geom" else "arithmetic"
    rep = pl1d.pl_report(f, g, mean=mean)
    print("eps,omega,a,b,l1_f,l1_g,vacuous")
    print(_row(rep.deficit, rep.omega_bound, rep.a, rep.b, rep.l1_f, rep.l1_g,
               rep.vacuous))
    return 0


def _cmd_fmp(args) -> int:
    K = fileio.load_body(args.k_path, dim=args.dim, o_symmetric=True)
    C = fileio.load_body(args.c_path, dim=args.dim, o_symmetric=True)
    rep = fmp.fmp_bound_check(K, C)
    print("sigma,A,gamma_star,lhs_add,rhs_add,lhs_prod,rhs_prod,eta")
    print(_row(rep.sigma, rep.A, rep.gamma_star, rep.lhs_additive, rep.rhs_additive,
               rep.lhs_product, rep.rhs_product, rep.eta))
    return 0


def _cmd_pln(args) -> int:
    f = fileio.load_stack(args.f_path)
    g = fileio.load_stack(args.g_path)
    m = fileio.load_stack(args.m_path) if args.m_path else pln.minimal_midpoint_stack(f, g)
    trace = pln.pl_trace(f, g, m)
    print("eps,b,b_gap,omega,sqrt_omega,l1_fg,l1_fm,l1_gm,l1_tilde_fg,"
          "jsize_lhs,jsize_rhs,ieta,sectioncap_margin,swapped")
    print(_row(trace.eps, trace.b, trace.b_gap, trace.omega, trace.sqrt_omega,
               trace.l1_fg, trace.l1_fm, trace.l1_gm, trace.l1_tilde_fg,
               trace.jsize_lhs, trace.jsize_rhs, trace.ieta,
               trace.sectioncap_margin, trace.swapped))
    print("t,alpha,beta,sigma,eta,in_I")
    for j in range(len(trace.levels)):
        print(_row(trace.levels[j], trace.alpha[j], trace.beta[j],
                   trace.sigma[j], trace.eta[j], bool(trace.I_mask[j])))
    return 0


def _cmd_scan(args, experiment: str) -> int:
    overrides = dict(
        experiment=experiment,
        dim=args.dim,
        grid=args.grid,
        seed=args.seed,
        output_path=args.output_path,
        profile_samples=args.profile_samples,
        grid_samples=args.grid_samples,
        level_count=args.level_count,
        r_samples=args.r_samples,
        family=args.family,
        min_deficit=args.min_deficit,
    )
    if args.config:
        cfg = experiments.load_config(args.config, **overrides)
    else:
        cfg = experiments.parse_config_text("", **overrides)
    result = experiments.run(cfg)
    if experiment == "cap-scan":
        fit, rows = result
        print(f"rows={len(rows)} slope={fit.slope:.6g} intercept={fit.intercept:.6g} "
              f"r_squared={fit.r_squared:.6g}")
    elif experiment == "bs-scan":
        max_ratio, rows = result
        print(f"rows={len(rows)} max_ratio={max_ratio:.6g}")
    else:
        fit, rows = result
        if fit is None:
            print(f"rows={len(rows)} slope=nan")
        else:
            print(f"rows={len(rows)} slope={fit.slope:.6g} r_squared={fit.r_squared:.6g}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 1
    try:
        if args.command == "santalo":
            return _cmd_santalo(args)
        if args.command == "pl1d":
            return _cmd_pl1d(args)
        if args.command == "fmp":
            return _cmd_fmp(args)
        if args.command == "pln":
            return _cmd_pln(args)
        if args.command in ("cap-scan", "bs-scan", "pl-scan"):
            experiment = args.command
            if experiment == "pl-scan" and getattr(args, "config", None):
                # a pln-scan config runs through the pl-scan subcommand
                cfg_probe = experiments.load_config(args.config)
                experiment = cfg_probe.experiment
            return _cmd_scan(args, experiment)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, FileNotFoundError, OSError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1
    except _NUMERIC_ERRORS as e:
        print(f"numerical failure: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
