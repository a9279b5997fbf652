"""Command-line driver: single runs, convergence studies, scheme analysis.

Exit codes: 0 success, 1 configuration error, 2 numerical failure (NaN),
3 I/O error.  All output is CSV with 17-significant-digit numbers so runs
are diffable and bit-reproducible.
"""

import argparse
import sys
import warnings

import numpy as np

from .analysis import max_stable_sigma, phase_dissipation_curve, stability_table
from .driver import NumericsError, integrate
from .grid import Grid
from .problems import (
    IC_KINDS,
    convergence_study,
    initial_condition,
    standard_problem,
)
from .schemes import SCHEME_NAMES, default_product_order, scheme_coefficients
from .velocity import make_velocity

FMT = "%.17g"


class ConfigError(ValueError):
    pass


def _fmt(x):
    return FMT % float(x)


def read_config_file(path):
    """Parse ``key = value`` lines; '#' starts a comment."""
    entries = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
                key, value = (part.strip() for part in line.split("=", 1))
                entries[key.replace("-", "_")] = value
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return entries


_RUN_KEYS = {
    "ic": str,
    "velocity": str,
    "scheme": str,
    "order": int,
    "sigma": float,
    "n": int,
    "t_final": float,
    "limiter": str,
    "radius": float,
    "extent": float,
    "out": str,
    "centerline": str,
    "eta_stats": str,
    "dump_every": int,
    "dump_prefix": str,
    "dim": int,
}


def _apply_config(args, keys):
    """Fill argparse values from the config file where flags were absent."""
    if not getattr(args, "config", None):
        return
    entries = read_config_file(args.config)
    for key, raw in entries.items():
        if key not in keys:
            raise ConfigError(f"unknown config key: {key}")
        if getattr(args, key, None) is None:
            try:
                setattr(args, key, keys[key](raw))
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {raw!r}") from exc


def _validate_run(args):
    defaults = {
        "ic": "square", "velocity": "constant", "scheme": "u9",
        "sigma": 0.8, "n": 128, "t_final": 1.0, "limiter": "on",
        "extent": 1.0, "dim": None, "dump_every": 0,
    }
    for key, val in defaults.items():
        if getattr(args, key, None) is None:
            setattr(args, key, val)
    if args.ic not in IC_KINDS:
        raise ConfigError(f"unknown ic {args.ic!r}; expected one of {', '.join(IC_KINDS)}")
    if args.velocity not in ("constant", "rotation"):
        raise ConfigError(f"unknown velocity {args.velocity!r}")
    if args.scheme not in SCHEME_NAMES:
        raise ConfigError(f"unknown scheme {args.scheme!r}")
    if args.limiter not in ("on", "off", "off-low"):
        raise ConfigError(f"unknown limiter mode {args.limiter!r}")
    if args.sigma <= 0:
        raise ConfigError("sigma must be positive")
    if args.n < 16:
        raise ConfigError(f"n must be at least 16, got {args.n}")
    if args.dim is None:
        args.dim = 2 if (args.velocity == "rotation" or args.ic == "slotted") else 1
    if args.dim not in (1, 2):
        raise ConfigError("dim must be 1 or 2")


def _write_solution_csv(path, grid, q, metadata):
    with open(path, "w") as fh:
        for key, value in metadata:
            fh.write(f"# {key}: {value}\n")
        if grid.dim == 1:
            fh.write("i,x,q\n")
            x = grid.cell_centers(0)
            vals = q.interior
            for i in range(grid.n):
                fh.write(f"{i},{_fmt(x[i])},{_fmt(vals[i])}\n")
        else:
            fh.write("i,j,x,y,q\n")
            x = grid.cell_centers(0)
            y = grid.cell_centers(1)
            vals = q.interior
            for i in range(grid.n):
                for j in range(grid.n):
                    fh.write(
                        f"{i},{j},{_fmt(x[i])},{_fmt(y[j])},{_fmt(vals[i, j])}\n"
                    )


def _write_centerline_csv(path, grid, q):
    """Row j = n/2 of a 2D field (the full profile in 1D)."""
    with open(path, "w") as fh:
        fh.write("i,x,q\n")
        x = grid.cell_centers(0)
        vals = q.interior if grid.dim == 1 else q.interior[:, grid.n // 2]
        for i in range(grid.n):
            fh.write(f"{i},{_fmt(x[i])},{_fmt(vals[i])}\n")


def cmd_run(args):
    _apply_config(args, _RUN_KEYS)
    _validate_run(args)
    grid = Grid(args.dim, args.n, lo=0.0, hi=args.extent)
    velocity = make_velocity(args.velocity, grid)
    scheme = scheme_coefficients(args.scheme)
    order = args.order if args.order is not None else default_product_order(scheme)
    sigma_max = max_stable_sigma(scheme, grid.dim, n_beta=256, tol=1e-3)
    if args.sigma > sigma_max + 1e-3:
        warnings.warn(
            f"sigma={args.sigma} exceeds the stability bound "
            f"~{sigma_max:.3f} for {args.scheme} in {grid.dim}D",
            stacklevel=1,
        )
    spec = standard_problem(args.ic, args.velocity, grid, radius=args.radius)
    q0 = initial_condition(spec, grid)

    dumps = []
    if args.dump_every and args.dump_prefix:
        def on_step(step, t, q):
            if step % args.dump_every == 0:
                path = f"{args.dump_prefix}{step:06d}.csv"
                _write_solution_csv(path, grid, q, [("t", _fmt(t)), ("step", step)])
                dumps.append(path)
    else:
        on_step = None

    result = integrate(
        q0, velocity, grid, scheme, args.sigma, args.t_final,
        limiter=args.limiter, order=order,
        collect_eta_stats=bool(args.eta_stats), on_step=on_step,
    )

    metadata = [
        ("ic", args.ic), ("velocity", args.velocity), ("scheme", args.scheme),
        ("order", order), ("sigma", _fmt(args.sigma)), ("n", args.n),
        ("dim", grid.dim), ("extent", _fmt(args.extent)),
        ("t_final", _fmt(args.t_final)), ("limiter", args.limiter),
        ("steps", result.steps), ("dt", _fmt(result.dt)),
        ("conserved_initial", _fmt(result.conserved_initial)),
        ("conserved_final", _fmt(result.conserved_final)),
        ("conservation_drift", _fmt(result.conservation_drift)),
        ("solution_min", _fmt(result.solution_min)),
        ("solution_max", _fmt(result.solution_max)),
    ]
    if args.out:
        _write_solution_csv(args.out, grid, result.field, metadata)
    if args.centerline:
        _write_centerline_csv(args.centerline, grid, result.field)
    if args.eta_stats:
        with open(args.eta_stats, "w") as fh:
            fh.write("step,eta_min,eta_mean,frac_below_one\n")
            for k, (emin, emean, frac) in enumerate(result.eta_stats, 1):
                fh.write(f"{k},{_fmt(emin)},{_fmt(emean)},{_fmt(frac)}\n")
    for key, value in metadata:
        print(f"{key}: {value}")
    return 0


def cmd_converge(args):
    _apply_config(args, dict(_RUN_KEYS, n_list=str))
    for key, val in (
        ("ic", "cosine8"), ("velocity", "constant"), ("scheme", "u5"),
        ("sigma", 0.8), ("t_final", 1.0), ("limiter", "on"), ("n_list", "32,64,128,256"),
    ):
        if getattr(args, key, None) is None:
            setattr(args, key, val)
    if args.sigma <= 0:
        raise ConfigError("sigma must be positive")
    if args.dim is None:
        args.dim = 2 if args.velocity == "rotation" else 1
    try:
        n_list = [int(tok) for tok in str(args.n_list).split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"bad n-list: {args.n_list!r}") from None
    records = convergence_study(
        args.ic, args.velocity, args.scheme, args.sigma, n_list,
        limiter=args.limiter, dim=args.dim, t_final=args.t_final,
        radius=args.radius, order=args.order,
    )
    lines = ["N,error,order"]
    for rec in records:
        order = "" if rec.order is None else _fmt(rec.order)
        lines.append(f"{rec.n},{_fmt(rec.error)},{order}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    print(text, end="")
    return 0


def cmd_analyze(args):
    if args.stability:
        rows = stability_table(dims=(1, 2))
        lines = ["scheme,D,sigma_max"]
        lines += [f"{name},{dim},{_fmt(val)}" for name, dim, val in rows]
        text = "\n".join(lines) + "\n"
    else:
        if args.scheme is None:
            raise ConfigError("analyze needs --scheme (or --stability)")
        if args.scheme not in SCHEME_NAMES:
            raise ConfigError(f"unknown scheme {args.scheme!r}")
        sigma = 0.8 if args.sigma is None else args.sigma
        if sigma <= 0:
            raise ConfigError("sigma must be positive")
        table = phase_dissipation_curve(args.scheme, sigma, samples=args.samples)
        lines = ["beta,dissipation,phase_error"]
        lines += [f"{_fmt(b)},{_fmt(d)},{_fmt(p)}" for b, d, p in table]
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    print(text, end="")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fvadvect",
        description="FCT-limited high-order finite-volume scalar advection",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="advect one initial condition and dump CSV")
    run.add_argument("--config", help="key = value file; flags take precedence")
    run.add_argument("--ic", choices=IC_KINDS)
    run.add_argument("--velocity", choices=("constant", "rotation"))
    run.add_argument("--scheme", choices=SCHEME_NAMES)
    run.add_argument("--order", type=int, choices=(2, 4, 6),
                     help="product-rule order (default per scheme)")
    run.add_argument("--sigma", type=float)
    run.add_argument("--n", type=int)
    run.add_argument("--dim", type=int, choices=(1, 2))
    run.add_argument("--t-final", dest="t_final", type=float)
    run.add_argument("--limiter", choices=("on", "off", "off-low"))
    run.add_argument("--radius", type=float, help="feature radius override")
    run.add_argument("--extent", type=float, help="domain edge length")
    run.add_argument("--out", help="solution CSV path")
    run.add_argument("--centerline", help="centerline CSV path")
    run.add_argument("--eta-stats", dest="eta_stats",
                     help="per-step limiter statistics CSV path")
    run.add_argument("--dump-every", dest="dump_every", type=int)
    run.add_argument("--dump-prefix", dest="dump_prefix")
    run.set_defaults(func=cmd_run)

    conv = sub.add_parser("converge", help="grid refinement study")
    conv.add_argument("--config", help="key = value file; flags take precedence")
    conv.add_argument("--ic", choices=IC_KINDS)
    conv.add_argument("--velocity", choices=("constant", "rotation"))
    conv.add_argument("--scheme", choices=SCHEME_NAMES)
    conv.add_argument("--order", type=int, choices=(2, 4, 6))
    conv.add_argument("--sigma", type=float)
    conv.add_argument("--n-list", dest="n_list")
    conv.add_argument("--dim", type=int, choices=(1, 2))
    conv.add_argument("--t-final", dest="t_final", type=float)
    conv.add_argument("--limiter", choices=("on", "off", "off-low"))
    conv.add_argument("--radius", type=float)
    conv.add_argument("--out")
    conv.set_defaults(func=cmd_converge)

    ana = sub.add_parser("analyze", help="stability limits and mode diagnostics")
    ana.add_argument("--scheme", choices=SCHEME_NAMES)
    ana.add_argument("--sigma", type=float)
    ana.add_argument("--samples", type=int, default=256)
    ana.add_argument("--stability", action="store_true",
                     help="emit the sigma_max table instead of curves")
    ana.add_argument("--out")
    ana.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
