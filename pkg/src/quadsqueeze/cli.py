"""Command-line entry point: ``trajectory``, ``wavefunction``, ``expand``, ``verify``.

Exit codes: 0 success, 1 failed check, 2 configuration error, 3 numeric error.
"""
import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .auxiliary import build_bundle
from .classical import solve_basis
from .config import config_from_dict, parse_config
from .errors import ConfigurationError, DomainError, NumericError
from .observables import mean_x, resolve_alpha, trajectory, uncertainties
from .squeeze import Ordering, assemble_wavefunction, expand, expand_adaptive
from .states import NumberState, psi_m_grid
from .verify import SUITES, TIERS, run_verify

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _context(config, tau_needed=0.0):
    tau_max = max(config.tau_max, tau_needed)
    basis = solve_basis(config.potential, config.initial_data, tau_max, config.ode_tol)
    return basis, build_bundle(basis, config.potential, config.quad_tol)


def _alpha(config, basis, bundle):
    if config.alpha is not None:
        return config.alpha
    return complex(resolve_alpha(config.x0, config.p0, config.z, config.ordering, basis, bundle))


def _metadata(config, alpha):
    return {"version": __version__, "config": config.to_dict(),
            "resolved_alpha": [alpha.real, alpha.imag]}


def _fmt(v):
    return "%.17g" % v


def run_trajectory(config):
    """Serialized trajectory table; identical bytes for identical configs."""
    basis, bundle = _context(config)
    alpha = _alpha(config, basis, bundle)
    taus = np.linspace(0.0, config.tau_max, config.tau_steps)
    rows = trajectory(basis, bundle, alpha, config.z, taus, config.ordering)
    if config.output == "json":
        return json.dumps({"metadata": _metadata(config, alpha),
                           "columns": ["tau", "mean_x", "mean_p", "delta_x", "delta_p",
                                       "product"],
                           "rows": [r.as_row() for r in rows]}, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["tau", "mean_x", "mean_p", "delta_x", "delta_p", "product"])
    for r in rows:
        w.writerow([_fmt(v) for v in r.as_row()])
    return buf.getvalue()


def wavefunction_grid(config, m=None, tau=0.0):
    """Number state ``m`` or, when ``m`` is None, the configured squeezed state."""
    basis, bundle = _context(config, tau)
    if m is not None:
        p3 = float(bundle.phi3(tau))
        center = math.sqrt(p3) * float(bundle.b3(tau))
        width = math.sqrt((m + 0.5) * p3)
        x = np.linspace(center - config.grid_k * width, center + config.grid_k * width,
                        config.grid_points)
        return psi_m_grid(NumberState(m, basis, bundle), x, tau), None
    alpha = _alpha(config, basis, bundle)
    center = float(mean_x(basis, bundle, alpha, config.z, tau, config.ordering))
    width = float(uncertainties(basis, config.z, tau)[0])
    x = np.linspace(center - config.grid_k * width, center + config.grid_k * width,
                    config.grid_points)
    e = expand_adaptive(alpha, config.z, config.ordering, tol=config.series_tol)
    return assemble_wavefunction(e, x, tau, bundle, max_tail=config.series_tol), alpha


def run_wavefunction(config, m=None, tau=0.0):
    grid, _ = wavefunction_grid(config, m, tau)
    return grid.to_json() + "\n" if config.output == "json" else grid.to_csv()


def run_expand(config, N=None):
    basis, bundle = _context(config)
    alpha = _alpha(config, basis, bundle)
    if N is None:
        e = expand_adaptive(alpha, config.z, config.ordering, tol=config.series_tol)
    else:
        e = expand(alpha, config.z, N, config.ordering, tol=config.series_tol)
    if config.output == "json":
        return e.to_json() + "\n"
    lines = ["m,re,im"] + [f"{k},{_fmt(c.real)},{_fmt(c.imag)}"
                           for k, c in enumerate(e.coefficients)]
    return "\n".join(lines) + "\n"


def _add_common(p):
    p.add_argument("--config", help="JSON run configuration file")
    p.add_argument("--preset", choices=["free", "harmonic", "repulsive", "linear", "driven"])
    p.add_argument("--omega", type=float)
    p.add_argument("--force", type=float)
    p.add_argument("--c-zero", type=float, nargs=2, metavar=("RE", "IM"))
    p.add_argument("--x0", type=float)
    p.add_argument("--p0", type=float)
    p.add_argument("--alpha", type=float, nargs=2, metavar=("RE", "IM"))
    p.add_argument("--z", type=float, nargs=2, metavar=("R", "THETA"))
    p.add_argument("--ordering", choices=[o.value for o in Ordering])
    p.add_argument("--tau-max", type=float)
    p.add_argument("--tau-steps", type=int)
    p.add_argument("--grid-k", type=float)
    p.add_argument("--grid-points", type=int)
    p.add_argument("--ode-tol", type=float)
    p.add_argument("--quad-tol", type=float)
    p.add_argument("--series-tol", type=float)
    p.add_argument("--format", choices=["csv", "json"], dest="output")
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--out", help="write to this file instead of stdout")


def build_config(args):
    if args.config:
        with open(args.config) as fh:
            d = parse_config(fh.read()).to_dict()
    else:
        d = {}
    pot = dict(d.get("potential", {"preset": "harmonic", "omega": 1.0}))
    if args.preset:
        pot = {"preset": args.preset, **{k: v for k, v in pot.items()
                                         if k in ("c_zero_re", "c_zero_im")}}
    if args.omega is not None:
        pot["omega"] = args.omega
    if args.force is not None:
        pot["force"] = args.force
    if args.c_zero is not None:
        pot["c_zero_re"], pot["c_zero_im"] = args.c_zero
    d["potential"] = pot
    simple = {"x0": args.x0, "p0": args.p0, "ordering": args.ordering,
              "tau_max": args.tau_max, "tau_steps": args.tau_steps, "output": args.output,
              "seed": args.seed}
    d.update({k: v for k, v in simple.items() if v is not None})
    if args.alpha is not None:
        d["alpha"] = list(args.alpha)
    if args.z is not None:
        d["z"] = list(args.z)
    grid = dict(d.get("grid", {}))
    if args.grid_k is not None:
        grid["k"] = args.grid_k
    if args.grid_points is not None:
        grid["points"] = args.grid_points
    d["grid"] = grid
    tols = dict(d.get("tolerances", {}))
    for k in ("ode_tol", "quad_tol", "series_tol"):
        if getattr(args, k) is not None:
            tols[k] = getattr(args, k)
    d["tolerances"] = tols
    return config_from_dict(d)


def _parser():
    p = argparse.ArgumentParser(prog="quadsqueeze",
                                description="Squeezed states of time-dependent quadratic "
                                            "potentials.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    t = sub.add_parser("trajectory", help="means and uncertainties along tau")
    _add_common(t)
    w = sub.add_parser("wavefunction", help="sample a state on an x grid")
    _add_common(w)
    w.add_argument("--m", type=int, help="number state index (default: squeezed state)")
    w.add_argument("--tau", type=float, default=0.0)
    e = sub.add_parser("expand", help="number-basis coefficients of a squeezed state")
    _add_common(e)
    e.add_argument("--N", type=int, help="truncation (default: adaptive)")
    v = sub.add_parser("verify", help="run the invariant battery")
    v.add_argument("--suite", action="append", choices=SUITES,
                   help="suite to run (repeatable; default all)")
    v.add_argument("--tier", choices=sorted(TIERS),
                   help="tolerance tier (overrides QUADSQUEEZE_TOLERANCE_TIER)")
    v.add_argument("--seed", type=int, default=20240611)
    v.add_argument("--corrupt-g2-sign", action="store_true",
                   help="negative control: flip the sign of g2 in the checked potential")
    v.add_argument("-o", "--out", help="write the residual table here")
    return p


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            report = run_verify(args.suite, seed=args.seed, tier=args.tier,
                                corrupt_g2_sign=args.corrupt_g2_sign)
            _emit(report.to_csv(), args.out)
            print(report.summary(), file=sys.stderr if not args.out else sys.stdout)
            return EXIT_OK if report.passed else EXIT_CHECK
        config = build_config(args)
        if args.command == "trajectory":
            _emit(run_trajectory(config), args.out)
        elif args.command == "wavefunction":
            if args.m is not None and args.m < 0:
                raise ConfigurationError("--m must be non-negative")
            _emit(run_wavefunction(config, args.m, args.tau), args.out)
        else:
            _emit(run_expand(config, args.N), args.out)
        return EXIT_OK
    except (ConfigurationError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
