"""Command-line front end.

Every command prints a CSV table (17 significant digits per number) or, with
``--format structured-text``, a JSON document.  Output depends only on the
arguments, so repeated runs give identical bytes.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .errors import ConstraintError, DomainError, EvaluationError, RegimeError, ResolutionError
from .measure import WeightParams, norm_grad_lp_alpha, norm_lq_theta
from .optimize import (
    OptimizerConfig,
    default_identity_fracs,
    maximize_tmc,
    maximize_tmsc,
    sigma_star_probe,
    sweep_subcritical,
    tau_corrected_moser,
    tmc_via_identity,
)
from .functionals import identity_ratio
from .profiles import default_grid, make_moser, save_profile
from .verify import SUITES, format_manifest, moser_lp_closed_form, run_suite

COMMANDS = ("tmsc", "tmc", "identity", "sweep", "moser", "probe-sigma-star", "verify")
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_CHECKS_FAILED = 1


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    return format(float(x), ".17g")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("parameters")
    g.add_argument("--p", type=float, default=2.0, help="integrability exponent p >= 2 (default 2)")
    g.add_argument("--theta", type=float, default=1.0, help="fractional dimension parameter theta >= 0 (default 1)")
    g.add_argument("--alpha", type=float, default=None, help="gradient weight; must equal p-1 if given")
    g.add_argument("--grid-nodes", type=int, default=512)
    g.add_argument("--r-min", type=float, default=1e-10)
    g.add_argument("--r-max", type=float, default=10.0)
    g.add_argument("--restarts", type=int, default=4)
    g.add_argument("--max-iters", type=int, default=2000)
    g.add_argument("--method", choices=("lbfgs", "projected"), default="lbfgs")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default=None, help="output file (default stdout)")
    g.add_argument("--format", choices=("csv", "structured-text"), default="csv")

    parser = argparse.ArgumentParser(prog="fractm", description="Trudinger-Moser suprema in fractional dimensions.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def mu_flags(p):
        m = p.add_mutually_exclusive_group(required=True)
        m.add_argument("--mu-frac", type=float, help="mu as a fraction of mu*")
        m.add_argument("--mu-abs", type=float, help="absolute mu")

    def sigma_flags(p):
        m = p.add_mutually_exclusive_group(required=True)
        m.add_argument("--sigma-frac", type=float, help="sigma as a fraction of mu*")
        m.add_argument("--sigma-abs", type=float, help="absolute sigma")

    p = sub.add_parser("tmsc", parents=[common], help="subcritical supremum estimate")
    mu_flags(p)
    p.add_argument("--emit-profile", default=None, help="write the maximizing profile to this file")

    p = sub.add_parser("tmc", parents=[common], help="critical supremum estimate")
    sigma_flags(p)
    p.add_argument("--emit-profile", default=None)

    p = sub.add_parser("identity", parents=[common], help="critical estimate through transformed subcritical maximizers")
    sigma_flags(p)
    p.add_argument("--mu-grid", type=_float_list, default=None, help="mu values as fractions of mu*, all below sigma")
    p.add_argument("--emit-profile", default=None)

    p = sub.add_parser("sweep", parents=[common], help="subcritical estimates over a list of mu/mu*")
    p.add_argument("--mu-grid", type=_float_list, required=True)

    p = sub.add_parser("moser", parents=[common], help="Moser concentration profiles and their norms")
    p.add_argument("--n", type=_int_list, required=True, help="index or comma-separated indices")
    p.add_argument("--emit-profile", default=None, help="write u_n to this file (single --n only)")

    p = sub.add_parser("probe-sigma-star", parents=[common], help="gap and nu(sigma) along a sigma/mu* grid")
    p.add_argument("--sigma-grid", type=_float_list, required=True)

    p = sub.add_parser("verify", parents=[common], help="run a property suite and print its manifest")
    p.add_argument("--suite", choices=SUITES, default="all")
    return parser


def _validate(args, parser) -> None:
    problems = []
    if args.grid_nodes < 16:
        problems.append("--grid-nodes must be >= 16")
    if not 0 < args.r_min < args.r_max:
        problems.append("need 0 < --r-min < --r-max")
    if args.restarts < 1:
        problems.append("--restarts must be >= 1")
    if args.max_iters < 1:
        problems.append("--max-iters must be >= 1")
    c = args.command
    if c == "tmsc" and args.mu_frac is not None and not 0 < args.mu_frac < 1:
        problems.append("--mu-frac must lie in (0, 1); the subcritical supremum is infinite from mu* on")
    if c in ("tmc", "identity") and args.sigma_frac is not None and not 0 < args.sigma_frac <= 1:
        problems.append("--sigma-frac must lie in (0, 1]; the critical supremum is infinite above mu*")
    if c == "sweep":
        if not args.mu_grid:
            problems.append("--mu-grid must list at least one value")
        elif any(not 0 < f < 1 for f in args.mu_grid):
            problems.append("--mu-grid values must lie in (0, 1)")
    if c == "identity" and args.mu_grid is not None:
        if not args.mu_grid or any(f <= 0 for f in args.mu_grid):
            problems.append("--mu-grid values must be positive")
        if args.sigma_frac is not None and any(f >= args.sigma_frac for f in args.mu_grid):
            problems.append("--mu-grid values must be smaller than --sigma-frac")
    if c == "probe-sigma-star":
        if not args.sigma_grid or any(not 0 < f <= 1 for f in args.sigma_grid):
            problems.append("--sigma-grid values must lie in (0, 1]")
    if c == "moser":
        if any(n < 1 for n in args.n):
            problems.append("--n values must be positive integers")
        if args.emit_profile and len(args.n) != 1:
            problems.append("--emit-profile needs a single --n")
    if problems:
        parser.error("; ".join(problems))


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if not isinstance(v, str) else v for v in r])
    return buf.getvalue()


def _json(obj) -> str:
    def default(o):
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return json.dumps(obj, sort_keys=True, indent=2, default=default, allow_nan=True) + "\n"


def _resolve(frac, absolute, params):
    return frac * params.mu_star if frac is not None else absolute


def _cmd_tmsc(args, params, cfg):
    mu = _resolve(args.mu_frac, args.mu_abs, params)
    est = maximize_tmsc(mu, params, cfg)
    if args.emit_profile:
        save_profile(args.emit_profile, est.argmax_profile, params)
    if args.format == "structured-text":
        return _json(est.to_dict(params))
    f = mu / params.mu_star
    prod = est.value * (1.0 - f ** (params.p - 1.0))
    return _csv(["mu_frac", "mu", "estimate", "normalized_product", "converged"], [[f, mu, est.value, prod, est.converged]])


def _critical_row(est, sigma, params):
    lower = sigma**params.k0 / math.factorial(params.k0)
    nu = params.fact_pm1() / sigma ** (params.p - 1.0) * est.value
    return [sigma / params.mu_star, sigma, est.value, est.value - lower, nu, est.converged, est.exploratory]


CRITICAL_HEADER = ["sigma_frac", "sigma", "estimate", "gap", "nu", "converged", "exploratory"]


def _cmd_tmc(args, params, cfg):
    sigma = _resolve(args.sigma_frac, args.sigma_abs, params)
    est = maximize_tmc(sigma, params, cfg)
    if args.emit_profile:
        save_profile(args.emit_profile, est.argmax_profile, params)
    if args.format == "structured-text":
        return _json(est.to_dict(params))
    return _csv(CRITICAL_HEADER, [_critical_row(est, sigma, params)])


def _cmd_identity(args, params, cfg):
    sigma = _resolve(args.sigma_frac, args.sigma_abs, params)
    if args.mu_grid is not None:
        mus = [f * params.mu_star for f in args.mu_grid]
    else:
        mus = [f * sigma for f in default_identity_fracs()]
    est = tmc_via_identity(sigma, params, mus, cfg)
    if args.emit_profile:
        save_profile(args.emit_profile, est.argmax_profile, params)
    if args.format == "structured-text":
        return _json(est.to_dict(params))
    rows = [
        [r["mu"] / params.mu_star, r["mu"], r["tmsc_estimate"], identity_ratio(r["mu"], sigma, params), r["predicted"], r["critical_value"]]
        for r in est.diagnostics["rows"]
    ]
    return _csv(["mu_frac", "mu", "tmsc_estimate", "identity_ratio", "predicted", "critical_value"], rows)


def _cmd_sweep(args, params, cfg):
    rows = sweep_subcritical(args.mu_grid, params, cfg)
    if args.format == "structured-text":
        return _json({"p": params.p, "theta": params.theta, "mu_star": params.mu_star, "rows": [r.__dict__ for r in rows]})
    return _csv(
        ["mu_frac", "mu", "estimate", "normalized_product", "converged"],
        [[r.mu_frac, r.mu, r.estimate, r.normalized_product, r.converged] for r in rows],
    )


def _cmd_moser(args, params, cfg):
    rows = []
    for n in sorted(set(args.n)):
        u = make_moser(n, params)
        g = norm_grad_lp_alpha(u, params) ** params.p
        l = norm_lq_theta(u, params.p, params.theta) ** params.p
        tau = float(tau_corrected_moser(n, params).values[0] / u.values[0])
        rows.append([n, g, l, n * l, n * moser_lp_closed_form(n, params), tau])
        if args.emit_profile:
            save_profile(args.emit_profile, u, params)
    header = ["n", "grad_norm_p", "lp_norm_p", "n_lp_norm_p", "n_lp_closed_form", "tau"]
    if args.format == "structured-text":
        return _json({"p": params.p, "theta": params.theta, "rows": [dict(zip(header, r)) for r in rows]})
    return _csv(header, rows)


def _cmd_probe(args, params, cfg):
    rep = sigma_star_probe(params, [f * params.mu_star for f in args.sigma_grid], cfg)
    frac = lambda s: None if s is None else s / params.mu_star
    if args.format == "structured-text":
        return _json(
            {
                "p": params.p,
                "theta": params.theta,
                "mu_star": params.mu_star,
                "rows": [
                    {"sigma_frac": r.sigma_frac, "sigma": r.sigma, "tmc_estimate": r.tmc_estimate, "gap": r.gap, "nu": r.nu}
                    for r in rep.rows
                ],
                "sigma_star_bracket_frac": [frac(rep.sigma_star_lower), frac(rep.sigma_star_upper)],
                "nu_monotone": rep.nu_monotone,
                "nu_worst_drop": rep.nu_worst_drop,
                "gap_tolerance": rep.gap_tolerance,
                "caveat": rep.caveat,
            }
        )
    text = _csv(
        ["sigma_frac", "sigma", "tmc_estimate", "gap", "nu"],
        [[r.sigma_frac, r.sigma, r.tmc_estimate, r.gap, r.nu] for r in rep.rows],
    )
    lo, hi = frac(rep.sigma_star_lower), frac(rep.sigma_star_upper)
    text += f"# sigma_star_bracket_frac=({fmt(lo) or '0'},{fmt(hi) or 'not found'}]\n"
    text += f"# nu_monotone={fmt(rep.nu_monotone)}\n# caveat: {rep.caveat}\n"
    return text


def _cmd_verify(args, params, cfg):
    results = run_suite(args.suite, args.seed, cfg)
    if args.format == "structured-text":
        text = _json([{k: v for k, v in r.__dict__.items() if k != "data"} for r in results])
    else:
        text = format_manifest(results)
    return text, all(r.passed for r in results)


HANDLERS = {
    "tmsc": _cmd_tmsc,
    "tmc": _cmd_tmc,
    "identity": _cmd_identity,
    "sweep": _cmd_sweep,
    "moser": _cmd_moser,
    "probe-sigma-star": _cmd_probe,
    "verify": _cmd_verify,
}

HINTS = {
    RegimeError: "only alpha = p - 1 is supported (omit --alpha); sigma_* probing needs an integer p",
    ResolutionError: "raise --grid-nodes or lower --r-min",
    ConstraintError: "normalize the profile before evaluating",
    DomainError: "check the parameter ranges in --help",
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(args, parser)
    try:
        params = WeightParams(args.p, args.theta, args.alpha)
        cfg = OptimizerConfig(
            max_iters=args.max_iters,
            restarts=args.restarts,
            grid=default_grid(args.grid_nodes, args.r_min, args.r_max),
            rng_seed=args.seed,
            method=args.method,
        )
        out = HANDLERS[args.command](args, params, cfg)
    except (DomainError, ResolutionError, ConstraintError, EvaluationError, ArithmeticError) as exc:
        hint = next((h for t, h in HINTS.items() if isinstance(exc, t)), "try a coarser parameter range")
        print(f"fractm: error: {exc}\nhint: {hint}", file=sys.stderr)
        return EXIT_NUMERIC
    status = 0
    if isinstance(out, tuple):
        out, ok = out
        status = 0 if ok else EXIT_CHECKS_FAILED
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return status


def main() -> None:
    sys.exit(run())
