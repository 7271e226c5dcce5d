"""Command-line front end.

Three subcommands:

* ``estimate``  - density estimate from a file of grouped observations
* ``simulate``  - Monte-Carlo risk tables over scenario grids
* ``diagnose``  - theoretical threshold diagnostics for a named law

Exit codes: 0 success, 2 input/parameter error, 3 numerical failure
(denominator floor hit), 4 simulate produced no successful cell.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bandwidth import (
    adaptive_cutoff,
    cutoff_cap,
    diagnostic_threshold_u,
    oracle_cutoff,
    threshold_value,
)
from .charfn import UGrid, evaluate_grid
from .errors import (
    DataFormatError,
    DenominatorTooSmall,
    GroupDeconvError,
    LevelNotReached,
    ParameterError,
)
from .experiments import ScenarioGrid, run_grid
from .inversion import XGrid, default_xgrid, invert
from .rootlog import default_step, distinguished_root
from .samples import benchmark_laws, law_from_name, load_sample, true_cf

DEFAULT_ETA = 1.1
DEFAULT_SCAN_RESOLUTION = 0.01


def _defaults_metadata(args) -> dict:
    """Every tunable that shaped the output, echoed into the result files."""
    return {
        "eta": getattr(args, "eta", DEFAULT_ETA),
        "scan_resolution": DEFAULT_SCAN_RESOLUTION,
        "x_grid_policy": "center mean(Y)/K, half-width 8*sd(X), 1024 points",
        "replications": getattr(args, "reps", None),
        "seed": getattr(args, "seed", None),
    }


# ---------------------------------------------------------------------------
# estimate
# ---------------------------------------------------------------------------


def _parse_cutoff_flag(text: str):
    if text == "adaptive" or text == "oracle":
        return text, None
    if text.startswith("fixed:"):
        try:
            m = float(text.split(":", 1)[1])
        except ValueError:
            raise ParameterError(f"fixed cutoff must be numeric (got '{text}')")
        if m <= 0:
            raise ParameterError(f"fixed cutoff must be > 0 (got {m})")
        return "fixed", m
    raise ParameterError(
        f"cutoff must be adaptive, oracle, or fixed:<m> (got '{text}')"
    )


def cmd_estimate(args) -> int:
    if args.group_size < 1:
        raise ParameterError(f"group size must be >= 1 (got {args.group_size:g})")
    if args.eta <= 1:
        raise ParameterError(f"eta must be > 1 (got {args.eta})")
    sample = load_sample(args.input, args.group_size)
    rule, fixed_m = _parse_cutoff_flag(args.cutoff)

    if args.x_min is not None or args.x_max is not None or args.x_count != 1024:
        if args.x_min is None or args.x_max is None:
            raise ParameterError("--x-min and --x-max must be given together")
        xgrid = XGrid(args.x_min, args.x_max, args.x_count)
    else:
        xgrid = default_xgrid(sample)

    if rule == "adaptive":
        record = adaptive_cutoff(sample, args.eta, DEFAULT_SCAN_RESOLUTION)
        m = record.value
        if m <= 0:
            raise ParameterError(
                f"adaptive cutoff degenerated to {m:g}; "
                f"the threshold exceeds 1 at n={sample.n}"
            )
    elif rule == "oracle":
        if args.law is None:
            raise ParameterError("--cutoff oracle requires --law")
        record = oracle_cutoff(law_from_name(args.law), sample, xgrid=xgrid)
        m = record.value
    else:
        record = None
        m = fixed_m

    step = default_step(m)
    grid = UGrid(u_max=m + step, step=step)
    ev = evaluate_grid(sample, grid)
    root = distinguished_root(ev, m)
    est = invert(root, m, xgrid)

    cutoff_rule = record.as_dict() if record is not None else {"rule": "fixed"}
    est = type(est)(
        xgrid=est.xgrid,
        values=est.values,
        cutoff_m=m,
        cutoff_rule=cutoff_rule | {"defaults": _defaults_metadata(args)},
        group_size=sample.group_size,
        provenance={"n": sample.n, "source": str(args.input)},
    )
    out = Path(args.out)
    est.to_csv(out.with_suffix(".csv"))
    est.to_json(out.with_suffix(".json"))
    print(
        f"estimate: n={sample.n} K={sample.group_size:g} cutoff={m:.6g} ({rule}) "
        f"-> {out.with_suffix('.csv')}, {out.with_suffix('.json')}"
    )
    return 0


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def _parse_config_file(path) -> dict:
    """Flat ``key = value`` lines; '#' starts a comment; lists are comma-separated."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataFormatError(
                f"{path}:{lineno}: expected 'key = value' (got '{raw.strip()}')",
                line=lineno,
            )
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _int_list(text):
    return tuple(int(tok) for tok in str(text).split(",") if tok.strip())


def cmd_simulate(args) -> int:
    cfg = _parse_config_file(args.config) if args.config else {}

    law_names = args.law or (
        str(cfg["laws"]).split(",") if "laws" in cfg else list(benchmark_laws())
    )
    laws = tuple(law_from_name(name) for name in law_names)
    ns = tuple(args.n) if args.n else (_int_list(cfg["ns"]) if "ns" in cfg else (1000, 5000, 10000))
    ks = (
        tuple(args.group_size)
        if args.group_size
        else (_int_list(cfg["group_sizes"]) if "group_sizes" in cfg else (5, 10, 20, 50))
    )
    reps = args.reps if args.reps is not None else int(cfg.get("reps", 500))
    if args.quick:
        reps = min(reps, 50)
    eta = args.eta if args.eta is not None else float(cfg.get("eta", DEFAULT_ETA))
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 20130528))

    grid = ScenarioGrid(
        laws=laws, ns=ns, group_sizes=ks, replications=reps, eta=eta, master_seed=seed
    )
    report = run_grid(grid)

    out = Path(args.out)
    report.to_csv(out.with_suffix(".csv"))
    out.with_suffix(".txt").write_text(report.to_text())
    succeeded = sum(1 for row in report.rows if row.replications > 0)
    print(
        f"simulate: {len(report.rows)} rows ({succeeded} with successes) "
        f"-> {out.with_suffix('.csv')}, {out.with_suffix('.txt')}"
    )
    for failure in report.failures[:5]:
        print(f"warning: {failure}", file=sys.stderr)
    if len(report.failures) > 5:
        print(f"warning: ... {len(report.failures) - 5} more", file=sys.stderr)
    return 0 if succeeded else 4


# ---------------------------------------------------------------------------
# diagnose
# ---------------------------------------------------------------------------


def cmd_diagnose(args) -> int:
    if args.law is None:
        raise ParameterError("diagnose requires --law")
    if args.group_size < 1:
        raise ParameterError(f"group size must be >= 1 (got {args.group_size:g})")
    law = law_from_name(args.law)
    n, k = args.n, args.group_size
    gamma = args.gamma if args.gamma is not None else float(np.sqrt(1 + 2 / k + args.delta))
    level = (1 + args.eps) * gamma * float(np.sqrt(np.log(n) / n))

    warning = None
    try:
        u_n = diagnostic_threshold_u(law, n, k, gamma=gamma, eps=args.eps)
    except LevelNotReached as exc:
        u_n = None
        warning = str(exc)

    t = threshold_value(n, k, args.eta)
    cap = cutoff_cap(n, k)
    summary = {
        "law": law.label,
        "n": n,
        "group_size": k,
        "gamma": gamma,
        "eps": args.eps,
        "delta": args.delta,
        "level": level,
        "u_gamma_eps": u_n,
        "adaptive_threshold": t,
        "cutoff_cap": cap,
        "warning": warning,
        "defaults": _defaults_metadata(args),
    }

    u_hi = max(cap, (u_n or 0.0) * 1.5, 1.0)
    us = np.linspace(0.0, u_hi, 512)
    abs_phi_x = np.abs(true_cf(law, us))
    abs_phi = abs_phi_x**k

    out = Path(args.out)
    with open(out.with_suffix(".csv"), "w", newline="") as fh:
        fh.write("u,abs_phi_x,abs_phi\n")
        for u, a, b in zip(us, abs_phi_x, abs_phi):
            fh.write(f"{u:.10g},{a:.10g},{b:.10g}\n")
    out.with_suffix(".json").write_text(json.dumps(summary, indent=2) + "\n")
    shown = "not reached" if u_n is None else f"{u_n:.6g}"
    print(
        f"diagnose: {law.label} n={n} K={k:g}: u_(gamma,eps)={shown}, "
        f"threshold={t:.6g}, cap={cap:.6g} -> {out.with_suffix('.csv')}, "
        f"{out.with_suffix('.json')}"
    )
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupdeconv",
        description=(
            "Estimate the density of a summand X from observations of K-fold "
            "sums, via the distinguished-logarithm root of the empirical "
            "characteristic function with spectral-cutoff inversion."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate a density from a data file")
    est.add_argument("--input", required=True, help="CSV/text file, one observation per line")
    est.add_argument("--group-size", type=float, required=True, help="K (or real >= 1)")
    est.add_argument("--eta", type=float, default=DEFAULT_ETA, help="adaptive threshold constant (> 1)")
    est.add_argument("--cutoff", default="adaptive", help="adaptive | oracle | fixed:<m>")
    est.add_argument("--law", default=None, help="law name (required for --cutoff oracle)")
    est.add_argument("--x-min", type=float, default=None)
    est.add_argument("--x-max", type=float, default=None)
    est.add_argument("--x-count", type=int, default=1024)
    est.add_argument("--out", default="estimate", help="output path prefix")
    est.set_defaults(func=cmd_estimate)

    sim = sub.add_parser("simulate", help="run Monte-Carlo risk tables")
    sim.add_argument("--law", action="append", help="law name; repeatable (default: all four)")
    sim.add_argument("--n", action="append", type=int, help="sample size; repeatable")
    sim.add_argument("--group-size", action="append", type=int, help="K; repeatable")
    sim.add_argument("--reps", type=int, default=None, help="replications per cell (default 500)")
    sim.add_argument("--eta", type=float, default=None)
    sim.add_argument("--seed", type=int, default=None, help="master seed")
    sim.add_argument("--quick", action="store_true", help="CI mode: at most 50 replications")
    sim.add_argument("--config", default=None, help="key = value file defining the grid")
    sim.add_argument("--out", default="risks", help="output path prefix")
    sim.set_defaults(func=cmd_simulate)

    dia = sub.add_parser("diagnose", help="theoretical threshold diagnostics")
    dia.add_argument("--law", required=True)
    dia.add_argument("--n", type=int, required=True)
    dia.add_argument("--group-size", type=float, required=True)
    dia.add_argument("--eta", type=float, default=DEFAULT_ETA)
    dia.add_argument("--eps", type=float, default=0.1)
    dia.add_argument("--delta", type=float, default=0.1)
    dia.add_argument("--gamma", type=float, default=None, help="override sqrt(1 + 2/K + delta)")
    dia.add_argument("--out", default="diagnostics", help="output path prefix")
    dia.set_defaults(func=cmd_diagnose)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DenominatorTooSmall as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParameterError, DataFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GroupDeconvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
