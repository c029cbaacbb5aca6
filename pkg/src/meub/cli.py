"""Command-line front end.

Exit codes: 0 success, 2 unparseable input, 3 invalid mixture, 4 numerical
failure with no usable result.  Diagnostics go to standard error.
"""

import argparse
import csv
import json
import math
import os
import sys

from . import __version__
from .bounds import bound_series, optimized_bound_series
from .errors import (
    ConvergenceError,
    DomainError,
    EmptySeriesError,
    InvalidMixtureError,
    MixtureParseError,
    NonFiniteMoment,
)
from .estimators import McConfig, mc_abs_moment, mc_entropy, quad_abs_moment, quad_entropy
from .experiment import run_experiment
from .gmm import load_mixture, mixture_abs_moment

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3, 4
DEFAULT_SEED = 0


def _default_seed() -> int:
    raw = os.environ.get("MEUB_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"MEUB_SEED is not an integer: {raw!r}") from None


def _u64(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed must be in [0, 2**64): {v}")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {v}")
    return v


def _fmt(v, fmt: str) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, int):
        return str(v)
    return format(v, ".6g" if fmt == "table" else ".17g")


def _emit(rows: list, columns: list, fmt: str, out, footer: dict = None) -> None:
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r.get(c), fmt) for c in columns])
        return
    cells = [[_fmt(r.get(c), fmt) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    out.write("  ".join(c.rjust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
    for row in cells:
        out.write("  ".join(v.rjust(w) for v, w in zip(row, widths)).rstrip() + "\n")
    for k, v in (footer or {}).items():
        out.write(f"{k}: {_fmt(v, fmt)}\n")


def _json(obj, out) -> None:
    def clean(v):
        if isinstance(v, float) and not math.isfinite(v):
            return None
        if isinstance(v, dict):
            return {k: clean(x) for k, x in v.items()}
        if isinstance(v, list):
            return [clean(x) for x in v]
        return v
    json.dump(clean(obj), out, indent=2)
    out.write("\n")


# -- commands --------------------------------------------------------------


def cmd_bounds(args, out) -> int:
    g = load_mixture(args.mixture)
    if args.delta == "optimize":
        series = optimized_bound_series(g, args.lmax)
    else:
        delta = None if args.delta == "mean" else float(args.delta)
        series = bound_series(g, args.lmax, delta)
    report = series.to_dict()
    if args.verify:
        h = quad_entropy(g)
        report["entropy_quad"] = h
        report["margin"] = series.best_value - h
    if args.format == "json":
        _json(report, out)
        return EXIT_OK
    rows = []
    for l in range(1, args.lmax + 1):
        row = {"order": l}
        if l in series.entries:
            row["bound"] = series.entries[l]
        else:
            row["bound"] = "skipped"
            row["note"] = series.skipped.get(l, "")
        if series.shifts:
            row["delta"] = series.shifts.get(l)
        rows.append(row)
    cols = ["order", "bound"] + (["delta"] if series.shifts else []) + ["note"]
    footer = {"best_order": series.best_order, "best_value": series.best_value}
    if series.delta is not None:
        footer["delta"] = series.delta
    if series.first_failure is not None:
        footer["first_failure"] = series.first_failure
    if args.verify:
        footer["entropy_quad"] = report["entropy_quad"]
        footer["margin"] = report["margin"]
    _emit(rows, cols, args.format, out, footer if args.format == "table" else None)
    return EXIT_OK


def cmd_moments(args, out) -> int:
    g = load_mixture(args.mixture)
    use_quad = args.verify in ("quad", "both")
    use_mc = args.verify in ("mc", "both")
    rows = []
    for l in range(args.lmax + 1):
        row = {"order": l}
        try:
            formula = mixture_abs_moment(g, l, args.delta)
        except NonFiniteMoment:
            formula = None
            row["formula"] = "overflow"
        else:
            row["formula"] = formula
        if use_quad:
            try:
                q = quad_abs_moment(g, l, args.delta)
            except ConvergenceError:
                q = None
                row["quad"] = "no-convergence"
            else:
                row["quad"] = q
            if formula is not None and q:
                row["quad_err_pct"] = 100.0 * abs(q - formula) / abs(q)
        if use_mc:
            est, se = mc_abs_moment(g, l, args.delta, McConfig(args.samples, args.seed))
            row["mc"], row["mc_se"] = est, se
            if formula is not None and est:
                row["mc_err_pct"] = 100.0 * abs(est - formula) / abs(est)
        rows.append(row)
    cols = ["order", "formula"]
    if use_quad:
        cols += ["quad", "quad_err_pct"]
    if use_mc:
        cols += ["mc", "mc_se", "mc_err_pct"]
    if args.format == "json":
        _json({"delta": args.delta, "rows": rows}, out)
    else:
        _emit(rows, cols, args.format, out)
    return EXIT_OK


def cmd_entropy(args, out) -> int:
    g = load_mixture(args.mixture)
    if args.method == "quad":
        report = {"method": "quad", "entropy": quad_entropy(g)}
    else:
        est, se = mc_entropy(g, McConfig(args.samples, args.seed), workers=args.workers)
        report = {"method": "mc", "entropy": est, "se": se, "samples": args.samples, "seed": args.seed}
    if args.format == "json":
        _json(report, out)
    else:
        _emit([report], list(report), args.format, out)
    return EXIT_OK


def cmd_experiment(args, out) -> int:
    rep = run_experiment(args.trials, args.samples, args.seed, args.components, workers=args.workers)
    data = rep.to_dict(include_rows=args.rows)
    if args.format == "json":
        _json(data, out)
    elif args.format == "csv":
        fields = [k for k in data if k != "rows"]
        _emit([data], fields, "csv", out)
    else:
        for k in (k for k in data if k != "rows"):
            out.write(f"{k}: {_fmt(data[k], 'table')}\n")
    return EXIT_OK


# -- wiring ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="meub",
        description="Maximum-entropy upper bounds on the differential entropy of Gaussian mixtures.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    fmt = {"choices": ["table", "json", "csv"], "default": "table"}

    b = sub.add_parser("bounds", help="series of bounds U_1..U_lmax")
    b.add_argument("mixture", help="mixture file (text 'w mu sigma' lines or JSON)")
    b.add_argument("--lmax", type=_positive_int, default=10)
    b.add_argument("--delta", default="mean", help="'mean', 'optimize' or a number")
    b.add_argument("--verify", action="store_true", help="also report quadrature entropy and margin")
    b.add_argument("--format", **fmt)
    b.set_defaults(func=cmd_bounds)

    m = sub.add_parser("moments", help="raw absolute moments with oracle comparison")
    m.add_argument("mixture")
    m.add_argument("--lmax", type=int, default=10)
    m.add_argument("--delta", type=float, default=0.0)
    m.add_argument("--verify", choices=["quad", "mc", "both"], default="quad")
    m.add_argument("--samples", type=_positive_int, default=10**6)
    m.add_argument("--seed", type=_u64, default=None)
    m.add_argument("--format", **fmt)
    m.set_defaults(func=cmd_moments)

    e = sub.add_parser("entropy", help="entropy by quadrature or Monte Carlo")
    e.add_argument("mixture")
    e.add_argument("--method", choices=["quad", "mc"], default="quad")
    e.add_argument("--samples", type=_positive_int, default=10**6)
    e.add_argument("--seed", type=_u64, default=None)
    e.add_argument("--workers", type=_positive_int, default=1)
    e.add_argument("--format", **fmt)
    e.set_defaults(func=cmd_entropy)

    x = sub.add_parser("experiment", help="randomized Laplacian vs Gaussian bound comparison")
    x.add_argument("--trials", type=_positive_int, default=1000)
    x.add_argument("--samples", type=_positive_int, default=10**6)
    x.add_argument("--seed", type=_u64, default=None)
    x.add_argument("--components", type=_positive_int, default=2)
    x.add_argument("--workers", type=_positive_int, default=1)
    x.add_argument("--rows", action="store_true", help="include per-trial rows (json only)")
    x.add_argument("--format", **fmt)
    x.set_defaults(func=cmd_experiment)
    return p


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", 0) is None:
        try:
            args.seed = _u64(str(_default_seed()))
        except argparse.ArgumentTypeError as exc:
            parser.error(str(exc))
    if args.command == "moments" and args.lmax < 0:
        parser.error("--lmax must be >= 0")
    if args.command == "bounds" and args.delta not in ("mean", "optimize"):
        try:
            float(args.delta)
        except ValueError:
            parser.error(f"--delta must be 'mean', 'optimize' or a number, got {args.delta!r}")
    try:
        return args.func(args, out)
    except MixtureParseError as exc:
        print(f"meub: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidMixtureError as exc:
        print(f"meub: invalid mixture: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ConvergenceError, EmptySeriesError, NonFiniteMoment, DomainError) as exc:
        print(f"meub: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
