"""Command-line interface.

Subcommands: eval, curve, roots, divergence, verify.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 domain or infeasibility error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .divergence import AlphaSpec, GaussianParams, alpha_divergence, perception_sup
from .exceptions import DomainError, RangeError, RdpfError
from .polynomial import PolynomialInstance, sign_changes, solve_roots, trace
from .solver import RdpfQuery, jg_rdpf
from .verify import run_verification

CURVE_FIELDS = ["alpha", "P", "D", "rate", "rho2", "theta", "regime", "error"]
EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3
LN2 = math.log(2.0)


class UsageError(Exception):
    """Flag values that parse but do not form a valid request."""


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".9g")
    return "" if v is None else str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render_table(rows: list[dict], fields: list[str], fmt: str) -> str:
    if fmt == "json":
        recs = [{k: _json_value(r.get(k)) for k in fields} for r in rows]
        return json.dumps(recs, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_fmt(r.get(k)) for k in fields])
    return buf.getvalue()


def _alpha(value: float) -> float:
    try:
        return AlphaSpec(value).alpha
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _row(alpha: float, P: float, D: float, sigma2: float, bits: bool) -> dict:
    row = {"alpha": alpha, "P": P, "D": D}
    try:
        sol = jg_rdpf(RdpfQuery(sigma2, D, P, alpha))
    except RdpfError as exc:
        row["error"] = type(exc).__name__
        return row
    row.update(
        rate=sol.rate / LN2 if bits else sol.rate,
        rho2=sol.rho2,
        theta=sol.theta,
        regime=sol.regime.value,
    )
    return row


def cmd_eval(args) -> int:
    alpha = _alpha(args.alpha)
    if not args.sigma2 > 0 or not args.dist > 0 or math.isnan(args.perc) or args.perc < 0:
        raise UsageError("need sigma2 > 0, dist > 0 and perc >= 0")
    if math.isfinite(args.perc) and args.perc > perception_sup(alpha):
        raise RangeError(f"perc={args.perc} exceeds the supremum {perception_sup(alpha):.6g} for alpha={alpha}")
    sol = jg_rdpf(RdpfQuery(args.sigma2, args.dist, args.perc, alpha))
    row = {
        "alpha": alpha,
        "P": args.perc,
        "D": args.dist,
        "rate": sol.rate / LN2 if args.bits else sol.rate,
        "rho2": sol.rho2,
        "theta": sol.theta,
        "regime": sol.regime.value,
        "units": "bits" if args.bits else "nats",
    }
    fields = ["alpha", "P", "D", "rate", "rho2", "theta", "regime", "units"]
    if args.format == "json":
        text = json.dumps({k: _json_value(row[k]) for k in fields}) + "\n"
    else:
        text = _render_table([row], fields, "csv")
    _emit(text, args.out)
    return EXIT_OK


def cmd_curve(args) -> int:
    alphas = [_alpha(a) for a in args.alpha]
    if args.count < 2:
        raise UsageError("count must be >= 2")
    if not 0 < args.dmin <= args.dmax:
        raise UsageError("need 0 < dmin <= dmax")
    if not args.sigma2 > 0:
        raise UsageError("sigma2 must be positive")
    if any(math.isnan(p) or p < 0 for p in args.perc):
        raise UsageError("perception budgets must be >= 0")
    if args.jobs < 1:
        raise UsageError("jobs must be >= 1")
    Ds = np.linspace(args.dmin, args.dmax, args.count).tolist()
    points = [(a, p, d) for a in alphas for p in args.perc for d in Ds]
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        rows = list(pool.map(lambda t: _row(*t, args.sigma2, args.bits), points))
    _emit(_render_table(rows, CURVE_FIELDS, args.format), args.out)
    return EXIT_OK


def cmd_roots(args) -> int:
    alpha = _alpha(args.alpha)
    if math.isnan(args.perc) or args.perc < 0 or math.isinf(args.perc):
        raise UsageError("perc must be finite and >= 0")
    if args.perc > perception_sup(alpha):
        raise RangeError(f"perc={args.perc} exceeds the supremum {perception_sup(alpha):.6g}")
    inst = PolynomialInstance.from_perception(args.perc, alpha)
    roots = solve_roots(args.perc, alpha)
    info = {
        "alpha": alpha,
        "P": args.perc,
        "C": inst.C,
        "x0": roots.x0,
        "y0": roots.y0,
        "lower_lo": None if roots.lower is None else roots.lower.lo,
        "lower_hi": None if roots.lower is None else roots.lower.hi,
        "upper_lo": None if roots.upper is None else roots.upper.lo,
        "upper_hi": None if roots.upper is None else roots.upper.hi,
        "r0": roots.r0,
        "r1": roots.r1,
        "residual0": roots.residual0,
        "residual1": roots.residual1,
        "double_root": roots.r0 == roots.r1,
    }
    samples = None
    if args.trace:
        samples = trace(inst, args.trace_points, x_max=max(2.0, 1.5 * roots.r1))
        info["sign_changes"] = sign_changes(f for _, f in samples)
    if args.format == "json":
        doc = {k: _json_value(v) for k, v in info.items()}
        if samples is not None:
            doc["trace"] = [[x, f] for x, f in samples]
        text = json.dumps(doc, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["field", "value"])
        for k, v in info.items():
            w.writerow([k, _fmt(v)])
        if samples is not None:
            w.writerow([])
            w.writerow(["x", "f"])
            for x, f in samples:
                w.writerow([_fmt(x), _fmt(f)])
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK


def cmd_divergence(args) -> int:
    alpha = _alpha(args.alpha)
    try:
        p = GaussianParams(args.mean_p, args.var_p)
        q = GaussianParams(args.mean_q, args.var_q)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    val = alpha_divergence(p, q, alpha)
    row = {"alpha": alpha, "value": val.value, "h_alpha": val.h_alpha}
    fields = list(row)
    text = json.dumps(row) + "\n" if args.format == "json" else _render_table([row], fields, "csv")
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.cases < 1:
        raise UsageError("cases must be >= 1")
    report, ok = run_verification(args.seed, args.cases)
    _emit(report, args.out)
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jgrdpf",
        description="Jointly Gaussian rate-distortion-perception function with alpha-divergence perception.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, table=True):
        p.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        if table:
            p.add_argument("--sigma2", type=float, default=1.0, help="source variance (default 1)")
            p.add_argument("--bits", action="store_true", help="report rates in bits")

    p = sub.add_parser("eval", help="solve a single (D, P) query")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--dist", type=float, required=True, help="MSE budget D")
    p.add_argument("--perc", type=float, required=True, help="perception budget P ('inf' allowed)")
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("curve", help="sweep rate-distortion curves")
    p.add_argument("--alpha", type=float, nargs="+", required=True)
    p.add_argument("--perc", type=float, nargs="+", required=True)
    p.add_argument("--dmin", type=float, default=0.01)
    p.add_argument("--dmax", type=float, default=2.0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--jobs", type=int, default=1, help="worker threads")
    common(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("roots", help="perception polynomial diagnostics")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--perc", type=float, required=True)
    p.add_argument("--trace", action="store_true", help="append sampled (x, f(x)) values")
    p.add_argument("--trace-points", type=int, default=200)
    common(p, table=False)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("divergence", help="closed-form alpha-divergence of two Gaussians")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--mean-p", type=float, default=0.0)
    p.add_argument("--var-p", type=float, default=1.0)
    p.add_argument("--mean-q", type=float, default=0.0)
    p.add_argument("--var-q", type=float, required=True)
    common(p, table=False)
    p.set_defaults(func=cmd_divergence)

    p = sub.add_parser("verify", help="run the seeded oracle suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, RangeError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RdpfError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
