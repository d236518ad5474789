"""Command-line front end.

Exit codes: 0 success, 1 inequality violations found, 2 bad usage,
3 domain error (or unrepresentable result), 4 convergence failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from typing import Any, Optional, Sequence

from . import __version__
from ._types import Params
from .bounds import INEQUALITIES, InequalityId, bound_value, check_domain
from .errors import ConvergenceError, DomainError
from .quadrature import DEFAULT_REL_TOL, integral_i, integral_k
from .special import bessel_i, bessel_k, gamma, hyp1f2
from .verification import (DEFAULT_TOL, GridSpec, VerificationReport, compute_cnun, default_grid,
                           explore_conjecture, logspace, probe_conjecture_optimality,
                           reproduce_tables, verify_inequality)

log = logging.getLogger("besseline")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_DOMAIN, EXIT_CONVERGENCE = 0, 1, 2, 3, 4


def fmt_float(v: Any):
    """Round to 10 significant digits; non-finite values become null."""
    if isinstance(v, bool) or not isinstance(v, float):
        return v
    if not math.isfinite(v):
        return None
    return float(f"{v:.9e}")


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return fmt_float(obj)


def float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def log_range(text: str) -> list[float]:
    """``lo:hi:num`` for a log-spaced range, or a comma-separated list."""
    if ":" in text:
        try:
            lo, hi, num = text.split(":")
            return logspace(float(lo), float(hi), int(num))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"expected lo:hi:num, got {text!r}") from exc
    return float_list(text)


# ---------------------------------------------------------------------------
# command handlers: each returns (params, results, warnings, exit_code)
# ---------------------------------------------------------------------------

def _eval_result_row(r, **extra):
    row = dict(extra)
    row.update(value=r.value, abs_error_bound=r.abs_error_bound)
    return row


def cmd_eval(args):
    what = args.what
    if what == "bessel":
        fn = bessel_i if args.kind == "I" else bessel_k
        r = fn(args.nu, args.x, scaled=args.scaled)
        params = {"kind": args.kind, "nu": args.nu, "x": args.x, "scaled": args.scaled}
    elif what == "gamma":
        r = gamma(args.u)
        params = {"u": args.u}
    elif what == "hyp1f2":
        r = hyp1f2(args.a1, args.b1, args.b2, args.z)
        params = {"a1": args.a1, "b1": args.b1, "b2": args.b2, "z": args.z}
    else:
        p = Params(args.nu, args.n, args.gamma, args.x)
        fn = integral_i if args.family == "I" else integral_k
        r = fn(p, args.rel_tol)
        params = {"family": args.family, **p.as_dict(), "rel_tol": args.rel_tol}
    return params, [_eval_result_row(r)], [], EXIT_OK


def cmd_bounds(args):
    ineq = InequalityId.parse(args.ineq)
    p = Params(args.nu, args.n, args.gamma, args.x)
    status = check_domain(ineq, p, args.c)
    r = bound_value(ineq, p, args.c)
    info = INEQUALITIES[ineq]
    params = {"ineq": ineq.value, **p.as_dict(), "c": args.c}
    row = _eval_result_row(r, side=info.side.value, status=status)
    return params, [row], [], EXIT_OK


def _grid_from_args(args, ineq) -> GridSpec:
    base = default_grid(ineq) if args.grid == "default" else GridSpec(
        (0.0, 1.0, 2.5, 5.0), (0.0, 0.5), (0.0, 0.25, 0.5), tuple(logspace(1e-2, 50.0, 12)))
    return GridSpec(tuple(args.nus) if args.nus else base.nus,
                    tuple(args.ns) if args.ns else base.ns,
                    tuple(args.gammas) if args.gammas else base.gammas,
                    tuple(args.xs) if args.xs else base.xs)


def _report_rows(rep: VerificationReport):
    rows = []
    for r in rep.records:
        row = {"inequality": rep.inequality.value, **r.params.as_dict(), "status": r.status,
               "target": r.target, "bound": r.bound, "margin": r.margin, "error": r.error}
        if r.note:
            row["note"] = r.note
        rows.append(row)
    return rows


def _report_summary(rep: VerificationReport):
    return {
        "inequality": rep.inequality.value,
        "exploratory": rep.exploratory,
        "points_checked": rep.points_checked,
        "violations": [{**v.params.as_dict(), "margin": v.margin} for v in rep.violations],
        "flagged": [{**p.as_dict(), "reason": why} for p, why in rep.flagged],
        "min_margin": rep.min_margin,
        "tightness": [{**p.as_dict(), "ratio": q} for p, q in rep.tightness],
        "notes": list(rep.notes),
    }


def cmd_verify(args):
    ids = list(InequalityId) if args.ineq.lower() == "all" else [InequalityId.parse(args.ineq)]
    results, warnings, points = [], [], []
    code = EXIT_OK
    for ineq in ids:
        grid = _grid_from_args(args, ineq)
        rep = verify_inequality(ineq, grid, args.tol, threads=args.threads)
        results.append(_report_summary(rep))
        points.extend(_report_rows(rep))
        warnings.extend(rep.notes)
        if rep.flagged:
            warnings.append(f"{ineq.value}: {len(rep.flagged)} points flagged (evaluation failed)")
        if rep.violations:
            code = EXIT_VIOLATION
        log.info(rep.summary())
    params = {"ineq": args.ineq, "grid": args.grid, "tol": args.tol}
    return params, (points if args.format == "csv" else results), warnings, code


def cmd_constants(args):
    res = compute_cnun(args.nu, args.n)
    row = {"nu": res.nu, "n": res.n, "c_value": res.c_value, "argmax_x": res.argmax_x,
           "upper_cap": res.upper_cap}
    return {"nu": args.nu, "n": args.n}, [row], list(res.warnings), EXIT_OK


def cmd_tables(args):
    rows = reproduce_tables(args.nus, args.xs)
    out = [{"nu": r.nu, "x": r.x, "relerr_L": r.relerr_L, "relerr_U": r.relerr_U} for r in rows]
    return {"nus": args.nus, "xs": args.xs}, out, [], EXIT_OK


def cmd_conjecture(args):
    xs = args.xs or logspace(0.1, 50.0, 20)
    rep = explore_conjecture(args.nu, args.n, xs)
    results = [_report_summary(rep)]
    points = _report_rows(rep)
    warnings = list(rep.notes)
    if args.probe is not None:
        probe = probe_conjecture_optimality(args.nu, args.n, args.probe)
        results.append(_report_summary(probe))
        points += _report_rows(probe)
        warnings += probe.notes
    params = {"nu": args.nu, "n": args.n, "probe": args.probe}
    # exploratory: conjecture status never drives the exit code
    return params, (points if args.format == "csv" else results), warnings, EXIT_OK


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def render(fmt: str, command: str, params: dict, results: list, warnings: list) -> str:
    if fmt == "json":
        doc = {"command": command, "params": params, "results": results,
               "warnings": warnings, "version": __version__}
        return json.dumps(_clean(doc), indent=2, allow_nan=False) + "\n"
    if fmt == "csv":
        flat = [r for r in results if isinstance(r, dict)]
        if not flat:
            return ""
        header = []
        for r in flat:
            header += [k for k in r if k not in header and not isinstance(r[k], (list, dict))]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=header, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in flat:
            w.writerow({k: ("" if fmt_float(r.get(k)) is None else fmt_float(r.get(k))) for k in header})
        return buf.getvalue()
    return _render_human(command, results, warnings)


def _g(v):
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.10g}"
    return str(v)


def _render_human(command: str, results: list, warnings: list) -> str:
    lines = []
    if command in ("eval", "bounds"):
        for r in results:
            extra = "".join(f"  [{k}={r[k]}]" for k in ("side", "status") if k in r)
            lines.append(f"{_g(r['value'])}  (abs error <= {r['abs_error_bound']:.2g}){extra}")
    elif command == "tables":
        lines.append(f"{'nu':>6} {'x':>8} {'relerr_L':>10} {'relerr_U':>10}")
        for r in results:
            lines.append(f"{r['nu']:>6g} {r['x']:>8g} {r['relerr_L']:>10.4f} {r['relerr_U']:>10.4f}")
    elif command == "constants":
        for r in results:
            lines.append(f"C_(nu={r['nu']:g}, n={r['n']:g}) = {r['c_value']:.6f}  "
                         f"at x = {r['argmax_x']:.6g}  (cap {r['upper_cap']:g})")
    else:
        for r in results:
            tag = "EXPLORATORY " if r["exploratory"] else ""
            lines.append(f"{tag}{r['inequality']}: {r['points_checked']} points, "
                         f"{len(r['violations'])} violations, {len(r['flagged'])} flagged, "
                         f"min margin {_g(r['min_margin'])}")
            for v in r["violations"][:10]:
                lines.append(f"  violation nu={v['nu']:g} n={v['n']:g} gamma={v['gamma']:g} "
                             f"x={v['x']:.6g} margin={v['margin']:.3e}")
            if len(r["violations"]) > 10:
                lines.append(f"  ... {len(r['violations']) - 10} more")
            for t in r["tightness"][:6]:
                lines.append(f"  ratio bound/target at nu={t['nu']:g} n={t['n']:g} "
                             f"gamma={t['gamma']:g} x={t['x']:.4g}: {t['ratio']:.6f}")
    for w in warnings:
        lines.append(f"note: {w}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json", "csv"), default="human")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="besseline",
                                     description="Modified Bessel integrals, their bounds and checks.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a function or integral")
    esub = ev.add_subparsers(dest="what", required=True)
    b = esub.add_parser("bessel", parents=[common])
    b.add_argument("--kind", choices=("I", "K"), required=True)
    b.add_argument("--nu", type=float, required=True)
    b.add_argument("--x", type=float, required=True)
    b.add_argument("--scaled", action="store_true")
    g = esub.add_parser("gamma", parents=[common])
    g.add_argument("--u", type=float, required=True)
    h = esub.add_parser("hyp1f2", parents=[common])
    for name in ("a1", "b1", "b2", "z"):
        h.add_argument(f"--{name}", type=float, required=True)
    it = esub.add_parser("integral", parents=[common])
    it.add_argument("--family", choices=("I", "K"), required=True)
    it.add_argument("--nu", type=float, required=True)
    it.add_argument("--n", type=float, default=0.0)
    it.add_argument("--gamma", type=float, default=0.0)
    it.add_argument("--x", type=float, required=True)
    it.add_argument("--rel-tol", type=float, default=DEFAULT_REL_TOL)

    bd = sub.add_parser("bounds", parents=[common], help="evaluate one bound expression")
    bd.add_argument("--ineq", required=True, choices=[i.value for i in InequalityId], type=_ineq_arg)
    bd.add_argument("--nu", type=float, required=True)
    bd.add_argument("--n", type=float, default=0.0)
    bd.add_argument("--gamma", type=float, default=0.0)
    bd.add_argument("--x", type=float, required=True)
    bd.add_argument("--c", type=float, default=None, help="C_(nu,n) for BI7/BI8")

    vf = sub.add_parser("verify", parents=[common], help="check an inequality on a grid")
    vf.add_argument("--ineq", required=True, help="inequality id or 'all'")
    vf.add_argument("--grid", choices=("default", "quick"), default="default")
    vf.add_argument("--tol", type=float, default=DEFAULT_TOL)
    vf.add_argument("--nus", type=float_list)
    vf.add_argument("--ns", type=float_list)
    vf.add_argument("--gammas", type=float_list)
    vf.add_argument("--xs", type=log_range, help="lo:hi:num or comma list")
    vf.add_argument("--threads", type=int, default=None)

    cs = sub.add_parser("constants", help="supremum constants")
    csub = cs.add_subparsers(dest="which", required=True)
    cn = csub.add_parser("cnun", parents=[common])
    cn.add_argument("--nu", type=float, required=True)
    cn.add_argument("--n", type=float, default=0.0)

    tb = sub.add_parser("tables", help="relative error tables")
    tsub = tb.add_subparsers(dest="which", required=True)
    tc = tsub.add_parser("corollary", parents=[common])
    tc.add_argument("--nus", type=float_list, default=[1.0, 2.5, 5.0, 7.5, 10.0])
    tc.add_argument("--xs", type=float_list, default=[0.5, 5.0, 10.0, 25.0, 50.0, 100.0, 250.0])

    cj = sub.add_parser("conjecture", parents=[common], help="explore the conjectured K bound")
    cj.add_argument("--nu", type=float, required=True)
    cj.add_argument("--n", type=float, default=0.0)
    cj.add_argument("--xs", type=log_range)
    cj.add_argument("--probe", type=float, default=None, metavar="OFFSET",
                    help="also run the optimality probe with beta = alpha - OFFSET")
    return parser


def _ineq_arg(text: str) -> str:
    try:
        return InequalityId.parse(text).value
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


_HANDLERS = {"eval": cmd_eval, "bounds": cmd_bounds, "verify": cmd_verify,
             "constants": cmd_constants, "tables": cmd_tables, "conjecture": cmd_conjecture}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        params, results, warnings, code = _HANDLERS[args.command](args)
    except DomainError as exc:
        hyp = f" (failed hypothesis: {exc.hypothesis})" if exc.hypothesis else ""
        print(f"domain error: {exc}{hyp}", file=sys.stderr)
        return EXIT_DOMAIN
    except OverflowError as exc:
        print(f"overflow: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    text = render(args.format, args.command, params, results, warnings)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
