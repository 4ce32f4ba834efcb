"""Command-line entry point: ``rotwave <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .config import THREADS_ENV, Tolerances, default_threads, get_tolerances, override
from .errors import AccuracyError, DomainError

EXIT_OK, EXIT_DOMAIN, EXIT_ACCURACY, EXIT_FAILED, EXIT_USAGE = 0, 2, 3, 1, 64
_NOT_HASHED = {"output", "threads", "func"}


def num(x) -> str:
    """Locale-free 17-significant-digit text for a float."""
    return format(float(x), ".17g")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)) or obj is None or isinstance(obj, str):
        return bool(obj) if isinstance(obj, np.bool_) else obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return num(obj)
    if hasattr(obj, "value") and isinstance(obj.value, str):
        return obj.value
    return str(obj)


def config_hash(args) -> str:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_HASHED}
    text = json.dumps(_jsonable(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def metadata(args) -> dict:
    tol = get_tolerances()
    return {"version": __version__, "config_hash": config_hash(args),
            "tolerances": {"evaluation": num(tol.evaluation), "integral": num(tol.integral)}}


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def emit_json(args, result: dict):
    doc = {"metadata": metadata(args), "result": _jsonable(result)}
    _emit(args, json.dumps(doc, indent=2, sort_keys=False) + "\n")


def emit_rows(args, header, rows, extra: dict | None = None):
    """Rows as CSV (with '#' metadata lines) or as a JSON list of records."""
    if args.format == "json":
        result = dict(extra or {})
        result["rows"] = [dict(zip(header, r)) for r in rows]
        emit_json(args, result)
        return
    buf = io.StringIO()
    meta = metadata(args)
    buf.write(f"# version={meta['version']}\n# config_hash={meta['config_hash']}\n")
    buf.write(f"# tolerances=evaluation:{meta['tolerances']['evaluation']},"
              f"integral:{meta['tolerances']['integral']}\n")
    for key, val in (extra or {}).items():
        buf.write(f"# {key}={_jsonable(val)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([_jsonable(v) if not isinstance(v, (bool, np.bool_)) else str(bool(v)).lower()
                         for v in r])
    _emit(args, buf.getvalue())


# -- subcommands -----------------------------------------------------------

def cmd_zeros(args):
    from .specfun import bessel_j_zero_grid
    recs = bessel_j_zero_grid(args.nu, args.k_max, workers=args.threads)
    rows = [(r.order, r.rank, r.value, r.residual, r.guess_source.value) for r in recs]
    emit_rows(args, ["order", "rank", "value", "residual", "guess_source"], rows)


def cmd_iota(args):
    from .asymptotics import c1, f_of, iota
    emit_json(args, {"x": args.x, "iota": iota(args.x), "f": f_of(args.x), "c1": c1(args.x)})


def cmd_zeta(args):
    from .asymptotics import zeta, zeta_via_theta0
    fn = zeta_via_theta0 if args.method == "theta0" else zeta
    emit_json(args, {"x": args.x, "method": args.method, "zeta": fn(args.x)})


def cmd_x0(args):
    from .asymptotics import f_of, find_x0, zeta
    x0 = find_x0()
    emit_json(args, {"x0": x0, "f_x0": f_of(x0), "zeta_x0": zeta(x0)})


def cmd_expansion(args):
    from .asymptotics import expansion_residuals
    prof = expansion_residuals(args.x, args.k)
    rows = [(r.k, r.r0, r.r1, r.r2) for r in prof.residual_orders]
    extra = {"x": prof.x, "iota": prof.iota, "f": prof.f_value, "c1": prof.c1,
             "zeta": prof.zeta, "zeta_extrapolated": prof.zeta_extrapolated}
    emit_rows(args, ["k", "r0", "r1", "r2"], rows, extra)


def _sigma_json(s):
    return {"p": s.p, "q": s.q, "sigma": f"{s.p}/{s.q}", "alpha": s.alpha,
            "condition": s.condition.value,
            "conditions": sorted(c.value for c in s.conditions),
            "has_accumulation": s.has_accumulation}


def cmd_classify(args):
    from .spectrum import classify
    emit_json(args, _sigma_json(classify(args.p, args.q)))


def cmd_spectrum(args):
    from .spectrum import classify, enumerate_spectrum
    s = classify(args.p, args.q)
    table = enumerate_spectrum(s, args.L, args.K, workers=args.threads)
    rows = zip(table.l, table.k, table.zero, table.eigenvalue, table.gap_ratio, table.in_sigma_star)
    extra = {"alpha": s.alpha, "p": s.p, "q": s.q, "condition": s.condition.value}
    emit_rows(args, ["l", "k", "zero", "eigenvalue", "gap_ratio", "in_sigma_star"], rows, extra)


def cmd_gap(args):
    from .spectrum import classify, gap_scan
    s = classify(args.p, args.q)
    L = args.L if args.L is not None else math.ceil(s.p * args.K / s.q) + 2
    res = gap_scan(s, L, args.K, args.exclude_sigma_star)
    emit_json(args, {**_sigma_json(s), "L": L, "K": args.K,
                     "exclude_sigma_star": args.exclude_sigma_star, "c_min": res.c_min,
                     "argmin": {"l": res.argmin[0], "k": res.argmin[1]},
                     "structural_zeros": [list(x) for x in res.structural_zeros]})


def cmd_sigma_star(args):
    from .spectrum import classify, sigma_star_sequence
    s = classify(args.p, args.q)
    rows = [(l, k, ev) for k, l, ev in sigma_star_sequence(args.p, args.q, args.count)]
    emit_rows(args, ["l", "k", "eigenvalue"], rows,
              {"alpha": s.alpha, "p": s.p, "q": s.q, "condition": s.condition.value})


def cmd_accumulation(args):
    from .spectrum import accumulation_point, classify
    s = classify(args.p, args.q)
    emit_json(args, {**_sigma_json(s), "limit": accumulation_point(s.p, s.q),
                     "limit_corrected": accumulation_point(s.p, s.q, corrected=True)})


def cmd_groundstate(args):
    from .groundstate import build_galerkin, nehari_minimax, radial_solution
    model = build_galerkin((args.p, args.q), args.m, args.p_exponent, args.L, args.K)
    rep = nehari_minimax(model, seed=args.seed)
    _, beta = radial_solution(args.m, args.p_exponent)
    emit_json(args, {"alpha": model.alpha, "m": args.m, "p": args.p_exponent,
                     "c": rep.energy, "beta": beta, "nonradial": rep.energy < beta,
                     "is_radial": rep.is_radial, "residuals": rep.residuals,
                     "truncation": {"L": args.L, "K": args.K, "modes": model.size,
                                    "radial_nodes": len(model.quadrature.r),
                                    "angular_nodes": len(model.quadrature.theta)}})
    if args.coefficients:
        with open(args.coefficients, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["l", "k", "parity", "eigenvalue", "coefficient"])
            for (l, k, par, ev, _), c in zip(model.modes, rep.coefficients):
                w.writerow([l, k, par, num(ev), num(c)])


def cmd_verify_all(args):
    from .acceptance import run
    results = run(quick=args.quick, stream=sys.stderr)
    ok = all(r.passed for r in results if not r.skipped)
    emit_json(args, {"passed": ok, "criteria": [
        {"number": r.number, "title": r.title, "passed": r.passed, "skipped": r.skipped,
         "seconds": round(r.seconds, 1), "detail": r.detail} for r in results]})
    return EXIT_OK if ok else EXIT_FAILED


# -- parser ----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="json")
    common.add_argument("--threads", type=_positive_int, default=None,
                        help=f"worker threads (default: ${THREADS_ENV} or 1)")
    common.add_argument("--eval-tol", type=_positive_float, default=Tolerances.evaluation)
    common.add_argument("--integral-tol", type=_positive_float, default=Tolerances.integral)

    parser = _Parser(prog="rotwave", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("zeros", cmd_zeros, "zeros j_{nu,k} of J_nu")
    sp.add_argument("--nu", type=float, nargs="+", required=True)
    sp.add_argument("--k-max", type=_positive_int, required=True)
    sp = add("iota", cmd_iota, "iota(x), f(x) and c1(x)")
    sp.add_argument("--x", type=float, required=True)
    sp = add("zeta", cmd_zeta, "second-order constant zeta_x")
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--method", choices=("alternative", "theta0"), default="alternative")
    add("x0", cmd_x0, "root of x -> zeta_x")
    sp = add("expansion", cmd_expansion, "expansion residuals of j_{xk,k}/k")
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--k", type=_positive_int, nargs="+", default=[500, 1000, 2000])
    for name, func, help_ in (("classify", cmd_classify, "classify sigma = p/q"),
                              ("spectrum", cmd_spectrum, "enumerate the spectrum"),
                              ("gap", cmd_gap, "empirical gap constant"),
                              ("sigma-star", cmd_sigma_star, "eigenvalues along Sigma_*"),
                              ("accumulation", cmd_accumulation, "accumulation point"),
                              ("groundstate", cmd_groundstate, "ground-state energy")):
        sp = add(name, func, help_)
        # p = 0 or q = 0 is a domain error of the operation (exit 2), not a usage error
        sp.add_argument("p", type=int)
        sp.add_argument("q", type=int)
        if name == "spectrum":
            sp.add_argument("--L", type=_positive_int, default=512)
            sp.add_argument("--K", type=_positive_int, default=256)
        elif name == "gap":
            sp.add_argument("--L", type=_positive_int, default=None,
                            help="default: ceil(sigma K) + 2")
            sp.add_argument("--K", type=_positive_int, default=256)
            sp.add_argument("--exclude-sigma-star", action="store_true")
        elif name == "sigma-star":
            sp.add_argument("--count", type=_positive_int, default=20)
        elif name == "groundstate":
            sp.add_argument("--m", type=float, required=True)
            sp.add_argument("--p-exponent", type=float, default=3.0)
            sp.add_argument("--L", type=_positive_int, default=24)
            sp.add_argument("--K", type=_positive_int, default=24)
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--coefficients", help="also write the minimizer as CSV")
    sp = add("verify-all", cmd_verify_all, "run the acceptance criteria")
    sp.add_argument("--quick", action="store_true", help="skip the two slowest criteria")
    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = default_threads()
    try:
        with override(evaluation=args.eval_tol, integral=args.integral_tol):
            status = args.func(args)
    except DomainError as exc:
        print(f"rotwave: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except AccuracyError as exc:
        print(f"rotwave: accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    return EXIT_OK if status is None else status


def main():
    sys.exit(dispatch())
