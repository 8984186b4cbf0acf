"""Command-line front end.

One subcommand per library operation, stable exit codes for scripting:

    0  pass / success
    1  fail (certified violation, non-representable fit, failed bound)
    2  inconclusive or partial result
    3  usage or I/O error

Every run on codes 0-2 writes a JSON report (stdout or --out) echoing the
resolved parameter set; --no-meta strips the timestamp so identical runs
produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys

from . import bernstein, builtins as handles, classify, funcops, moments, webster
from .errors import BudgetExceededError, CertificationError, CmtkError, DomainError, NotRepresentableError
from .scalars import parse_scalar, scalar_to_json
from .seqcore import Sequence, read_sequence
from .newton import eval_series, series_from_samples

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _floats(text):
    return [float(parse_scalar(tok)) for tok in text.split(",") if tok.strip()]


def _verdict_code(verdict):
    return {
        classify.PASS: EXIT_PASS,
        classify.FAIL: EXIT_FAIL,
        classify.INCONCLUSIVE: EXIT_INCONCLUSIVE,
    }[verdict]


def _load_sequence(args) -> Sequence:
    return read_sequence(args.input, mode=args.mode)


def _get_handle(spec: str):
    if spec.startswith("triplet:"):
        path = spec.partition(":")[2]
        with open(path, "r", encoding="utf-8") as fh:
            t = bernstein.BernsteinTriplet.from_dict(json.load(fh))
        return bernstein.triplet_handle(t, name=f"triplet:{path}")
    return handles.get_handle(spec)


# -- subcommand implementations; each returns (exit_code, result_dict) ------

def _cmd_certify(args):
    seq = _load_sequence(args)
    cert = classify.certify(seq, args.kind, args.depth)
    return _verdict_code(cert.verdict), {"certificate": cert.to_dict()}


def _cmd_minimal(args):
    seq = _load_sequence(args)
    try:
        rep = classify.is_minimal(seq, args.kind, args.depth, args.tol)
    except CertificationError as exc:
        return EXIT_FAIL, {
            "error": str(exc),
            "certificate": exc.certificate.to_dict() if exc.certificate else None,
        }
    code = EXIT_PASS if rep.minimal else EXIT_FAIL
    return code, {"minimality": rep.to_dict()}


def _cmd_invert(args):
    seq = _load_sequence(args)
    try:
        if args.variant == "cm":
            model, fit = moments.invert_cm(seq, args.grid, args.tol)
        else:
            model, fit = moments.invert_ca(seq, args.grid, args.tol)
    except (CertificationError, NotRepresentableError) as exc:
        result = {"error": str(exc)}
        if isinstance(exc, CertificationError) and exc.certificate:
            result["certificate"] = exc.certificate.to_dict()
        return EXIT_FAIL, result
    return EXIT_PASS, {"model": model.to_dict(), "fit": fit.to_dict()}


def _cmd_evaluate(args):
    with open(args.input, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if "levy" in data:
        t = bernstein.BernsteinTriplet.from_dict(data)
        values = [[lam, bernstein.eval_bernstein(t, lam)] for lam in args.at]
    elif "q" in data or "d" in data:
        t = moments.CATriplet.from_dict(data)
        values = [[lam, moments.evaluate(t, lam)] for lam in args.at]
    else:
        m = moments.DiscreteMeasure.from_dict(data)
        values = [[lam, moments.evaluate(m, lam)] for lam in args.at]
    return EXIT_PASS, {"values": values}


def _cmd_extend(args):
    seq = _load_sequence(args)
    try:
        f = moments.extend_from_integer_samples(seq, args.kind, args.grid, args.tol)
    except (CertificationError, NotRepresentableError) as exc:
        result = {"error": str(exc)}
        if isinstance(exc, CertificationError) and exc.certificate:
            result["certificate"] = exc.certificate.to_dict()
        return EXIT_FAIL, result
    return EXIT_PASS, {
        "values": [[lam, f(lam)] for lam in args.at],
        "fit": f.report.to_dict(),
        "model": f.model.to_dict(),
    }


def _cmd_newton(args):
    seq = _load_sequence(args)
    series = series_from_samples(seq)
    if args.action == "fit":
        return EXIT_PASS, {"series": series.to_dict()}
    z = parse_scalar(args.at)
    out = eval_series(series, z, args.terms)
    return EXIT_PASS, {
        "value": scalar_to_json(out.value),
        "value_float": float(out.value),
        "tail_estimate": out.tail_estimate,
        "n_terms": out.n_terms,
        "warnings": list(out.warnings),
    }


def _cmd_webster(args):
    g = handles.get_webster_g(args.g)
    problem = webster.WebsterProblem(
        g,
        n_terms=args.terms,
        acceleration="none" if args.no_accel else "aitken",
        g_limit_one=args.g_limit_one or args.g == "exp-neg-cm",
    )
    solution = webster.WebsterSolution(problem)
    results = [solution.result(x) for x in args.at]
    residual = None
    if args.check_grid:
        residual = webster.verify_functional_equation(solution, g, args.check_grid)
    out = {"solutions": [r.to_dict() for r in results]}
    if residual is not None:
        out["functional_equation_residual"] = residual
    return EXIT_PASS, out


def _cmd_operator(args):
    f = _get_handle(args.builtin)
    composed = funcops.apply_operator(f, args.op, args.c[0], args.iterate)
    return EXIT_PASS, {"values": [[x, composed(x)] for x in args.at]}


def _cmd_decompose(args):
    f = _get_handle(args.builtin)
    try:
        if args.variant == "cm":
            rep = funcops.cm_limit_decompose(f, tuple(args.c), args.nmax)
        else:
            rep = funcops.bf_limit_decompose(f, tuple(args.c), args.nmax)
    except DomainError as exc:
        return EXIT_FAIL, {"error": str(exc)}
    return EXIT_PASS, {"decomposition": rep.to_dict()}


def _cmd_lattice(args):
    f = _get_handle(args.builtin)
    rep = funcops.lattice_check(f, args.kind, args.alpha, args.depth, args.tol)
    if rep.partial:
        code = EXIT_INCONCLUSIVE
    elif rep.overall_pass:
        code = EXIT_PASS
    else:
        code = EXIT_FAIL
    return code, {"lattice": rep.to_dict()}


def _cmd_subaffine(args):
    f = _get_handle(args.builtin)
    rep = funcops.subaffine_check(f, args.c[0], args.bound)
    return (EXIT_PASS if rep.ok else EXIT_FAIL), {"subaffine": rep.to_dict()}


def _cmd_bftheta(args):
    f = _get_handle(args.builtin)
    rep = bernstein.check_bf_via_theta(f, tuple(args.c), args.depth)
    if rep.overall_pass:
        code = EXIT_PASS
    elif any(e.certificate.failed for e in rep.entries):
        code = EXIT_FAIL
    else:
        code = EXIT_INCONCLUSIVE
    return code, {"theta_check": rep.to_dict()}


def _cmd_selfdec(args):
    f = _get_handle(args.builtin)
    rep = bernstein.check_selfdecomposable(f, tuple(args.c), args.depth, args.tol)
    return _verdict_code(rep.verdict), {"selfdecomposable": rep.to_dict()}


def _cmd_egf(args):
    seq = _load_sequence(args)
    try:
        triplet, fit = moments.invert_ca(seq, args.grid, args.tol)
    except (CertificationError, NotRepresentableError) as exc:
        return EXIT_FAIL, {"error": str(exc)}
    residual = bernstein.egf_validate(seq, triplet)
    return EXIT_PASS, {
        "egf_residual": residual,
        "fit": fit.to_dict(),
        "model": triplet.to_dict(),
    }


def build_parser() -> _Parser:
    p = _Parser(prog="cmtk", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, seq=False, kind=False, grid=False, c_default=None):
        sp.add_argument("--out", help="write the JSON report to this path")
        sp.add_argument("--no-meta", action="store_true",
                        help="omit timestamps for byte-identical reports")
        if seq:
            sp.add_argument("input", help="sequence file (CSV or JSON array)")
            sp.add_argument("--mode", choices=["exact", "float"], default=None)
        if kind:
            sp.add_argument("--kind", choices=[classify.CM, classify.CA], required=True)
        if grid:
            sp.add_argument("--grid", type=int, default=moments.DEFAULT_GRID)
            sp.add_argument("--tol", type=float, default=moments.DEFAULT_TOL)
        if c_default is not None:
            sp.add_argument("--c", type=_floats, default=list(c_default))

    sp = sub.add_parser("certify", help="CM/CA sign certification")
    common(sp, seq=True, kind=True)
    sp.add_argument("--depth", type=int, default=None)
    sp.set_defaults(fn=_cmd_certify)

    sp = sub.add_parser("minimal", help="atom-at-zero / minimality check")
    common(sp, seq=True, kind=True)
    sp.add_argument("--depth", type=int, default=None)
    sp.add_argument("--tol", type=float, default=None)
    sp.set_defaults(fn=_cmd_minimal)

    sp = sub.add_parser("invert", help="moment inversion")
    sp.add_argument("variant", choices=["cm", "ca"])
    common(sp, seq=True, grid=True)
    sp.set_defaults(fn=_cmd_invert)

    sp = sub.add_parser("evaluate", help="evaluate a measure/triplet JSON file")
    sp.add_argument("input", help="model JSON file")
    sp.add_argument("--at", type=_floats, required=True)
    common(sp)
    sp.set_defaults(fn=_cmd_evaluate)

    sp = sub.add_parser("extend", help="unique CM/BF interpolant of integer samples")
    common(sp, seq=True, kind=True, grid=True)
    sp.add_argument("--at", type=_floats, required=True)
    sp.set_defaults(fn=_cmd_extend)

    sp = sub.add_parser("newton", help="Gregory-Newton series")
    sp.add_argument("action", choices=["fit", "eval"])
    common(sp, seq=True)
    sp.add_argument("--at", default="0.5", help="evaluation point (eval only)")
    sp.add_argument("--terms", type=int, default=None)
    sp.set_defaults(fn=_cmd_newton)

    sp = sub.add_parser("webster", help="solve f(x+1) = g(x) f(x), f(1) = 1")
    common(sp)
    sp.add_argument("--g", default="identity",
                    help="identity | constant:<c> | exp-neg-cm")
    sp.add_argument("--at", type=_floats, default=[0.5])
    sp.add_argument("--terms", type=int, default=webster.DEFAULT_N)
    sp.add_argument("--no-accel", action="store_true")
    sp.add_argument("--g-limit-one", action="store_true")
    sp.add_argument("--check-grid", type=_floats, default=None,
                    help="verify the functional equation on these x")
    sp.set_defaults(fn=_cmd_webster)

    sp = sub.add_parser("operator", help="apply sigma/tau/delta/theta/rho")
    common(sp, c_default=(1.0,))
    sp.add_argument("--builtin", required=True)
    sp.add_argument("--op", choices=["sigma", "tau", "delta", "theta", "rho"],
                    required=True)
    sp.add_argument("--iterate", type=int, default=1)
    sp.add_argument("--at", type=_floats, required=True)
    sp.set_defaults(fn=_cmd_operator)

    sp = sub.add_parser("decompose", help="limit decompositions")
    sp.add_argument("variant", choices=["cm", "bf"])
    common(sp, c_default=funcops.DEFAULT_C_PAIR)
    sp.add_argument("--builtin", required=True)
    sp.add_argument("--nmax", type=int, default=64)
    sp.set_defaults(fn=_cmd_decompose)

    sp = sub.add_parser("lattice", help="CM/CA certification on lattices")
    common(sp, kind=True)
    sp.add_argument("--builtin", required=True)
    sp.add_argument("--alpha", type=_floats, default=[1.0, 0.5])
    sp.add_argument("--depth", type=int, default=20)
    sp.add_argument("--tol", type=float, default=None)
    sp.set_defaults(fn=_cmd_lattice)

    sp = sub.add_parser("subaffine", help="bounded-increment check")
    common(sp, c_default=(1.0,))
    sp.add_argument("--builtin", required=True)
    sp.add_argument("--bound", type=float, required=True)
    sp.set_defaults(fn=_cmd_subaffine)

    sp = sub.add_parser("bftheta", help="Bernstein membership via theta")
    common(sp, c_default=bernstein.DEFAULT_THETA_CS)
    sp.add_argument("--builtin", required=True)
    sp.add_argument("--depth", type=int, default=15)
    sp.set_defaults(fn=_cmd_bftheta)

    sp = sub.add_parser("selfdec", help="self-decomposability suite")
    common(sp, c_default=bernstein.DEFAULT_SD_CS)
    sp.add_argument("--builtin", required=True)
    sp.add_argument("--depth", type=int, default=30)
    sp.add_argument("--tol", type=float, default=None)
    sp.set_defaults(fn=_cmd_selfdec)

    sp = sub.add_parser("egf", help="EGF identity residual for a CA fit")
    common(sp, seq=True, grid=True)
    sp.set_defaults(fn=_cmd_egf)

    return p


def _resolved_params(args):
    skip = {"fn", "out", "no_meta", "command"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        out[key] = value
    return out


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE

    try:
        code, result = args.fn(args)
    except (OSError, json.JSONDecodeError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"partial: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except CmtkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL

    report = {
        "command": args.command,
        "params": _resolved_params(args),
        "result": result,
        "exit_code": code,
    }
    if not args.no_meta:
        report["meta"] = {
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat()
        }
    text = json.dumps(report, sort_keys=True, indent=2, default=scalar_to_json)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
