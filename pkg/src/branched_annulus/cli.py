"""Command-line entry point: ``branched-annulus {analyze,render,verify}``.

Exit codes: 0 success, 1 malformed input, 2 repeated roots,
3 numerical failure or failed invariant check, 4 filesystem error.
"""
from __future__ import annotations

import argparse
import glob
import json
import os
import sys

from ._validation import check_coefficients, check_roots
from .checks import step_halving_check
from .errors import InputError, NumericalError, RepeatedRootsError
from .estimator import BranchedAnnulus
from .poly import TOL_CV, TOL_SEP
from .render import collect_drawing_traces, default_config, render_annulus_complex, render_branched_annulus, render_cacti
from .report import SCHEMA_VERSION, build_report, dumps

EXIT_OK, EXIT_INPUT, EXIT_REPEATED, EXIT_NUMERIC, EXIT_FS = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code, self.kind, self.message = code, kind, message


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_INPUT, "UsageError", message)


def _pair(x, what):
    if isinstance(x, bool):
        raise InputError(f"{what}: expected a number or [re, im]")
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
        return complex(x[0], x[1])
    raise InputError(f"{what}: expected a number or [re, im], got {x!r}")


def parse_polynomial(doc):
    if not isinstance(doc, dict):
        raise InputError("input must be a JSON object")
    if "coefficients" in doc:
        cs = doc["coefficients"]
        if not isinstance(cs, list):
            raise InputError("coefficients must be a list")
        return check_coefficients([_pair(c, "coefficients") for c in cs])
    if "roots" in doc and "leading" in doc:
        rs = doc["roots"]
        if not isinstance(rs, list):
            raise InputError("roots must be a list")
        return check_roots(_pair(doc["leading"], "leading"), [_pair(r, "roots") for r in rs])
    raise InputError('input needs "coefficients" or both "leading" and "roots"')


def _read_input(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise CliError(EXIT_FS, "FileError", str(exc)) from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INPUT, "MalformedJSON", str(exc)) from exc
    return parse_polynomial(doc)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_FS, "FileError", str(exc)) from exc


def _fit(args, p) -> BranchedAnnulus:
    return BranchedAnnulus(tol_sep=args.tol_sep, tol_cv=args.tol_cv).fit(p)


def cmd_analyze(args) -> int:
    est = _fit(args, _read_input(args.input))
    report = build_report(est)
    _write(args.out, dumps(report))
    return EXIT_OK if report["status"] == "pass" else EXIT_NUMERIC


def cmd_render(args) -> int:
    p = _read_input(args.input)
    est = BranchedAnnulus(tol_sep=args.tol_sep, tol_cv=args.tol_cv, monodromy=False, merge_oracle=False).fit(p)
    cvl = est.critical_data_.critical_values
    cfg = default_config(cvl, samples_per_curve=args.samples)
    if args.what == "annulus":
        svg = render_annulus_complex(est.cells_, cvl, cfg)
    else:
        traces = collect_drawing_traces(est.polynomial_, est.roots_, est.critical_data_, est.cells_, cfg, est.policy_)
        svg = render_branched_annulus(traces, cfg) if args.what == "branched" else render_cacti(traces, cfg)
    _write(args.out, svg)
    return EXIT_OK


def _verify_one(args, path: str) -> dict:
    try:
        est = _fit(args, _read_input(path))
    except CliError as exc:
        return {"input": path, "status": "error", "error": {"type": exc.kind, "message": exc.message}, "code": exc.code}
    except (InputError, RepeatedRootsError, NumericalError) as exc:
        return {"input": path, "status": "error", "error": _error_body(exc), "code": _code_of(exc)}
    checks = list(est.checks_)
    if args.deep:
        checks.append(step_halving_check(est))
    status = "pass" if all(c.status != "fail" for c in checks) else "fail"
    return {"input": path, "status": status,
            "checks": [{"name": c.name, "status": c.status, "detail": c.detail} for c in checks]}


def cmd_verify(args) -> int:
    paths = list(args.inputs)
    if args.dir:
        if not os.path.isdir(args.dir):
            raise CliError(EXIT_FS, "FileError", f"not a directory: {args.dir}")
        paths += sorted(glob.glob(os.path.join(args.dir, "*.json")))
    if not paths:
        raise CliError(EXIT_INPUT, "UsageError", "verify needs an input file or --dir")
    results = [_verify_one(args, path) for path in paths]
    codes = [r.pop("code") for r in results if "code" in r]
    _write(args.out, dumps({"schema_version": SCHEMA_VERSION, "results": results}))
    if codes:
        return max(codes)
    return EXIT_OK if all(r["status"] == "pass" for r in results) else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="branched-annulus", description="Branched annulus invariants of complex polynomials.")
    common = _Parser(add_help=False)
    common.add_argument("--tol-sep", type=float, default=TOL_SEP, help="minimum root separation")
    common.add_argument("--tol-cv", type=float, default=TOL_CV, help="minimum critical-value modulus")
    common.add_argument("--seed-free", action="store_true", help="reserved; the pipeline uses no randomness")
    common.add_argument("--samples", type=int, default=512, help="samples per drawn curve")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", parents=[common], help="full analysis report as JSON")
    a.add_argument("input", help='JSON file ("-" for stdin)')
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("render", parents=[common], help="SVG drawing")
    r.add_argument("input")
    r.add_argument("--what", choices=["annulus", "branched", "cacti"], default="branched")
    r.set_defaults(func=cmd_render)

    v = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    v.add_argument("inputs", nargs="*")
    v.add_argument("--deep", action="store_true", help="also rerun at half the step size")
    v.add_argument("--dir", default=None, help="verify every *.json file in a directory")
    v.set_defaults(func=cmd_verify)
    return parser


def _error_body(exc: Exception) -> dict:
    msg = "distinct roots required" if isinstance(exc, RepeatedRootsError) else str(exc)
    return {"type": type(exc).__name__, "message": msg, "detail": str(exc)}


def _code_of(exc: Exception) -> int:
    if isinstance(exc, RepeatedRootsError):
        return EXIT_REPEATED
    if isinstance(exc, InputError):
        return EXIT_INPUT
    return EXIT_NUMERIC


def _fail(code: int, body: dict) -> int:
    sys.stdout.write(json.dumps({"error": body}, sort_keys=True) + "\n")
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.samples < 2:
            raise CliError(EXIT_INPUT, "UsageError", "--samples must be at least 2")
        return args.func(args)
    except CliError as exc:
        return _fail(exc.code, {"type": exc.kind, "message": exc.message})
    except (InputError, RepeatedRootsError, NumericalError) as exc:
        return _fail(_code_of(exc), _error_body(exc))


if __name__ == "__main__":
    sys.exit(main())
