"""Command-line front end.

Subcommands: eval, verify, associate, laplace, decompose, diagnose.
Exit codes: 0 pass, 1 quantitative failure, 2 usage/parse/numeric error.
Defaults for --tol and --rule-size may come from SONINE_TOL and
SONINE_RULE_SIZE; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence, TextIO

import numpy as np

from . import conv, diagnostics, laplace, series
from .errors import ParseError, SonineError
from .kernels import Series, SoninePair, to_frac_series
from .kernelspec import parse_kernel, parse_pair

__all__ = ["main", "build_parser", "RunConfig"]

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2

# Per-command t ranges used when --tmin/--tmax are absent.
T_RANGES = {
    "eval": (1e-3, 10.0),
    "verify": (1e-3, 10.0),
    "associate": (1e-2, 0.5),
    "decompose": (0.1, 5.0),
}
DEFAULT_POINTS = 30
DEFAULT_P_RANGE = (0.1, 100.0)
DECOMPOSE_TOL = 1e-5


class UsageError(SonineError):
    """Inconsistent command-line options."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved options shared by all subcommands."""

    tolerance: float = conv.DEFAULT_TOL
    rule_size: int = conv.DEFAULT_RULE_SIZE
    output: str = "csv"
    tmin: float = 1e-3
    tmax: float = 10.0
    points: int = DEFAULT_POINTS
    pmin: float = DEFAULT_P_RANGE[0]
    pmax: float = DEFAULT_P_RANGE[1]

    @property
    def ts(self) -> np.ndarray:
        return _grid(self.tmin, self.tmax, self.points, "t")

    @property
    def ps(self) -> np.ndarray:
        return _grid(self.pmin, self.pmax, self.points, "p")


def _grid(lo: float, hi: float, n: int, name: str) -> np.ndarray:
    if not (0 < lo <= hi) or n < 1:
        raise UsageError(f"invalid {name}-range [{lo}, {hi}] with {n} points")
    if lo == hi:
        return np.array([lo])
    return np.geomspace(lo, hi, n)


def _env(name: str, cast, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except ValueError as exc:
        raise UsageError(f"environment variable {name}={raw!r} is not valid") from exc


def resolve_config(args: argparse.Namespace, tol_default: Optional[float] = None) -> RunConfig:
    """Flags over environment variables over built-in defaults."""
    tol = args.tol if args.tol is not None else _env("SONINE_TOL", float, None)
    if tol is None:
        tol = tol_default if tol_default is not None else conv.DEFAULT_TOL
    rule = args.rule_size if args.rule_size is not None else _env(
        "SONINE_RULE_SIZE", int, conv.DEFAULT_RULE_SIZE
    )
    tmin_d, tmax_d = T_RANGES.get(args.command, T_RANGES["eval"])
    return RunConfig(
        tolerance=float(tol),
        rule_size=int(rule),
        output=args.out,
        tmin=args.tmin if args.tmin is not None else tmin_d,
        tmax=args.tmax if args.tmax is not None else tmax_d,
        points=args.points,
        pmin=args.pmin if args.pmin is not None else DEFAULT_P_RANGE[0],
        pmax=args.pmax if args.pmax is not None else DEFAULT_P_RANGE[1],
    )


def _num(x: float) -> str:
    return format(float(x), ".17g")


def _cell(v):
    # integers (series indices) print as integers, everything else as 17-digit floats
    return v if isinstance(v, int) else float(v)


def _write_table(out: TextIO, fmt: str, header: Sequence[str], rows) -> None:
    if fmt == "csv":
        out.write(",".join(header) + "\n")
        for row in rows:
            cells = (str(c) if isinstance(c, int) else _num(c) for c in map(_cell, row))
            out.write(",".join(cells) + "\n")
    else:
        for row in rows:
            out.write(json.dumps(dict(zip(header, map(_cell, row)))) + "\n")


def _write_summary(out: TextIO, err: TextIO, fmt: str, report: conv.ResidualReport, label: str) -> None:
    summary = {
        "check": label,
        "max_abs_residual": report.max_abs_residual,
        "tolerance": report.tolerance,
        "passed": report.passed,
    }
    if fmt == "jsonl":
        out.write(json.dumps(summary) + "\n")
    else:
        verdict = "passed" if report.passed else "FAILED"
        err.write(
            f"{label}: max |residual| = {report.max_abs_residual!r}, "
            f"tol = {report.tolerance!r}: {verdict}\n"
        )


def _pair_from_args(args: argparse.Namespace) -> SoninePair:
    if args.pair is not None:
        if args.g is not None or args.f is not None:
            raise UsageError("use either --pair or --g/--f, not both")
        return parse_pair(args.pair)
    if args.g is None or args.f is None:
        raise UsageError("give --pair NAME or both --g SPEC and --f SPEC")
    return SoninePair(parse_kernel(args.g), parse_kernel(args.f), f"{args.g} / {args.f}")


def cmd_eval(args, out: TextIO, err: TextIO) -> int:
    k = parse_kernel(args.kernel)
    cfg = resolve_config(args)
    ts = cfg.ts
    vals = np.atleast_1d(k(ts))
    _write_table(out, cfg.output, ("t", "value"), zip(ts, vals))
    return EXIT_PASS


def cmd_verify(args, out: TextIO, err: TextIO) -> int:
    pair = _pair_from_args(args)
    cfg = resolve_config(args)
    report = conv.sonine_residual(pair, cfg.ts, cfg.rule_size, cfg.tolerance)
    _write_table(out, cfg.output, ("t", "residual"), ((t, r) for t, _, r in report.points))
    _write_summary(out, err, cfg.output, report, "sonine")
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_associate(args, out: TextIO, err: TextIO) -> int:
    g = parse_kernel(args.g)
    cfg = resolve_config(args)
    result = series.associate_series(to_frac_series(g, args.order), args.order)
    rows = [(n, b) for n, b in enumerate(result.f.coeffs)]
    _write_table(out, cfg.output, ("n", "b_n"), rows)
    if not args.check:
        return EXIT_PASS
    pair = SoninePair(g, Series(result.f), f"{args.g} / associate")
    report = conv.sonine_residual(pair, cfg.ts, cfg.rule_size, cfg.tolerance)
    if cfg.output == "csv":
        out.write("\n")
    _write_table(out, cfg.output, ("t", "residual"), ((t, r) for t, _, r in report.points))
    _write_summary(out, err, cfg.output, report, "sonine")
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_laplace(args, out: TextIO, err: TextIO) -> int:
    pair = _pair_from_args(args)
    cfg = resolve_config(args)
    grid = laplace.TransformGrid(tuple(cfg.ps))
    report = laplace.laplace_sonine_residual(pair, grid, cfg.tolerance, cfg.rule_size)
    _write_table(out, cfg.output, ("p", "residual"), ((p, r) for p, _, r in report.points))
    _write_summary(out, err, cfg.output, report, "laplace")
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_decompose(args, out: TextIO, err: TextIO) -> int:
    g = parse_kernel(args.kernel)
    cfg = resolve_config(args, tol_default=DECOMPOSE_TOL)
    dec = laplace.ns_decompose(g, cfg.ts, rule_size=cfg.rule_size, tol=cfg.tolerance)
    if cfg.output == "jsonl":
        out.write(json.dumps({"a": dec.a}) + "\n")
    else:
        err.write(f"a = {dec.a!r}\n")
    _write_table(out, cfg.output, ("t", "phi"), dec.phi_samples)
    report = dec.verification
    _write_summary(out, err, cfg.output, report, "decomposition")
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_diagnose(args, out: TextIO, err: TextIO) -> int:
    k = parse_kernel(args.kernel)
    rep = diagnostics.diagnose(k, max_order=args.order if args.order is not None else 6)
    lines = [
        {
            "check": "cm",
            "max_order": rep.cm.max_order_checked,
            "first_violation": list(rep.cm.first_violation) if rep.cm.first_violation else None,
            "passed": rep.cm.passed,
        },
        {
            "check": "singularity",
            "grows_unboundedly": rep.singularity.grows_unboundedly,
            "t_times_k_to_zero": rep.singularity.t_times_k_to_zero,
            "passed": rep.singularity.passed,
        },
        {
            "check": "rv_index",
            "value": rep.rv_index,
            "passed": rep.rv_index is not None and -1.0 < rep.rv_index < 0.0,
        },
        {"check": "overall", "kernel": k.spec(), "passed": rep.passed},
    ]
    for line in lines:
        out.write(json.dumps(line) + "\n")
    return EXIT_PASS if rep.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tmin", type=float)
    common.add_argument("--tmax", type=float)
    common.add_argument("--points", type=int, default=DEFAULT_POINTS)
    common.add_argument("--pmin", type=float)
    common.add_argument("--pmax", type=float)
    common.add_argument("--tol", type=float, help="tolerance (env SONINE_TOL, default 1e-6)")
    common.add_argument("--rule-size", type=int, help="quadrature nodes (env SONINE_RULE_SIZE, default 64)")
    common.add_argument("--order", type=int, help="series order (associate) or CM order (diagnose)")
    common.add_argument("--out", choices=("csv", "jsonl"), default="csv")
    common.add_argument("--check", action="store_true", help="associate: also verify the residual")

    parser = argparse.ArgumentParser(
        prog="sonine", description="Construct, evaluate and verify Sonine kernel pairs."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="tabulate a kernel")
    p.add_argument("--kernel", required=True)
    p.set_defaults(func=cmd_eval)

    for name, func, helptext in (
        ("verify", cmd_verify, "check (g*f)(t) = 1"),
        ("laplace", cmd_laplace, "check p g~(p) f~(p) = 1"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--pair")
        p.add_argument("--g")
        p.add_argument("--f")
        p.set_defaults(func=func)

    p = sub.add_parser("associate", parents=[common], help="series coefficients of the associate")
    p.add_argument("--g", required=True)
    p.set_defaults(func=cmd_associate)

    p = sub.add_parser("decompose", parents=[common], help="split a bounded kernel as a g + g*phi = 1")
    p.add_argument("--kernel", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("diagnose", parents=[common], help="CM, singularity and rv-index checks")
    p.add_argument("--kernel", required=True)
    p.set_defaults(func=cmd_diagnose)
    return parser


def main(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_PASS
    if args.command == "associate" and args.order is None:
        args.order = series.DEFAULT_ORDER
    try:
        return args.func(args, out, err)
    except ParseError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR
    except (SonineError, ValueError, ArithmeticError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
