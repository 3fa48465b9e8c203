"""Command-line front end.

Every subcommand writes a versioned CSV (default) or JSON report.  Exit codes:
0 success, 2 argument error, 3 failed check.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from fractions import Fraction
from typing import Sequence

from . import REPORT_HEADER
from .arith import DEFAULT_SEGMENT_SIZE
from .errors import ArgumentError, CheckFailure

REPORT_TAG = REPORT_HEADER.lstrip("# ")


# ---------------------------------------------------------------------------
# output


def _cell(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return v


def _json_cell(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def render(command: str, rows: list[dict], fmt: str, summary: dict | None = None) -> str:
    if fmt == "json":
        rows_j = [{k: _json_cell(v) for k, v in r.items()} for r in rows]
        if len(rows_j) == 1 and summary is None:
            doc = {"report": REPORT_TAG, "command": command, **rows_j[0]}
        else:
            doc = {"report": REPORT_TAG, "command": command, "rows": rows_j}
            if summary:
                doc["summary"] = {k: _json_cell(v) for k, v in summary.items()}
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    buf.write(REPORT_HEADER + "\n")
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        keys = list(rows[0].keys())
        w.writerow(keys)
        for r in rows:
            w.writerow([_cell(r.get(k)) for k in keys])
    if summary:
        for k, v in summary.items():
            buf.write(f"# {k}={_cell(v)}\n")
    return buf.getvalue()


class Emitter:
    def __init__(self, args):
        self.args = args

    def __call__(self, command: str, rows: list[dict], summary: dict | None = None, default_fmt: str = "csv"):
        fmt = self.args.format or default_fmt
        text = render(command, rows, fmt, summary)
        if self.args.out:
            with open(self.args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _seconds(args, t0: float):
    return time.perf_counter() - t0 if args.timing else None


# ---------------------------------------------------------------------------
# subcommands


def _census_row(rep, seconds):
    return {
        "X": rep.X,
        "beta": rep.beta,
        "gamma": rep.gamma,
        "variant": rep.lambda_variant,
        "weight": rep.weight,
        "T0": rep.T0,
        "T1": rep.T1,
        "combined": rep.combined,
        "main_term": rep.main_term,
        "ratio": rep.ratio,
        "seconds": seconds,
    }


def cmd_census(args, emit):
    from .census import census_localized

    t0 = time.perf_counter()
    rep = census_localized(args.x, args.beta, args.gamma, args.variant, args.threads, args.segment_size)
    emit("census", [_census_row(rep, _seconds(args, t0))])
    return 0


def _weight_from_args(args):
    from .bernstein import discretize_F, f_weight_fn, peaks, plateau

    kind = args.weight
    if kind == "f":
        return f_weight_fn(args.nu1, args.nu2), 1.0
    if kind == "one":
        return f_weight_fn(1, 1), 1.0
    if kind == "plateau":
        return plateau(args.beta, args.gamma, args.eps, args.m), 1.0
    if kind in ("peak-beta", "peak-gamma"):
        fb, fg = peaks(args.beta, args.gamma, args.eps, args.m)
        return (fb if kind == "peak-beta" else fg), 1.0
    if kind == "discrete-plateau":
        disc = discretize_F(plateau(args.beta, args.gamma, args.eps, args.m), args.nu_prime)
        return disc.weight, disc.total
    raise ArgumentError(f"unknown weight {kind!r}")


def cmd_census_weighted(args, emit):
    from .census import census_weighted

    t0 = time.perf_counter()
    F, coef = _weight_from_args(args)
    rep = census_weighted(args.x, F, args.variant, coef, args.threads)
    row = _census_row(rep, _seconds(args, t0))
    row["t0_coefficient"] = rep.t0_coefficient
    emit("census-weighted", [row])
    return 0


def cmd_identity_check(args, emit):
    from .selberg import verify_identity

    err = verify_identity(args.nu1, args.nu2, args.x)
    ok = err <= args.tol
    emit("identity-check", [{"nu1": args.nu1, "nu2": args.nu2, "X": args.x, "max_abs_error": err,
                             "tolerance": args.tol, "ok": ok}])
    return 0 if ok else 3


def cmd_combinatorics_check(args, emit):
    from .selberg import combinatorics_report

    rows = combinatorics_report(args.numax)
    keys = ("nu1", "nu2", "k0", "enumerated", "printed_form", "gf_oracle", "agree", "printed_agrees")
    rows = [{k: r[k] for k in keys} for r in rows]
    bad = sum(not r["agree"] for r in rows)
    flagged = sum(not r["printed_agrees"] for r in rows)
    emit("combinatorics-check", rows, {"cells": len(rows), "oracle_disagreements": bad, "printed_form_flagged": flagged})
    return 0 if bad == 0 else 3


def cmd_inequality_suite(args, emit):
    from .selberg import inequality_suite

    rows = inequality_suite(args.numax, N=args.n_max)
    out = []
    for r in rows:
        out.append({
            "check": r["check"],
            "params": ";".join(f"{k}={r[k]}" for k in ("nu1", "nu2", "r", "z", "worst_N", "p", "nu") if k in r),
            "lhs": float(r["lhs"]),
            "rhs": float(r["rhs"]),
            "holds": r["holds"],
        })
    bad = sum(not r["holds"] for r in out)
    emit("inequality-suite", out, {"checks": len(out), "violations": bad})
    return 0 if bad == 0 else 3


def cmd_bernstein_plot(args, emit):
    import numpy as np

    from .bernstein import bernstein_approx

    F, _ = _weight_from_args(args)
    xs = np.linspace(0.0, 1.0, args.points)
    fx = np.asarray(F(xs), dtype=float)
    bx = bernstein_approx(F, args.degree, xs)
    rows = [{"x": float(x), "F": float(a), "B_m": float(b)} for x, a, b in zip(xs, fx, bx)]
    emit("bernstein-plot", rows)
    return 0


def cmd_eh_scan(args, emit):
    from .eh import eh_scan

    t0 = time.perf_counter()
    rep = eh_scan(args.x, args.delta, args.theta, args.per_modulus, args.threads)
    summary = {"X": rep.X, "delta": rep.delta, "theta": rep.theta_exponent, "moduli": rep.moduli,
               "sum": rep.sum, "normalized": rep.normalized, "digest": rep.digest,
               "seconds": _seconds(args, t0)}
    if args.per_modulus:
        rows = [{"d": d, "max_dev": m, "argmax_y": y} for d, m, y in rep.per_modulus]
        emit("eh-scan", rows, summary)
    else:
        emit("eh-scan", [summary])
    return 0


def cmd_remainder_sum(args, emit):
    from .eh import remainder_sum

    rep = remainder_sum(args.x, args.D, args.r, args.f)
    emit("remainder-sum", [{"X": rep.X, "D": rep.D, "r": rep.r, "f_kind": rep.f_kind, "value": rep.value}])
    return 0


def cmd_bounds(args, emit):
    from .bounds import BoundInputs, delta_for_epsilon, evaluate_bounds

    if args.epsilon is not None:
        ch = delta_for_epsilon(args.epsilon, args.nu)
        emit("bounds", [{"epsilon": ch.epsilon, "nu": ch.nu, "delta_max": ch.delta_max,
                               "log_delta_max": ch.log_delta_max, "log_X0": ch.log_X0}],
             default_fmt="json")
        return 0
    inp = BoundInputs(args.delta, args.nu1, args.nu2, args.c, args.A, args.Aprime, args.Delta, args.B, args.B0,
                      args.C0, args.log_x if args.log_x is not None else math.inf)
    emit("bounds", [evaluate_bounds(inp).as_dict()], default_fmt="json")
    return 0


def cmd_reference_sum(args, emit):
    from .census import reference_sum

    res = reference_sum(args.nu1, args.nu2, args.x)
    emit("reference-sum", [{"nu1": args.nu1, "nu2": args.nu2, "X": args.x, "lhs": res.sum, "main": res.main,
                            "ratio": res.ratio}])
    return 0


def cmd_twin_constant(args, emit):
    from .census import twin_constant

    tc = twin_constant(args.cutoff)
    emit("twin-constant", [{"value": tc.value, "prime_cutoff": tc.prime_cutoff, "tail_bound": tc.tail_bound}])
    return 0


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _positive_int(s: str) -> int:
    try:
        v = int(float(s)) if "e" in s.lower() else int(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from exc
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _add_weight_flags(p, default="plateau"):
    p.add_argument("--weight", default=default,
                   choices=["f", "one", "plateau", "peak-beta", "peak-gamma", "discrete-plateau"])
    p.add_argument("--nu1", type=int, default=1)
    p.add_argument("--nu2", type=int, default=1)
    p.add_argument("--beta", type=float, default=0.2)
    p.add_argument("--gamma", type=float, default=0.8)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--m", type=int, default=10, help="plateau smoothness")
    p.add_argument("--nu-prime", type=int, default=50)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default=None)
    common.add_argument("--out", default=None, help="write the report to this file")
    common.add_argument("--threads", type=_positive_int, default=None, help="worker threads (env THREADS)")
    common.add_argument("--segment-size", type=_positive_int, default=DEFAULT_SEGMENT_SIZE)
    common.add_argument("--timing", action="store_true", help="fill the seconds column (breaks byte-identity)")

    parser = _Parser(prog="sievelab", description="Asymptotic sieve verification laboratory")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("census", parents=[common], help="localized twin census")
    p.add_argument("--x", type=_positive_int, required=True)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--variant", choices=["vonmangoldt", "primes-only", "primes_only"], default="vonmangoldt")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("census-weighted", parents=[common], help="twin census with a smooth weight")
    p.add_argument("--x", type=_positive_int, required=True)
    p.add_argument("--variant", choices=["vonmangoldt", "primes-only", "primes_only"], default="vonmangoldt")
    _add_weight_flags(p, default="f")
    p.set_defaults(func=cmd_census_weighted)

    p = sub.add_parser("identity-check", parents=[common], help="verify the Möbius/log-power decomposition")
    p.add_argument("--nu1", type=_positive_int, required=True)
    p.add_argument("--nu2", type=_positive_int, required=True)
    p.add_argument("--x", type=_positive_int, default=2000)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_identity_check)

    p = sub.add_parser("combinatorics-check", parents=[common], help="coefficient sums against the oracle")
    p.add_argument("--numax", type=_positive_int, default=5)
    p.set_defaults(func=cmd_combinatorics_check)

    p = sub.add_parser("inequality-suite", parents=[common], help="coefficient and divisor-sum bounds")
    p.add_argument("--numax", type=_positive_int, default=5)
    p.add_argument("--n-max", type=_positive_int, default=10**6)
    p.set_defaults(func=cmd_inequality_suite)

    p = sub.add_parser("bernstein-plot", parents=[common], help="(x, F(x), B_m(F; x)) triples")
    _add_weight_flags(p)
    p.add_argument("--degree", type=_positive_int, default=100, help="Bernstein degree")
    p.add_argument("--points", type=_positive_int, default=201)
    p.set_defaults(func=cmd_bernstein_plot)

    p = sub.add_parser("eh-scan", parents=[common], help="progression discrepancy sum")
    p.add_argument("--x", type=_positive_int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--per-modulus", action="store_true")
    p.set_defaults(func=cmd_eh_scan)

    p = sub.add_parser("remainder-sum", parents=[common], help="divisor-weighted remainder sum")
    p.add_argument("--x", type=_positive_int, required=True)
    p.add_argument("--D", type=_positive_int, required=True)
    p.add_argument("--r", type=_positive_int, default=1)
    p.add_argument("--f", choices=["lambda-shift2", "lambda_shift2", "unit"], default="lambda-shift2")
    p.set_defaults(func=cmd_remainder_sum)

    p = sub.add_parser("bounds", parents=[common], help="explicit error-term bounds")
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--nu1", type=_positive_int, default=1)
    p.add_argument("--nu2", type=_positive_int, default=1)
    p.add_argument("--c", type=float, default=2.0)
    p.add_argument("--A", type=float, default=0.0)
    p.add_argument("--Aprime", type=float, default=0.0)
    p.add_argument("--Delta", type=float, default=0.0)
    p.add_argument("--B", type=float, default=0.0)
    p.add_argument("--B0", type=float, default=0.0)
    p.add_argument("--C0", type=float, default=0.0)
    p.add_argument("--log-x", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=None, help="report the admissible delta instead")
    p.add_argument("--nu", type=int, default=2)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("reference-sum", parents=[common], help="unweighted reference asymptotic")
    p.add_argument("--nu1", type=_positive_int, default=1)
    p.add_argument("--nu2", type=_positive_int, default=1)
    p.add_argument("--x", type=_positive_int, required=True)
    p.set_defaults(func=cmd_reference_sum)

    p = sub.add_parser("twin-constant", parents=[common], help="twin prime constant partial product")
    p.add_argument("--cutoff", type=_positive_int, default=10**7)
    p.set_defaults(func=cmd_twin_constant)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, Emitter(args))
    except ArgumentError as exc:
        print(f"sievelab: argument error: {exc}", file=sys.stderr)
        return 2
    except CheckFailure as exc:
        print(f"sievelab: check failed: {exc}", file=sys.stderr)
        return 3


run = main

if __name__ == "__main__":
    sys.exit(main())
