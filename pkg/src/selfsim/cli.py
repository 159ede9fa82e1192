"""``selfsim`` command-line interface.

Exit codes: 0 success, 2 validation failure, 3 parse or usage error,
4 capacity exceeded.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from pathlib import Path

from . import holder, presets
from .errors import (
    AllCellsFlat,
    CapacityExceeded,
    InvalidParams,
    NotContinuous,
    ParseError,
    UnsupportedOrientation,
    UnsupportedPreset,
)
from .evaluator import eval_point, iterate
from .params import check_continuity, check_contraction, continuity_residuals, load_params
from .plot import PlotSpec, plot_params

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_CAPACITY = 0, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _source_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--preset", help="preset expression, e.g. 'takagi(4,1/4)'")
    g.add_argument("--params", help="JSON parameter file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="selfsim", description="Affine self-similar functions and their Hölder exponents")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check contraction and continuity conditions")
    _source_args(p)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")

    p = sub.add_parser("eval", help="evaluate f at points or on a grid")
    _source_args(p)
    p.add_argument("x", nargs="*", type=float)
    p.add_argument("--grid", type=int, metavar="L")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--format", choices=("csv",), default="csv")
    p.add_argument("--out")

    p = sub.add_parser("grid", help="emit grid values on A_L as CSV")
    _source_args(p)
    p.add_argument("--level", type=int, default=8)
    p.add_argument("--format", choices=("csv",), default="csv")
    p.add_argument("--out")

    p = sub.add_parser("holder", help="closed-form Hölder exponent report")
    _source_args(p)
    p.add_argument("--empirical", type=int, metavar="L")
    p.add_argument("--refine", type=int, default=4)
    p.add_argument("--format", choices=("json",), default="json")
    p.add_argument("--out")

    p = sub.add_parser("estimate", help="empirical exponent from cell oscillations")
    _source_args(p)
    p.add_argument("--level", type=int, default=8)
    p.add_argument("--refine", type=int, default=4)
    p.add_argument("--measure", choices=("osc", "endpoint"), default="osc")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")

    p = sub.add_parser("bound", help="seminorm lower bounds and the geometric upper bound")
    _source_args(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--level", type=int, default=8)
    p.add_argument("--format", choices=("json",), default="json")
    p.add_argument("--out")

    p = sub.add_parser("plot", help="render the graph as SVG")
    _source_args(p)
    p.add_argument("--level", type=int)
    p.add_argument("--width", type=int, default=800)
    p.add_argument("--height", type=int, default=600)
    p.add_argument("--stroke", type=float, default=1.5)
    p.add_argument("--overlay", action="store_true", help="overlay the closed form when one is known")
    p.add_argument("--format", choices=("svg",), default="svg")
    p.add_argument("--out")

    p = sub.add_parser("presets", help="list available presets")
    p.add_argument("action", nargs="?", choices=("list",), default="list")
    p.add_argument("--out")
    return parser


def _load(args):
    if args.preset is not None:
        return presets.make(args.preset), args.preset
    return load_params(args.params), None


def _json(data) -> str:
    return json.dumps(data, indent=2, allow_nan=False) + "\n"


def _finite(x):
    return x if math.isfinite(x) else None


def cmd_validate(args):
    p, _ = _load(args)
    ok, md = check_contraction(p)
    verdict = check_continuity(p, args.tol)
    if args.format == "json":
        text = _json({
            "contraction": {"passed": ok, "max_abs_d": md},
            "continuity": {
                "passed": verdict.passed,
                "residuals": [
                    {"equation": v.equation, "k": v.k, "residual": v.residual}
                    for v in continuity_residuals(p)
                ],
                "violations": [
                    {"equation": v.equation, "k": v.k, "residual": v.residual} for v in verdict.violations
                ],
            },
        })
    else:
        lines = [f"contraction: {'ok' if ok else 'FAIL'} (max|d| = {md!r})"]
        lines.append(f"continuity: {'ok' if verdict.passed else 'FAIL'}")
        for v in verdict.violations:
            where = f" k={v.k}" if v.k is not None else ""
            lines.append(f"  eq ({v.equation}){where}: residual {v.residual!r}")
        text = "\n".join(lines) + "\n"
    return text, (EXIT_OK if verdict.passed else EXIT_INVALID)


def cmd_grid(args, level=None):
    p, _ = _load(args)
    return iterate(p, args.level if level is None else level).to_csv(), EXIT_OK


def cmd_eval(args):
    if args.grid is not None:
        return cmd_grid(args, level=args.grid)
    p, _ = _load(args)
    if not args.x:
        raise UsageError("eval needs points x or --grid L")
    buf = io.StringIO()
    buf.write("x,f,error_bound\n")
    for x in args.x:
        value, err = eval_point(p, x, args.tol)
        buf.write(f"{x!r},{value!r},{err!r}\n")
    return buf.getvalue(), EXIT_OK


def cmd_holder(args):
    p, _ = _load(args)
    report = holder.analytic_exponent(p)
    data = report.to_dict()
    if args.empirical is not None:
        try:
            est = holder.empirical_exponent(p, args.empirical, args.refine)
            data["empirical"] = {"alpha_hat": est.alpha_hat, "per_level": list(est.per_level)}
        except AllCellsFlat:
            data["empirical"] = {"alpha_hat": 1.0, "per_level": [], "note": "all cells flat"}
    return _json(data), EXIT_OK


def cmd_estimate(args):
    p, _ = _load(args)
    if args.format == "csv":
        return holder.oscillation_table(p, args.level, args.refine, args.measure).to_csv(), EXIT_OK
    try:
        est = holder.empirical_exponent(p, args.level, args.refine, args.measure)
        data = {"alpha_hat": est.alpha_hat, "per_level": list(est.per_level)}
    except AllCellsFlat:
        data = {"alpha_hat": 1.0, "per_level": [], "note": "all cells flat"}
    data.update({"level": args.level, "refine": args.refine, "measure": args.measure})
    return _json(data), EXIT_OK


def cmd_bound(args):
    p, _ = _load(args)
    b = holder.bound_inputs(p, args.alpha)
    profile = holder.seminorm_profile(p, args.alpha, args.level)
    upper = holder.seminorm_upper_bound(p, args.alpha)
    data = {
        "alpha": args.alpha,
        "inputs": {"q": b.q, "c": b.c, "a": b.a, "normC": b.normC},
        "seminorm_lower": profile[1:],
        "rhs": [_finite(holder.seminorm_upper_rhs(b, args.alpha, N)) for N in range(1, args.level + 1)],
        "upper_bound": _finite(upper),
    }
    return _json(data), EXIT_OK


def cmd_plot(args):
    p, expr = _load(args)
    spec = PlotSpec(width=args.width, height=args.height, level=args.level, stroke=args.stroke, overlay=args.overlay)
    reference = None
    if expr is not None and presets.reference_value(expr, 0.0) is not None:
        reference = lambda x: presets.reference_value(expr, x)  # noqa: E731
    return plot_params(p, spec, reference), EXIT_OK


def cmd_presets(args):
    return "\n".join(presets.describe_presets()) + "\n", EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "eval": cmd_eval,
    "grid": cmd_grid,
    "holder": cmd_holder,
    "estimate": cmd_estimate,
    "bound": cmd_bound,
    "plot": cmd_plot,
    "presets": cmd_presets,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        text, code = COMMANDS[args.command](args)
    except (UsageError, ParseError, UnsupportedPreset) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PARSE
    except CapacityExceeded as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CAPACITY
    except NotContinuous as exc:
        print(f"error: {exc}", file=stderr)
        for v in exc.violations:
            print(f"  eq ({v.equation}) k={v.k}: residual {v.residual!r}", file=stderr)
        return EXIT_INVALID
    except (InvalidParams, UnsupportedOrientation) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PARSE
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
