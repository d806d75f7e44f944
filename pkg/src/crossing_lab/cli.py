"""Command-line front end: density tables, expected-crossing quadrature,
closed asymptotics, the constant audit, Monte Carlo runs, and the
three-way comparison, with machine-readable JSON/CSV output.

Every float is rendered with 17 significant digits in both formats, so a
parsed JSON report reproduces the in-memory values exactly and rerunning
a command with the same flags and seed produces byte-identical output.

Exit codes: 0 success, 1 usage error, 2 numerical failure (an estimate
exists but missed its tolerance), 3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Optional

from . import __version__
from .asymptotics import (
    Regime,
    constant_audit,
    theorem_formula,
)
from .density import density_at, expected_crossings
from .model import CoefficientModel, DegenerateMoment
from .quadrature import ToleranceNotReached
from .montecarlo import (
    DEFAULT_INTERVALS,
    CountingMode,
    SimulationConfig,
    default_workers,
    estimate,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_INTERNAL = 3


def _fmt(v) -> str:
    """The one number-formatting rule: 17 significant digits."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "Infinity" if v > 0 else "-Infinity"
        if math.isnan(v):
            return "NaN"
        return format(v, ".17g")
    return str(v)


def _json_scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        # JSON has no Infinity literal; quote the rare non-finite values
        if math.isinf(v) or math.isnan(v):
            return f'"{_fmt(v)}"'
        return _fmt(v)
    if isinstance(v, int):
        return str(v)
    raise TypeError(f"unsupported scalar {type(v)}")


def _to_json(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  "{k}": {_to_json(v, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ",\n".join(f"{pad}  {_to_json(v, indent + 1)}" for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    return _json_scalar(obj)


def _emit(report: dict, fmt: str, out: Optional[str]) -> None:
    if fmt == "json":
        text = _to_json(report) + "\n"
    else:
        lines = []
        for block in report["data"]:
            rows = block["rows"]
            cols = list(rows[0].keys()) if rows else []
            lines.append(",".join(cols))
            for row in rows:
                lines.append(",".join(_fmt(row[c]) for c in cols))
            lines.append("")
        text = "\n".join(lines)
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(command: str, seed, blocks) -> dict:
    return {
        "meta": {"version": __version__, "command": command, "seed": seed},
        "data": blocks,
    }


def _model(args) -> CoefficientModel:
    return CoefficientModel.unit_increments(args.n, args.k)


def _cmd_density(args) -> tuple:
    if args.points < 2:
        raise ValueError("--points must be >= 2")
    if not args.x_min < args.x_max:
        raise ValueError("--x-min must be below --x-max")
    model = _model(args)
    rows = []
    step = (args.x_max - args.x_min) / (args.points - 1)
    for i in range(args.points):
        x = args.x_min + i * step
        s = density_at(model, x)
        rows.append({
            "x": s.x, "fn_value": s.fn_value, "g1": s.g1, "g2": s.g2,
            "g3": s.g3, "g4": s.g4, "g5": s.g5,
        })
    return [{"name": "density", "rows": rows}], None, EXIT_OK


def _interval_row(label: str, ic) -> dict:
    return {
        "interval": label, "a": ic.a, "b": ic.b, "expected": ic.expected,
        "abs_error_estimate": ic.abs_error_estimate, "converged": ic.converged,
    }


def _cmd_expect(args) -> tuple:
    model = _model(args)
    rows = []
    code = EXIT_OK
    if args.a is not None or args.b is not None:
        a = -math.inf if args.a is None else args.a
        b = math.inf if args.b is None else args.b
        ic = expected_crossings(model, a, b, args.tol)
        rows.append(_interval_row(f"({a}..{b})", ic))
        if not ic.converged:
            code = EXIT_NUMERICAL
    else:
        total = 0.0
        err = 0.0
        ok = True
        for a, b in DEFAULT_INTERVALS:
            ic = expected_crossings(model, a, b, args.tol / 4)
            rows.append(_interval_row(f"({a}..{b})", ic))
            total += ic.expected
            err += ic.abs_error_estimate
            ok = ok and ic.converged
        rows.append({
            "interval": "total", "a": -math.inf, "b": math.inf,
            "expected": total, "abs_error_estimate": err, "converged": ok,
        })
        if not ok:
            code = EXIT_NUMERICAL
    return [{"name": "expected_crossings", "rows": rows}], None, code


def _cmd_asym(args) -> tuple:
    regime = Regime.K_O_N14 if args.regime == "n14" else Regime.K_O_N12
    rep = theorem_formula(args.n, args.k, regime)
    if args.parity and regime is Regime.K_O_N14:
        from .asymptotics import C1_EVEN, C1_ODD
        c1 = C1_ODD if args.parity == "odd" else C1_EVEN
        c1_term = c1 / (args.n * math.pi)
        total = (rep.leading_log + rep.constant_term + rep.sqrt_correction
                 + rep.k2_coefficient + c1_term)
        rep = type(rep)(n=rep.n, k=rep.k, regime=rep.regime,
                        leading_log=rep.leading_log,
                        constant_term=rep.constant_term,
                        sqrt_correction=rep.sqrt_correction,
                        k2_coefficient=rep.k2_coefficient,
                        c1=c1, c1_term=c1_term, total=total)
    row = {
        "n": rep.n, "k": rep.k, "regime": rep.regime.value,
        "leading_log": rep.leading_log, "constant_term": rep.constant_term,
        "sqrt_correction": rep.sqrt_correction,
        "k2_coefficient": rep.k2_coefficient, "c1": rep.c1,
        "c1_term": rep.c1_term, "total": rep.total,
    }
    return [{"name": "asymptotic_report", "rows": [row]}], None, EXIT_OK


def _cmd_constants(args) -> tuple:
    rows = [{
        "name": r.name, "computed": r.computed, "reference": r.reference,
        "abs_diff": r.abs_diff, "status": r.status,
    } for r in constant_audit()]
    return [{"name": "constant_audit", "rows": rows}], None, EXIT_OK


def _mc_rows(rep) -> list:
    rows = []
    for (a, b), mean, se in zip(rep.intervals, rep.per_interval_mean,
                                rep.per_interval_stderr):
        rows.append({
            "interval": f"({a}..{b})", "a": a, "b": b,
            "mean": mean, "stderr": se,
        })
    rows.append({
        "interval": "total", "a": -math.inf, "b": math.inf,
        "mean": rep.total_mean, "stderr": rep.total_stderr,
    })
    return rows


def _cmd_mc(args) -> tuple:
    mode = (CountingMode.EXACT_STURM if args.mode == "sturm"
            else CountingMode.SIGN_SCAN)
    cfg = SimulationConfig(model=_model(args), trials=args.trials,
                           seed=args.seed, counting_mode=mode)
    rep = estimate(cfg, workers=args.workers or default_workers())
    blocks = [{"name": "simulation", "rows": _mc_rows(rep)}]
    return blocks, args.seed, EXIT_OK


def _cmd_compare(args) -> tuple:
    model = _model(args)
    code = EXIT_OK
    quad = expected_crossings(model, -math.inf, math.inf, args.tol)
    if not quad.converged:
        code = EXIT_NUMERICAL
    asym14 = theorem_formula(args.n, args.k, Regime.K_O_N14)
    asym12 = theorem_formula(args.n, args.k, Regime.K_O_N12)
    cfg = SimulationConfig(model=model, trials=args.trials, seed=args.seed)
    mc = estimate(cfg, workers=args.workers or default_workers())
    within = abs(quad.expected - mc.total_mean) <= 3.0 * mc.total_stderr
    rows = [
        {"quantity": "quadrature_total", "value": quad.expected,
         "detail": quad.abs_error_estimate},
        {"quantity": "asymptotic_total_n14", "value": asym14.total,
         "detail": 0.0},
        {"quantity": "asymptotic_total_n12", "value": asym12.total,
         "detail": 0.0},
        {"quantity": "mc_total", "value": mc.total_mean,
         "detail": mc.total_stderr},
        {"quantity": "abs_diff_quad_mc",
         "value": abs(quad.expected - mc.total_mean), "detail": 0.0},
        {"quantity": "abs_diff_quad_asym_n14",
         "value": abs(quad.expected - asym14.total), "detail": 0.0},
        {"quantity": "verdict_within_3_sigma", "value": 1.0 if within else 0.0,
         "detail": 3.0 * mc.total_stderr},
    ]
    blocks = [{"name": "compare", "rows": rows}]
    if args.emit_curves:
        xs = [-2.0 + 4.0 * i / 400 for i in range(401)]
        density_rows = [{"x": x, "fn_value": density_at(model, x).fn_value}
                        for x in xs]
        blocks.append({"name": "density_curve", "rows": density_rows})
        growth_rows = []
        m = 2
        while m <= args.n:
            ic = expected_crossings(
                CoefficientModel.unit_increments(m, args.k),
                -math.inf, math.inf, args.tol)
            growth_rows.append({"n": m, "expected": ic.expected})
            m *= 2
        blocks.append({"name": "growth_curve", "rows": growth_rows})
    return blocks, args.seed, code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="crossing-lab",
                description="Expected real solutions of a Brownian-"
                            "coefficient random polynomial against a line")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="write output to this path")
    sub = p.add_subparsers(dest="command", required=True,
                           parser_class=lambda **kw: _Parser(parents=[common], **kw))

    def add_nk(q):
        q.add_argument("--n", type=int, required=True, help="degree")
        q.add_argument("--k", type=float, default=0.0, help="line slope")

    q = sub.add_parser("density", help="tabulate the crossing density")
    add_nk(q)
    q.add_argument("--x-min", type=float, default=-2.0)
    q.add_argument("--x-max", type=float, default=2.0)
    q.add_argument("--points", type=int, default=101)
    q.set_defaults(handler=_cmd_density)

    q = sub.add_parser("expect", help="expected crossings by quadrature")
    add_nk(q)
    q.add_argument("--a", type=float, default=None)
    q.add_argument("--b", type=float, default=None)
    q.add_argument("--tol", type=float, default=1e-8)
    q.set_defaults(handler=_cmd_expect)

    q = sub.add_parser("asym", help="closed asymptotic formula")
    add_nk(q)
    q.add_argument("--regime", choices=("n14", "n12"), default="n14")
    q.add_argument("--parity", choices=("odd", "even"), default=None,
                   help="override the parity constant selection")
    q.set_defaults(handler=_cmd_asym)

    q = sub.add_parser("constants", help="audit the universal constants")
    q.set_defaults(handler=_cmd_constants)

    q = sub.add_parser("mc", help="Monte Carlo with exact root counting")
    add_nk(q)
    q.add_argument("--trials", type=int, required=True)
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--mode", choices=("sturm", "scan"), default="sturm")
    q.add_argument("--workers", type=int, default=None)
    q.set_defaults(handler=_cmd_mc)

    q = sub.add_parser("compare", help="quadrature vs asymptotics vs MC")
    add_nk(q)
    q.add_argument("--trials", type=int, required=True)
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--tol", type=float, default=1e-7)
    q.add_argument("--workers", type=int, default=None)
    q.add_argument("--emit-curves", action="store_true")
    q.set_defaults(handler=_cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        blocks, seed, code = args.handler(args)
    except (_UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateMoment, ToleranceNotReached) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ArithmeticError as exc:
        print(f"internal invariant breach: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    _emit(_report(args.command, seed, blocks), args.format, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
