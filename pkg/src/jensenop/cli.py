"""Command-line front end.

Usage::

    jensenop reproduce
    jensenop verify jensen --function "sin(x)" --interval 0 2pi --matrix A.json --vector x.json
    jensenop verify young --a 2 --b 1 --v 0.1
    jensenop verify operator-young --matrix-a A.json --matrix-b B.json --bounds 1 2 3 4 --v 0.5
    jensenop table young --a 2 --b 1 --v-steps 101 --format csv
    jensenop suite operator-young --seed 5 --trials 200
    jensenop scan sin-example

Exit codes: 0 every checked inequality holds, 1 an inequality is false or
evaluation failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys

from . import harness, jensen, matops, opyoung, young
from .errors import ConvergenceError, DomainError, ParseError, ValidationError
from .scalar_fn import (REGISTRY, Interval, convexifier, lipschitz_convexifier,
                        resolve_model, user_convexifier)

SEED_ENV = "JENSENOP_SEED"
REPRODUCE_TOL = 1e-6

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# formatting

def _fmt17(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _fmt6(x):
    if isinstance(x, bool):
        return "yes" if x else "NO"
    if isinstance(x, float):
        return format(x, ".6g")
    return str(x)


def write_csv(rows, out):
    if not rows:
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(list(rows[0]))
    for row in rows:
        writer.writerow([_fmt17(v) for v in row.values()])


def write_pretty_table(rows, out):
    if not rows:
        return
    header = list(rows[0])
    cells = [[_fmt6(v) for v in row.values()] for row in rows]
    widths = [max(len(h), *(len(c[i]) for c in cells)) for i, h in enumerate(header)]
    out.write("  ".join(h.rjust(w) for h, w in zip(header, widths)) + "\n")
    for c in cells:
        out.write("  ".join(v.rjust(w) for v, w in zip(c, widths)) + "\n")


def _pretty_mapping(d, out, indent=0):
    pad = " " * indent
    for key, value in d.items():
        if isinstance(value, dict):
            out.write(f"{pad}{key}:\n")
            _pretty_mapping(value, out, indent + 2)
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            out.write(f"{pad}{key}:\n")
            write_pretty_table(value, _Indented(out, indent + 2))
        else:
            out.write(f"{pad}{key}: {_fmt6(value)}\n")


class _Indented(io.TextIOBase):
    def __init__(self, out, indent):
        self.out, self.pad = out, " " * indent

    def write(self, s):
        self.out.write("".join(self.pad + line + "\n" for line in s.splitlines()))
        return len(s)


def emit(obj, fmt, out):
    """Write a mapping (or a list of row mappings) in the requested format."""
    if fmt == "json":
        out.write(json.dumps(obj, indent=2, default=harness._jsonable) + "\n")
    elif fmt == "csv":
        rows = obj if isinstance(obj, list) else [_flatten(obj)]
        write_csv(rows, out)
    elif isinstance(obj, list):
        write_pretty_table(obj, out)
    else:
        _pretty_mapping(obj, out)


def _flatten(d, prefix=""):
    flat = {}
    for key, value in d.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, name + "."))
        elif isinstance(value, list):
            for i, item in enumerate(value):
                if isinstance(item, dict):
                    flat.update(_flatten(item, f"{name}.{i}."))
                else:
                    flat[f"{name}.{i}"] = item
        else:
            flat[name] = value
    return flat


# ---------------------------------------------------------------------------
# argument helpers

_PI_TOKEN = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)?)\*?pi$")


def parse_real(token: str) -> float:
    """A decimal number, or a multiple of pi written like ``2pi`` / ``-pi``/ ``0.5pi``."""
    m = _PI_TOKEN.match(token.strip())
    if m:
        coeff = m.group(1)
        if coeff in ("", "+"):
            return math.pi
        if coeff == "-":
            return -math.pi
        return float(coeff) * math.pi
    try:
        return float(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {token!r}") from None


def _interval(values):
    if values is None:
        return None
    try:
        return Interval(*values)
    except ValidationError as exc:
        raise UsageError(str(exc)) from exc


def _load_matrix(path):
    try:
        return matops.load_matrix(path)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise UsageError(f"cannot load matrix {path}: {exc}") from exc


def _load_vector(path):
    try:
        return matops.load_vector(path)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise UsageError(f"cannot load vector {path}: {exc}") from exc


def _model(args):
    try:
        return resolve_model(args.function, _interval(args.interval))
    except (ParseError, ValidationError) as exc:
        raise UsageError(f"--function: {exc}") from exc


# ---------------------------------------------------------------------------
# commands

def reproduce_data():
    values = young.compare_bound_families()
    comparisons = {}
    for name, published in young.PUBLISHED_VALUES.items():
        computed = values[name]
        delta = abs(computed - published)
        comparisons[name] = {"computed": computed, "published": published,
                         "delta": delta, "ok": delta <= REPRODUCE_TOL}
    rows = jensen.sin_example_scan([i / 100 for i in range(101)])
    failing = [r.p for r in rows if not r.holds_classical]
    sin = {
        "grid_points": len(rows),
        "classical_failures": len(failing),
        "classical_fail_range": [min(failing), max(failing)] if failing else None,
        "classical_fails_at_0.75": any(r.p == 0.75 and not r.holds_classical for r in rows),
        "refined_holds_everywhere": all(r.holds_refined for r in rows),
    }
    ok = all(r["ok"] for r in comparisons.values()) and sin["refined_holds_everywhere"]
    return {"comparisons": comparisons, "sin_example": sin, "ok": ok}


def cmd_reproduce(args, out):
    data = reproduce_data()
    if args.format == "pretty":
        rows = [{"comparison": k, **v} for k, v in data["comparisons"].items()]
        write_pretty_table(rows, out)
        s = data["sin_example"]
        lo, hi = s["classical_fail_range"] or (None, None)
        out.write(
            f"\nsin example over {s['grid_points']} grid points: classical bound 0 fails "
            f"for p in [{lo}, {hi}] ({s['classical_failures']} points); refined bound "
            f"2 pi^2 p (1-p) holds everywhere: {_fmt6(s['refined_holds_everywhere'])}\n"
        )
        out.write(f"reproduced: {_fmt6(data['ok'])}\n")
    else:
        emit(data, args.format, out)
    return EXIT_OK if data["ok"] else EXIT_FAIL


def _alpha(args, model):
    if args.alpha is not None and args.lipschitz is not None:
        raise UsageError("--alpha and --lipschitz are mutually exclusive")
    if args.alpha is not None:
        return user_convexifier(args.alpha)
    if args.lipschitz is not None:
        try:
            return lipschitz_convexifier(args.lipschitz)
        except ValidationError as exc:
            raise UsageError(str(exc)) from exc
    return convexifier(model)


def cmd_verify_jensen(args, out):
    if not args.matrix:
        raise UsageError("verify jensen needs at least one --matrix")
    model = _model(args)
    conv = _alpha(args, model)
    As = [_load_matrix(p) for p in args.matrix]
    vectors = [_load_vector(p) for p in (args.vector or [])]
    rtol = args.tol if args.tol is not None else jensen.DEFAULT_RTOL
    if args.weights:
        if len(vectors) != 1:
            raise UsageError("weighted form takes exactly one --vector")
        rep = jensen.jensen_weighted(model, conv.alpha, As, args.weights, vectors[0], rtol)
    elif len(As) == 1 and len(vectors) == 1:
        rep = jensen.jensen_operator(model, conv.alpha, As[0], vectors[0], rtol)
    elif len(As) == len(vectors):
        rep = jensen.jensen_multi(model, conv.alpha, As, vectors, rtol)
    else:
        raise UsageError("give one --vector per --matrix, or --weights with a single --vector")
    data = rep.to_dict()
    data["convexifier_method"] = conv.method
    emit(data, args.format, out)
    return EXIT_OK if rep.holds_refined else EXIT_FAIL


def _contexts(args):
    for a in args.a:
        for b in args.b:
            for v in args.v:
                yield young.MeanContext(a, b, v)


def cmd_verify_young(args, out):
    rtol = args.tol if args.tol is not None else 1e-9
    reports = [(ctx, young.young_report(ctx, rtol)) for ctx in _contexts(args)]
    if args.format == "json":
        emit([{"a": c.a, "b": c.b, "v": c.v, **r.to_dict()} for c, r in reports], "json", out)
    else:
        rows = [young.bound_table_row(c, rtol) for c, _ in reports]
        (write_csv if args.format == "csv" else write_pretty_table)(rows, out)
    return EXIT_OK if all(r.holds for _, r in reports) else EXIT_FAIL


def cmd_verify_heinz(args, out):
    rtol = args.tol if args.tol is not None else 1e-9
    rows = [young.heinz_table_row(ctx, rtol) for ctx in _contexts(args)]
    emit(rows, args.format, out)
    return EXIT_OK if all(r["holds"] for r in rows) else EXIT_FAIL


def cmd_verify_operator_young(args, out):
    A = _load_matrix(args.matrix_a)
    B = _load_matrix(args.matrix_b)
    try:
        spec = opyoung.SandwichSpec(*args.bounds, condition=args.condition)
    except ValidationError as exc:
        raise UsageError(str(exc)) from exc
    if not 0.0 <= args.v <= 1.0:
        raise UsageError(f"--v must lie in [0, 1], got {args.v}")
    rep = opyoung.operator_young_check(A, B, args.v, spec)
    emit(rep.to_dict(), args.format, out)
    return EXIT_OK if rep.holds else EXIT_FAIL


def _v_grid(steps):
    if steps < 2:
        raise UsageError("--v-steps must be at least 2")
    return [i / (steps - 1) for i in range(steps)]


def cmd_table(args, out):
    rows = []
    for a in args.a:
        for b in args.b:
            for v in _v_grid(args.v_steps):
                ctx = young.MeanContext(a, b, v)
                rows.append(young.bound_table_row(ctx) if args.kind == "young"
                            else young.heinz_table_row(ctx))
    emit(rows, args.format, out)
    return EXIT_OK if all(r["holds"] for r in rows) else EXIT_FAIL


def cmd_suite(args, out):
    default_dims = (1, 8) if args.name in ("operator-young", "endpoint-scan") else (1, 20)
    dims = (args.dim_min or default_dims[0], args.dim_max or default_dims[1])
    seed = args.seed
    if seed is None:
        env = os.environ.get(SEED_ENV)
        try:
            seed = int(env) if env else 0
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    try:
        config = harness.RandomSpec(seed=seed, trials=args.trials, dim_range=dims)
    except ValidationError as exc:
        raise UsageError(str(exc)) from exc
    options = {}
    if args.function:
        if args.name not in ("jensen-operator", "jensen-equivalence", "pecaric-mitroi",
                             "expr-derivative"):
            raise UsageError(f"suite {args.name} does not take --function")
        if args.function not in REGISTRY:
            raise UsageError(f"--function for suites must be one of {sorted(REGISTRY)}")
        options["model"] = args.function
    if args.chain != "both":
        if args.name != "operator-young":
            raise UsageError("--chain applies to the operator-young suite only")
        options["chains"] = (args.chain,)
    report = harness.run_suite(args.name, config, **options)
    emit(report.to_dict(), args.format, out)
    return EXIT_OK if report.failures == 0 else EXIT_FAIL


def cmd_scan(args, out):
    steps = args.p_steps
    if steps < 2:
        raise UsageError("--p-steps must be at least 2")
    rows = [r._asdict() for r in jensen.sin_example_scan([i / (steps - 1) for i in range(steps)])]
    emit(rows, args.format, out)
    return EXIT_OK if all(r["holds_refined"] for r in rows) else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="pretty")
    common.add_argument("--tol", type=float, default=None, help="relative verdict tolerance")

    p = argparse.ArgumentParser(prog="jensenop", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    rp = sub.add_parser("reproduce", parents=[common], help="recompute the published values")
    rp.set_defaults(handler=cmd_reproduce)

    verify = sub.add_parser("verify", help="check one inequality on given inputs")
    vsub = verify.add_subparsers(dest="kind", required=True)

    vj = vsub.add_parser("jensen", parents=[common])
    vj.add_argument("--function", required=True, help=f"builtin {sorted(REGISTRY)} or expression")
    vj.add_argument("--interval", nargs=2, type=parse_real, metavar=("LO", "HI"))
    vj.add_argument("--matrix", action="append", help="JSON matrix file (repeatable)")
    vj.add_argument("--vector", action="append", help="JSON vector file (repeatable)")
    vj.add_argument("--weights", nargs="+", type=float)
    vj.add_argument("--alpha", type=float, help="user-supplied convexifier")
    vj.add_argument("--lipschitz", type=float, help="Lipschitz constant of f'")
    vj.set_defaults(handler=cmd_verify_jensen)

    for kind, handler in (("young", cmd_verify_young), ("heinz", cmd_verify_heinz)):
        vy = vsub.add_parser(kind, parents=[common])
        vy.add_argument("--a", nargs="+", type=float, required=True)
        vy.add_argument("--b", nargs="+", type=float, required=True)
        vy.add_argument("--v", nargs="+", type=float, required=True)
        vy.set_defaults(handler=handler)

    vo = vsub.add_parser("operator-young", parents=[common])
    vo.add_argument("--matrix-a", required=True)
    vo.add_argument("--matrix-b", required=True)
    vo.add_argument("--bounds", nargs=4, type=float, required=True,
                    metavar=("M_PRIME_LOW", "M_LOW", "M_HIGH", "M_PRIME_HIGH"),
                    help="m' m M M'")
    vo.add_argument("--condition", choices=("i", "ii"), default="i")
    vo.add_argument("--v", type=float, required=True)
    vo.set_defaults(handler=cmd_verify_operator_young)

    tb = sub.add_parser("table", parents=[common], help="bound table over an (a, b, v) grid")
    tb.add_argument("kind", choices=("young", "heinz"))
    tb.add_argument("--a", nargs="+", type=float, required=True)
    tb.add_argument("--b", nargs="+", type=float, required=True)
    tb.add_argument("--v-steps", type=int, default=101)
    tb.set_defaults(handler=cmd_table)

    st = sub.add_parser("suite", parents=[common], help="run a property suite")
    st.add_argument("name", choices=sorted(harness.SUITES))
    st.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
    st.add_argument("--trials", type=int, default=200)
    st.add_argument("--dim-min", type=int)
    st.add_argument("--dim-max", type=int)
    st.add_argument("--function", help="registry model for the Jensen suites")
    st.add_argument("--chain", choices=("forward", "reverse", "both"), default="both",
                    help="operator-young: which Loewner chain to check")
    st.set_defaults(handler=cmd_suite)

    sc = sub.add_parser("scan", parents=[common], help="parameter scans")
    sc.add_argument("kind", choices=("sin-example",))
    sc.add_argument("--p-steps", type=int, default=101)
    sc.set_defaults(handler=cmd_scan)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.handler(args, out)
    except UsageError as exc:
        print(f"jensenop: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, DomainError, ConvergenceError) as exc:
        print(f"jensenop: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
