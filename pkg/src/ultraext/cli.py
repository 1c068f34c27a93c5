"""Command-line front end.

Exit status: 0 success, 1 validation failure (witness printed to stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ValidationError
from .extension import extend, infer_factor, verify_extension
from .metric_core import SubsetSelection, path_metric, random_metric, validate_metric
from .textio import format_matrix, format_number, read_matrix, read_subset, write_matrix
from .tightness import optimal_extension, reproduce_tightness
from .ultrametric import subdominant_ultrametric, validate_ultrametric


class UsageError(Exception):
    pass


def _positive(kind):
    def parse(text):
        value = kind(text)
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ultraext", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a generated metric")
    kinds = gen.add_subparsers(dest="kind", required=True)
    p = kinds.add_parser("path", help="line metric |i-j|")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p = kinds.add_parser("random", help="random metric with entries in [1, 2]")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("subdominant", help="subdominant ultrametric of a metric")
    p.add_argument("-d", "--metric", required=True)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("extend", help="extend a subset ultrametric to the whole space")
    p.add_argument("-d", "--metric", required=True)
    p.add_argument("-s", "--subset", required=True)
    p.add_argument("-r", "--rho", required=True)
    p.add_argument("--D", type=float, default=None)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--report", action="store_true")

    p = sub.add_parser("verify", help="check the extension bounds for a given rhobar")
    p.add_argument("-d", "--metric", required=True)
    p.add_argument("-s", "--subset", required=True)
    p.add_argument("-r", "--rho", required=True)
    p.add_argument("-R", "--rhobar", required=True)
    p.add_argument("--D", type=float, required=True)

    p = sub.add_parser("tightness", help="construction vs oracle on the line instance")
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--resolution", type=_positive(float), default=1e-6)

    p = sub.add_parser("oracle", help="least achievable S x X distortion")
    p.add_argument("-d", "--metric", required=True)
    p.add_argument("-s", "--subset", required=True)
    p.add_argument("-r", "--rho", required=True)
    p.add_argument("--resolution", type=_positive(float), default=1e-6)
    return parser


def _load(args):
    space = validate_metric(read_matrix(args.metric))
    subset = SubsetSelection(tuple(read_subset(args.subset)), space.n)
    rho = validate_ultrametric(read_matrix(args.rho))
    return space, subset, rho


def _gen(args, out):
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    space = path_metric(args.n) if args.kind == "path" else random_metric(args.n, args.seed)
    write_matrix(args.output, space)
    return 0


def _subdominant(args, out):
    space = validate_metric(read_matrix(args.metric))
    write_matrix(args.output, subdominant_ultrametric(space))
    return 0


def _extend(args, out):
    space, subset, rho = _load(args)
    inferred = args.D is None
    D = infer_factor(space, subset, rho) if inferred else args.D
    rhobar = extend(space, subset, rho, D)
    write_matrix(args.output, rhobar)
    if args.report:
        out.write(verify_extension(space, subset, rho, rhobar, D, D_inferred=inferred).as_text())
    return 0


def _verify(args, out):
    space, subset, rho = _load(args)
    report = verify_extension(space, subset, rho, read_matrix(args.rhobar), args.D)
    out.write(report.as_text())
    return 0 if report.ok else 1


def _tightness(args, out):
    if args.D < 1:
        raise UsageError("--D must be a positive integer")
    res = reproduce_tightness(args.D, args.resolution)
    out.write(
        f"construction_distortion={format_number(res.construction_distortion)} "
        f"oracle_distortion={res.oracle.t:.6f} "
        f"chain_bound={format_number(res.chain_bound)}\n"
    )
    target = res.expected
    reproduced = (abs(res.construction_distortion - target) <= 1e-9
                  and abs(res.oracle.t - target) <= 2 * args.resolution
                  and res.chain_bound >= target - 1e-9)
    return 0 if reproduced else 1


def _oracle(args, out):
    space, subset, rho = _load(args)
    res = optimal_extension(space, subset, rho, args.resolution)
    out.write(f"t_opt={format_number(res.t)} c_opt={format_number(res.c)}\n")
    out.write(format_matrix(res.witness))
    return 0


COMMANDS = {
    "gen": _gen,
    "subdominant": _subdominant,
    "extend": _extend,
    "verify": _verify,
    "tightness": _tightness,
    "oracle": _oracle,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except (ValidationError, ValueError, IndexError, OSError) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1


def main():
    sys.exit(run())
