"""Command-line front end.

Every numeric input and output is an exact rational "p/q"; the --decimal
flag adds 15-significant-digit decimal renderings, clearly labelled
approximate.  Commands are deterministic: repeated runs produce
byte-identical output.

Exit codes: 0 success, 2 usage, 3 partition not built far enough,
4 tolerance unreachable, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from .errors import NotYetCovered, ToleranceExhausted
from .functions import (
    CoefficientSource,
    FiniteSupport,
    SaturatedFunction,
    eval_f1,
    parse_mu_spec,
    shift_to_ball,
)
from .partition import SplittingPartition, build_partition, load, saves
from .rationals import Interval, format_rational, parse_rational
from .stress import run_subgradient, trajectory_csv
from .verifier import certify_saturation

EXIT_USAGE = 2
EXIT_NOT_YET_COVERED = 3
EXIT_TOLERANCE = 4
EXIT_IO = 5


@dataclass(frozen=True)
class Config:
    """Parsed and validated inputs of one CLI invocation.

    Defaults: tol 1/1000000, K the largest index with a nonzero
    coefficient, d the length of the point, x0 the domain box center.
    """

    partition: SplittingPartition | None = None
    mu: CoefficientSource | None = None
    d: int = 1
    point: tuple[Fraction, ...] | None = None
    x0: tuple[Fraction, ...] | None = None
    tol: Fraction = Fraction(1, 10**6)
    K: int | None = None
    decimal: bool = False

    def function(self) -> SaturatedFunction:
        return SaturatedFunction(self.partition, self.mu, self.d, x0=self.x0)

    def truncation(self) -> int:
        if self.K is not None:
            return self.K
        if isinstance(self.mu, FiniteSupport):
            return self.mu.max_index
        raise ValueError("--K is required for generator coefficient sources")


def _parse_point(text: str) -> tuple[Fraction, ...]:
    return tuple(parse_rational(part) for part in text.split(","))


def _parse_window(text: str) -> Interval:
    lo_text, sep, hi_text = text.partition(",")
    if not sep:
        raise ValueError(f"bad window {text!r}; expected lo,hi")
    return Interval.closed(parse_rational(lo_text), parse_rational(hi_text))


def _decimal_text(value: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = 15
        return str(Decimal(value.numerator) / Decimal(value.denominator))


def _print_bound(lo: Fraction, hi: Fraction, decimal: bool) -> None:
    print(f"{format_rational(lo)} {format_rational(hi)}")
    if decimal:
        print(f"approx {_decimal_text(lo)} {_decimal_text(hi)}")


def _positive_tol(text: str) -> Fraction:
    tol = parse_rational(text)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    return tol


def cmd_build(args) -> int:
    partition = build_partition(args.stages, parse_rational(args.gap_cap))
    text = saves(partition)
    with open(args.out, "w", encoding="ascii") as fh:
        fh.write(text)
    print(f"wrote {args.out}: {partition.stage_count} stages")
    return 0


def cmd_eval(args) -> int:
    config = Config(
        partition=load(args.partition),
        mu=parse_mu_spec(args.mu),
        point=_parse_point(args.x),
        x0=_parse_point(args.x0) if args.x0 else None,
        tol=_positive_tol(args.tol),
        decimal=args.decimal,
    )
    config = _with_dimension(config, len(config.point))
    bound = config.function().eval(config.point, config.tol)
    _print_bound(bound.lo, bound.hi, config.decimal)
    return 0


def cmd_certify(args) -> int:
    config = Config(
        partition=load(args.partition),
        mu=parse_mu_spec(args.mu),
        point=_parse_point(args.point),
        x0=_parse_point(args.x0) if args.x0 else None,
        K=args.K,
        decimal=args.decimal,
    )
    config = _with_dimension(config, len(config.point))
    sf = config.function()
    if args.shift:
        if not args.shift_radius:
            raise ValueError("--shift requires --shift-radius")
        sf = shift_to_ball(sf, _parse_point(args.shift), parse_rational(args.shift_radius))
    certificate = certify_saturation(
        sf, config.point, parse_rational(args.radius), config.truncation()
    )
    if not certificate.check():
        raise AssertionError("certificate failed its own replay check")
    print(certificate.render())
    return 0


def cmd_measure(args) -> int:
    partition = load(args.partition)
    if args.k < 0:
        raise ValueError("member index must be >= 0")
    bound = partition.measure_in(args.k, _parse_window(args.window), _positive_tol(args.tol))
    _print_bound(bound.lo, bound.hi, args.decimal)
    return 0


def cmd_stress(args) -> int:
    config = Config(
        partition=load(args.partition),
        mu=parse_mu_spec(args.mu),
        point=_parse_point(args.x_init) if args.x_init else None,
        K=args.K,
    )
    config = _with_dimension(config, len(config.point) if config.point else 1)
    sf = config.function()
    start = config.point if config.point else sf.x0
    trajectory = run_subgradient(
        sf, start, args.steps, parse_rational(args.step_c)
    )
    text = trajectory_csv(
        sf, trajectory, parse_rational(args.radius), config.truncation()
    )
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
        print(f"wrote {args.out}: {len(trajectory)} points")
    else:
        print(text, end="")
    return 0


def cmd_plot(args) -> int:
    if args.grid < 1:
        raise ValueError("grid must request at least one point")
    partition = load(args.partition)
    x0 = parse_rational(args.x0)
    tol = _positive_tol(args.tol)
    lines = ["x,f_lo,f_hi"]
    for i in range(1, args.grid + 1):
        x = Fraction(i, args.grid + 1)
        bound = eval_f1(partition, args.k, x0, x, tol)
        lines.append(
            f"{format_rational(x)},{format_rational(bound.lo)},{format_rational(bound.hi)}"
        )
    text = "\n".join(lines) + "\n"
    with open(args.out, "w", encoding="ascii") as fh:
        fh.write(text)
    print(f"wrote {args.out}: {args.grid} grid points")
    return 0


def _with_dimension(config: Config, d: int) -> Config:
    if config.x0 is not None and len(config.x0) != d:
        raise ValueError("x0 must match the point's dimension")
    return Config(
        partition=config.partition,
        mu=config.mu,
        d=d,
        point=config.point,
        x0=config.x0,
        tol=config.tol,
        K=config.K,
        decimal=config.decimal,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clarkesat",
        description=(
            "Build splitting partitions, evaluate Clarke-saturated functions"
            " with certified rational bounds, and emit machine-checkable"
            " certificates."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build a partition and write a SPLITPART v1 file")
    p_build.add_argument("--stages", type=int, required=True)
    p_build.add_argument("--gap-cap", default="1/1")
    p_build.add_argument("--out", required=True)
    p_build.set_defaults(run=cmd_build)

    p_eval = sub.add_parser("eval", help="certified value bound at a point")
    p_eval.add_argument("--partition", required=True)
    p_eval.add_argument("--mu", required=True, help='e.g. "0:1/1" or "ones"')
    p_eval.add_argument("--x", required=True, help="comma-separated p/q coordinates")
    p_eval.add_argument("--x0", default=None)
    p_eval.add_argument("--tol", default="1/1000000")
    p_eval.add_argument("--decimal", action="store_true")
    p_eval.set_defaults(run=cmd_eval)

    p_cert = sub.add_parser("certify", help="saturation certificate at a point")
    p_cert.add_argument("--partition", required=True)
    p_cert.add_argument("--mu", required=True)
    p_cert.add_argument("--point", required=True)
    p_cert.add_argument("--radius", required=True)
    p_cert.add_argument("--K", type=int, default=None)
    p_cert.add_argument("--x0", default=None)
    p_cert.add_argument("--shift", default=None, help="affine part center p")
    p_cert.add_argument("--shift-radius", default=None, help="ball radius r for --shift")
    p_cert.add_argument("--decimal", action="store_true")
    p_cert.set_defaults(run=cmd_certify)

    p_measure = sub.add_parser("measure", help="certified member measure in a window")
    p_measure.add_argument("--partition", required=True)
    p_measure.add_argument("--k", type=int, required=True)
    p_measure.add_argument("--window", required=True, help="lo,hi as p/q")
    p_measure.add_argument("--tol", default="1/1024")
    p_measure.add_argument("--decimal", action="store_true")
    p_measure.set_defaults(run=cmd_measure)

    p_stress = sub.add_parser("stress", help="subgradient stress demo trajectory")
    p_stress.add_argument("--partition", required=True)
    p_stress.add_argument("--mu", required=True)
    p_stress.add_argument("--steps", type=int, required=True)
    p_stress.add_argument("--x-init", default=None)
    p_stress.add_argument("--step-c", default="1/10")
    p_stress.add_argument("--radius", default="1/4")
    p_stress.add_argument("--K", type=int, default=None)
    p_stress.add_argument("--out", default=None)
    p_stress.set_defaults(run=cmd_stress)

    p_plot = sub.add_parser("plot", help="per-point certified bounds on a grid")
    p_plot.add_argument("--partition", required=True)
    p_plot.add_argument("--k", type=int, required=True)
    p_plot.add_argument("--grid", type=int, required=True)
    p_plot.add_argument("--out", required=True)
    p_plot.add_argument("--x0", default="1/2")
    p_plot.add_argument("--tol", default="1/1000000")
    p_plot.set_defaults(run=cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return args.run(args)
    except NotYetCovered as exc:
        hint = f" (build at least {exc.needed_stage} stages)" if exc.needed_stage else ""
        print(f"error: {exc}{hint}", file=sys.stderr)
        return EXIT_NOT_YET_COVERED
    except ToleranceExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
