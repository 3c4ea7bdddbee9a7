"""Command-line driver: ``mcst-shapley {exact,estimate,generate,experiment,plotdata}``.

Exit codes: 2 for unreadable input or conflicting flags, 3 when an exact
oracle is over budget, 4 when instance generation runs out of attempts.
"""

from __future__ import annotations

import argparse
import logging
import sys
from decimal import Context, Decimal
from fractions import Fraction
from pathlib import Path

from mcst_shapley.experiment import (
    MMIN_COLUMNS,
    SUCCESS_COLUMNS,
    ExperimentConfig,
    GenerationCapExceeded,
    generate_nonnull,
    plot_coordinates,
    read_mmin_csv,
    run_experiment,
    write_csv,
)
from mcst_shapley.game import GameKind
from mcst_shapley.graph import (
    InstanceParseError,
    parse_instance,
    parse_weight_model,
    serialize_instance,
    threshold_decompose,
)
from mcst_shapley.shapley import (
    BudgetExceeded,
    exact_shapley_subsets,
    monte_carlo_shapley,
    required_samples,
)

EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_GENERATION = 4

_DEC = Context(prec=17)


def rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def decimal(x: Fraction) -> str:
    return str(_DEC.divide(Decimal(x.numerator), Decimal(x.denominator)))


def _load(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_instance(text)


def cmd_exact(args) -> int:
    graph = _load(args.instance)
    kind = GameKind(args.kind)
    values = exact_shapley_subsets(graph, kind)
    print(" ".join(rational(v) for v in values))
    print(" ".join(decimal(v) for v in values))
    return 0


def cmd_estimate(args, parser) -> int:
    by_samples = args.samples is not None
    by_bound = args.eps is not None or args.delta is not None
    if by_samples == by_bound:
        parser.error("give exactly one of --samples or --eps/--delta")
    if by_bound and (args.eps is None or args.delta is None):
        parser.error("--eps and --delta go together")
    graph = _load(args.instance)
    if by_samples:
        m = args.samples
        if m < 1:
            parser.error("--samples must be positive")
    else:
        h = threshold_decompose(graph).H
        weighted = not graph.is_simple()
        try:
            m = required_samples(graph.n, args.eps, args.delta, max(h, 1), args.scope, weighted)
        except ValueError as exc:
            parser.error(str(exc))
    report = monte_carlo_shapley(graph, m, args.seed, per_level=args.per_level, workers=args.workers)
    print(f"M {m}")
    print(f"seed {report.seed}")
    print(" ".join(rational(v) for v in report.estimates))
    print(" ".join(decimal(v) for v in report.estimates))
    if args.per_level:
        for gamma, row in zip(report.levels, report.per_level):
            print(f"level {gamma} " + " ".join(rational(v) for v in row))
    return 0


def cmd_generate(args) -> int:
    model = parse_weight_model(args.model)
    graph, attempts = generate_nonnull(args.n, model, args.seed, args.require_nonnull)
    text = serialize_instance(graph)
    if args.require_nonnull is not None:
        text += f"# attempts {attempts}\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_experiment(args) -> int:
    config = ExperimentConfig.from_text(Path(args.config).read_text())
    result = run_experiment(config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "success.csv").write_text(write_csv(result.success_rows, SUCCESS_COLUMNS))
    (out / "mmin.csv").write_text(write_csv(result.mmin_rows, MMIN_COLUMNS))
    for msg in result.anomalies:
        print(f"anomaly: {msg}", file=sys.stderr)
    return 0


def cmd_plotdata(args) -> int:
    rows = read_mmin_csv(Path(args.mmin).read_text())
    cols, coords = plot_coordinates(rows, args.mode, n=args.n, eps=args.eps)
    text = write_csv(coords, cols)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mcst-shapley", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="exact Shapley value by subset enumeration")
    p.add_argument("instance")
    p.add_argument("--kind", choices=[k.value for k in GameKind], default="saving")

    p = sub.add_parser("estimate", help="Monte Carlo estimate of the saving-game Shapley value")
    p.add_argument("instance")
    p.add_argument("--samples", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--scope", choices=["single", "all"], default="single")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-level", action="store_true")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("generate", help="random instance file")
    p.add_argument("n", type=int)
    p.add_argument("--model", default="binary(0.5)", help="binary(p) or uniform-int(L,U)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--require-nonnull", type=int, metavar="PLAYER")
    p.add_argument("-o", "--output")

    p = sub.add_parser("experiment", help="run the sample-size protocol")
    p.add_argument("config")
    p.add_argument("--out", default=".")

    p = sub.add_parser("plotdata", help="plot coordinates from mmin.csv")
    p.add_argument("mmin")
    p.add_argument("--mode", choices=["eps", "players"], required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("-o", "--output")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "estimate":
            return cmd_estimate(args, parser)
        handler = {
            "exact": cmd_exact,
            "generate": cmd_generate,
            "experiment": cmd_experiment,
            "plotdata": cmd_plotdata,
        }[args.command]
        return handler(args)
    except (InstanceParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except GenerationCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
