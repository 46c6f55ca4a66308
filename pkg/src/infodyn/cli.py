"""Command-line workbench.

Subcommands: ecd-sweep, quantum-ecd, recognize, axioms, value. Every
subcommand is deterministic for fixed flags and seed at any worker
count. Exit codes: 0 success, 2 usage or parse failure, 3 orbit
escape, 4 dimension mismatch, 5 probability-domain failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import classical, jsonio, metrics, svgplot
from .exceptions import DimensionMismatch, OrbitEscape, OutsideDomain
from .recognition import recognize_sequence

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DYNAMICS = 3
EXIT_DIMENSION = 4
EXIT_DOMAIN = 5


def _parse_log_base(text: str) -> float:
    if text == "e":
        return math.e
    base = float(text)
    if base <= 1.0:
        raise argparse.ArgumentTypeError("log base must exceed 1")
    return base


def _parse_x0(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad initial point {text!r}") from exc


def _write_text(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infodyn",
        description="Chaos-degree and recognition-channel workbench.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("ecd-sweep", help="parameter sweep of an iterated map")
    sweep.add_argument("--map", required=True, choices=sorted(classical.BUILTIN_MAPS))
    sweep.add_argument("--from", dest="start", type=float, required=True)
    sweep.add_argument("--to", dest="stop", type=float, required=True)
    sweep.add_argument("--step", type=float, required=True)
    sweep.add_argument("--bins", type=int, default=classical.DEFAULT_BINS)
    sweep.add_argument("--transient", type=int, default=classical.DEFAULT_TRANSIENT)
    sweep.add_argument("--samples", type=int, default=classical.DEFAULT_SAMPLES)
    sweep.add_argument("--x0", type=_parse_x0, default=None)
    sweep.add_argument("--eps-zero", type=float, default=classical.DEFAULT_EPS_ZERO)
    sweep.add_argument("--eps-const", type=float, default=classical.DEFAULT_EPS_CONST)
    sweep.add_argument("--window", type=int, default=classical.DEFAULT_WINDOW)
    sweep.add_argument("--workers", type=int, default=None,
                       help="parallel orbit workers (default: INFODYN_THREADS or 1)")
    sweep.add_argument("--out", default=None, help="CSV path (default stdout)")
    sweep.add_argument("--plot", default=None, help="optional SVG path")
    sweep.set_defaults(func=cmd_ecd_sweep)

    quantum = sub.add_parser("quantum-ecd", help="chaos degree of a state under a channel")
    quantum.add_argument("--state", required=True, help="JSON density-matrix file")
    quantum.add_argument("--channel", required=True, help="JSON channel descriptor file")
    quantum.add_argument("--restarts", type=int, default=1000)
    quantum.add_argument("--seed", type=int, default=0)
    quantum.add_argument("--log-base", type=_parse_log_base, default=math.e,
                         help="display base for entropies ('e' or a number > 1)")
    quantum.add_argument("--out", default=None)
    quantum.set_defaults(func=cmd_quantum_ecd)

    recog = sub.add_parser("recognize", help="run a recognition experiment file")
    recog.add_argument("--experiment", required=True, help="JSON experiment file")
    recog.add_argument("--out", default=None, help="JSON-lines path (default stdout)")
    recog.set_defaults(func=cmd_recognize)

    axioms = sub.add_parser("axioms", help="complexity axiom property suite")
    axioms.add_argument("--dim", type=int, required=True)
    axioms.add_argument("--trials", type=int, default=100)
    axioms.add_argument("--seed", type=int, default=0)
    axioms.add_argument("--out", default=None)
    axioms.set_defaults(func=cmd_axioms)

    value = sub.add_parser("value", help="chaos-versus-value ordering batch")
    value.add_argument("--batch", default=None, help="JSON batch config file")
    value.add_argument("--dim", type=int, default=2)
    value.add_argument("--pairs", type=int, default=100)
    value.add_argument("--seed", type=int, default=0)
    value.add_argument("--out", default=None)
    value.set_defaults(func=cmd_value)

    return parser


def cmd_ecd_sweep(args) -> int:
    system = classical.BUILTIN_MAPS[args.map]
    cfg = classical.OrbitConfig(
        x0=args.x0, transient=args.transient, samples=args.samples
    )
    partition = classical.Partition(system.box, args.bins)
    workers = classical.default_workers() if args.workers is None else args.workers
    if workers < 1:
        raise ValueError("workers must be positive")
    rows = classical.sweep(
        system, args.start, args.stop, args.step, cfg, partition,
        eps_zero=args.eps_zero, eps_const=args.eps_const,
        window=args.window, workers=workers,
    )
    _write_text(args.out, classical.sweep_to_csv(rows))
    if args.plot is not None:
        svg = svgplot.line_plot(
            [row.param for row in rows],
            [("D", [row.chaos_degree for row in rows]),
             ("lyapunov", [row.lyapunov for row in rows])],
            xlabel="a",
            ylabel="D, lyapunov",
        )
        _write_text(args.plot, svg)
    return EXIT_OK


def cmd_quantum_ecd(args) -> int:
    state = jsonio.parse_state(jsonio.load_json(args.state))
    channel = jsonio.parse_channel(jsonio.load_json(args.channel))
    cfg = metrics.ComplexityConfig(restarts=args.restarts, seed=args.seed)
    report = metrics.chaos_degree(state, channel, cfg)
    _write_text(args.out, jsonio.dump_json(report.to_json(log_base=args.log_base)))
    return EXIT_OK


def cmd_recognize(args) -> int:
    gamma0, signals, bell, policy = jsonio.parse_experiment(
        jsonio.load_json(args.experiment)
    )
    history = recognize_sequence(gamma0, signals, bell, policy)
    lines = "".join(
        json.dumps(step.to_json(), sort_keys=True, separators=(",", ":")) + "\n"
        for step in history.steps
    )
    _write_text(args.out, lines)
    return EXIT_OK


def cmd_axioms(args) -> int:
    results = metrics.axiom_suite(args.dim, args.trials, args.seed)
    payload = {name: result.to_json() for name, result in results.items()}
    payload["all_passed"] = all(r.passed for r in results.values())
    _write_text(args.out, jsonio.dump_json(payload))
    return EXIT_OK


def cmd_value(args) -> int:
    dim, pairs, seed = args.dim, args.pairs, args.seed
    kraus_terms, identical = 2, False
    if args.batch is not None:
        spec = jsonio.load_json(args.batch)
        if not isinstance(spec, dict):
            raise ValueError("batch config must be a JSON object")
        allowed = {"dim", "pairs", "seed", "kraus_terms", "identical_channels"}
        unknown = set(spec) - allowed
        if unknown:
            raise ValueError(f"unknown fields in batch config: {sorted(unknown)}")
        dim = spec.get("dim", dim)
        pairs = spec.get("pairs", pairs)
        seed = spec.get("seed", seed)
        kraus_terms = spec.get("kraus_terms", kraus_terms)
        identical = spec.get("identical_channels", identical)
    outcomes, rate = metrics.conjecture_batch(
        dim, pairs, seed, kraus_terms=kraus_terms, identical_channels=identical
    )
    payload = {
        "pairs": [o.to_json() for o in outcomes],
        "agreement_rate": rate,
        "dim": dim,
        "seed": seed,
    }
    _write_text(args.out, jsonio.dump_json(payload))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except OrbitEscape as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DYNAMICS
    except DimensionMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except OutsideDomain as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ValueError, TypeError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
