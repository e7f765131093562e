"""The ``crn`` command-line tool.

Exit codes: 0 success, 1 parse or validation error, 2 invariance violation
(an implementation bug), 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .analysis import analyze, validate_report_certificates, verify_invariance
from .errors import CRNError
from .generate import random_network
from .graphs import build_directed_sr_graph, build_r_graph, build_sr_graph, export_dot
from .model import stoichiometric_matrix
from .parser import read_network, serialize_network
from .reduction import reduce_fully

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2
EXIT_IO = 3


def _cmd_analyze(args: argparse.Namespace) -> int:
    report = analyze(read_network(args.file), args.assume_bounded_persistence)
    print(report.to_json() if args.json else report.format_text())
    return EXIT_OK


def _cmd_reduce(args: argparse.Namespace) -> int:
    net = read_network(args.file)
    reduced, trace = reduce_fully(net)
    if args.trace:
        for step in trace.steps:
            cancelled = ", ".join(step.cancelled) or "none"
            print(f"# remove {step.removed}: {step.contracted} (cancelled catalysts: {cancelled})")
    print(serialize_network(reduced))
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    report = verify_invariance(read_network(args.file))
    print(report.to_json() if args.json else report.format_text())
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _cmd_export_dot(args: argparse.Namespace) -> int:
    net = read_network(args.file)
    N = stoichiometric_matrix(net)
    builders = {"sr": build_sr_graph, "dsr": build_directed_sr_graph, "r": build_r_graph}
    text = export_dot(builders[args.graph](net, N))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_selftest(args: argparse.Namespace) -> int:
    """Random networks through reduction, invariance checks and certificate re-validation."""
    failures = 0
    for seed in range(args.seeds):
        k = 1 + seed % 2
        net = random_network(args.n_max, args.m_max, k, seed=seed, require=("G3", "G4"))
        report = verify_invariance(net)
        problems = [f"invariance violated: {f.name}" for f in report.violations]
        for side in (report.original, report.reduced):
            problems += validate_report_certificates(side.to_dict())
        if serialize_network(report.trace.replay()) != serialize_network(report.trace.final):
            problems.append("trace replay differs from the minimal network")
        if problems:
            failures += 1
            print(f"seed {seed}: FAIL")
            for p in problems:
                print(f"  {p}")
            print("  " + serialize_network(net).replace("\n", "\n  "))
    print(f"selftest: {args.seeds - failures}/{args.seeds} networks passed")
    return EXIT_OK if failures == 0 else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crn", description="Graphical convergence checks and intermediate removal for reaction networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="check hypotheses, graph properties and the convergence verdict")
    p.add_argument("file")
    p.add_argument("--assume-bounded-persistence", action="store_true",
                   help="assert that the flow is bounded-persistent (not checked)")
    p.add_argument("--json", action="store_true", help="emit the JSON report")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("reduce", help="remove intermediates until none is left")
    p.add_argument("file")
    p.add_argument("--trace", action="store_true", help="list the removal steps as comments")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("verify-invariance", help="compare a network with its minimal reduction")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("export-dot", help="write a graph in Graphviz DOT format")
    p.add_argument("file")
    p.add_argument("--graph", choices=("sr", "dsr", "r"), required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_export_dot)

    p = sub.add_parser("selftest", help="run the invariance checks on seeded random networks")
    p.add_argument("--seeds", type=int, default=50)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--m-max", type=int, default=7)
    p.set_defaults(func=_cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CRNError as exc:
        where = getattr(args, "file", None)
        print(f"error: {where + ': ' if where else ''}{exc}", file=sys.stderr)
        return EXIT_INPUT
    except UnicodeDecodeError as exc:
        print(f"error: {args.file}: not UTF-8 text ({exc.reason})", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
