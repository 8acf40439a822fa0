"""Command-line interface.

Subcommands:

* ``verify-eq3``    sweep random label pairs and compare the trace-form
                    expectation against its closed form
* ``experiment``    print the exact joint table for the interlinked
                    contexts, the coincidence audit, and the expectation
* ``sample``        emit a deterministic coincidence tally
* ``diagram-check`` parse and validate a GDL file
* ``report``        run the full acceptance suite

Every command is deterministic given its flags; the default seed is 42,
overridable by the ``QCTX_SEED`` environment variable (a ``--seed`` flag
wins over the environment).  Text output renders 12 significant digits;
``json`` and ``csv`` keep full round-trip precision.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import acceptance
from ._kernels import BACKEND
from .experiment import (
    contextuality_report,
    expectation_closed_form,
    expectation_trace,
    interlinked_distribution,
    sample,
    shared_outcome_uniqueness,
    singlet_state,
)
from .ks import KSLabels, c_prime_blue, c_red
from .logic import GDLParseError, parse_diagram, validate_diagram
from .tolerances import DEFAULT, Tolerances, parse_override

DEFAULT_SEED = 42
DEFAULT_SHOTS = 1_000_000


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _parse_labels(text: str) -> KSLabels:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected three comma-separated labels, got {text!r}"
        )
    try:
        values = [float(p) for p in parts]
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None
    try:
        return KSLabels(*values)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qctx",
        description="Two-particle spin-1 contextuality laboratory "
        f"(kernel backend: {BACKEND}).",
    )
    parser.add_argument(
        "--version", action="version", version="%(prog)s 0.1.0"
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=("text", "json", "csv"),
        default="text",
        help="output format (default: text)",
    )
    common.add_argument(
        "--tol",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a named tolerance (repeatable)",
    )
    common.add_argument(
        "--out", metavar="PATH", help="write output to PATH instead of stdout"
    )
    common.add_argument(
        "--seed",
        type=int,
        default=None,
        help="64-bit seed (default: QCTX_SEED environment variable, else 42)",
    )

    labeled = argparse.ArgumentParser(add_help=False)
    labeled.add_argument(
        "--labels1",
        type=_parse_labels,
        default=KSLabels(1.0, 2.0, 3.0),
        metavar="A,B,C",
        help="outcome labels of the side-1 operator (default: 1,2,3)",
    )
    labeled.add_argument(
        "--labels2",
        type=_parse_labels,
        default=KSLabels(4.0, 5.0, 6.0),
        metavar="D,E,F",
        help="outcome labels of the side-2 operator (default: 4,5,6)",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser(
        "verify-eq3",
        parents=[common],
        help="sweep random labels and compare trace form vs closed form",
    )
    experiment = sub.add_parser(
        "experiment",
        parents=[common, labeled],
        help="exact joint table, coincidence audit, and expectation value",
    )
    experiment.add_argument(
        "--swap", action="store_true", help="exchange the two sides"
    )
    sampling = sub.add_parser(
        "sample",
        parents=[common, labeled],
        help="emit a deterministic coincidence tally",
    )
    sampling.add_argument(
        "--shots",
        type=int,
        default=DEFAULT_SHOTS,
        help=f"number of coincidences to draw (default: {DEFAULT_SHOTS})",
    )
    diagram = sub.add_parser(
        "diagram-check", parents=[common], help="parse and validate a GDL file"
    )
    diagram.add_argument("path", help="GDL file to check")
    sub.add_parser(
        "report", parents=[common], help="run the full acceptance suite"
    )
    return parser


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QCTX_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"QCTX_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def _resolve_tolerances(args: argparse.Namespace) -> Tolerances:
    overrides = {}
    for item in args.tol:
        key, value = parse_override(item)
        overrides[key] = value
    return DEFAULT.replace(**overrides) if overrides else DEFAULT


def _emit(args: argparse.Namespace, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_verify_eq3(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    tol = _resolve_tolerances(args)
    result = acceptance.expectation_identity(seed, tol)
    payload = result.to_dict() | {"seed": seed}
    if args.format == "json":
        _emit(args, json.dumps(payload, indent=2))
    elif args.format == "csv":
        lines = ["metric,value"] + [f"{k},{v}" for k, v in payload.items()]
        _emit(args, "\n".join(lines))
    else:
        _emit(args, result.line())
    return 0 if result.passed else 1


def _distribution_table(d) -> str:
    header = "side1 \\ side2 | " + "  ".join(
        f"{_fmt(l):>18}" for l in d.side2_labels
    )
    lines = [header, "-" * len(header)]
    for i, l1 in enumerate(d.side1_labels):
        cells = "  ".join(f"{_fmt(d.cell(i, j)):>18}" for j in range(3))
        lines.append(f"{_fmt(l1):>13} | {cells}")
    return "\n".join(lines)


def _cmd_experiment(args: argparse.Namespace) -> int:
    tol = _resolve_tolerances(args)
    l1, l2 = args.labels1, args.labels2
    d = interlinked_distribution(l1, l2, swap=args.swap, tol=tol)
    audit = contextuality_report(d, tol)
    uniqueness = shared_outcome_uniqueness(d, tol)
    trace = expectation_trace(c_red(l1, tol), c_prime_blue(l2, tol), singlet_state(), tol)
    closed = expectation_closed_form(l1, l2)
    ok = audit.confirmed and uniqueness.passed

    if args.format == "json":
        payload = {
            "swap": args.swap,
            "distribution": d.to_dict(),
            "contextuality": audit.to_dict(),
            "uniqueness": uniqueness.to_dict(),
            "expectation_trace": trace,
            "expectation_closed_form": closed,
        }
        _emit(args, json.dumps(payload, indent=2))
    elif args.format == "csv":
        _emit(args, d.to_csv())
    else:
        lines = [
            "exact joint distribution for the interlinked contexts",
            _distribution_table(d),
            "",
            f"expectation (trace form)  = {_fmt(trace)}",
            f"expectation (closed form) = {_fmt(closed)}",
            "",
            "forbidden cells "
            + ", ".join(
                f"({i},{j})={_fmt(p)}"
                for (i, j), p in zip(audit.forbidden_cells, audit.forbidden_probabilities)
            ),
            f"shared cell (0,0) = {_fmt(audit.shared_probability)}",
            f"verdict: {audit.verdict}",
            f"shared-outcome uniqueness: {'passed' if uniqueness.passed else 'failed'}",
        ]
        _emit(args, "\n".join(lines))
    return 0 if ok else 1


def _cmd_sample(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    tol = _resolve_tolerances(args)
    if args.shots < 1:
        raise ValueError(f"--shots must be positive, got {args.shots}")
    d = interlinked_distribution(args.labels1, args.labels2, tol=tol)
    tally = sample(d, shots=args.shots, seed=seed)
    if args.format == "json":
        _emit(args, tally.to_json())
    elif args.format == "csv":
        _emit(args, tally.to_csv())
    else:
        lines = [
            f"coincidence tally: {tally.shots} shots, seed {tally.seed}, "
            f"generator {tally.algorithm}",
        ]
        for i, l1 in enumerate(tally.side1_labels):
            for j, l2 in enumerate(tally.side2_labels):
                lines.append(
                    f"  ({_fmt(l1)}, {_fmt(l2)}): {int(tally.counts[i, j])}"
                )
        _emit(args, "\n".join(lines))
    return 0


def _cmd_diagram_check(args: argparse.Namespace) -> int:
    tol = _resolve_tolerances(args)
    try:
        with open(args.path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        print(f"qctx: cannot read {args.path}: {err}", file=sys.stderr)
        return 2
    try:
        diagram = parse_diagram(text, tol)
    except GDLParseError as err:
        print(f"{args.path}: {err}", file=sys.stderr)
        return 1
    report = validate_diagram(diagram, tol)
    if args.format == "json":
        payload = {"diagram": diagram.to_dict(), "report": report.to_dict()}
        _emit(args, json.dumps(payload, indent=2))
    elif args.format == "csv":
        lines = ["context,ray1,ray2,orthogonality_residual"]
        for cname, (r1, r2), value in report.orthogonality:
            lines.append(f"{cname},{r1},{r2},{value!r}")
        _emit(args, "\n".join(lines))
    else:
        lines = [
            f"{args.path}: {len(diagram.rays)} rays, "
            f"{len(diagram.contexts)} contexts",
        ]
        for rname, cnames in report.interlinks:
            lines.append(f"  interlink: ray {rname} shared by {', '.join(cnames)}")
        worst_orth = max((v for _, _, v in report.orthogonality), default=0.0)
        worst_norm = max((v for _, v in report.normalization), default=0.0)
        lines.append(f"  max orthogonality residual: {_fmt(worst_orth)}")
        lines.append(f"  max normalization residual: {_fmt(worst_norm)}")
        if not report.valid:
            for cname, pair, value in report.orthogonality:
                if value >= report.orthogonality_threshold:
                    lines.append(
                        f"  NOT ORTHOGONAL in {cname}: {pair[0]} . {pair[1]} "
                        f"= {_fmt(value)}"
                    )
        lines.append("valid" if report.valid else "INVALID")
        _emit(args, "\n".join(lines))
    return 0 if report.valid else 1


def _cmd_report(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    tol = _resolve_tolerances(args)
    results = acceptance.run_all(seed, tol)
    all_passed = all(r.passed for r in results)
    if args.format == "json":
        payload = {
            "seed": seed,
            "backend": BACKEND,
            "results": [r.to_dict() for r in results],
            "all_passed": all_passed,
        }
        _emit(args, json.dumps(payload, indent=2))
    elif args.format == "csv":
        lines = ["number,name,passed"]
        lines += [f"{r.number},{r.name},{r.passed}" for r in results]
        _emit(args, "\n".join(lines))
    else:
        lines = [r.line() for r in results]
        lines.append(
            f"{'all criteria passed' if all_passed else 'SOME CRITERIA FAILED'} "
            f"(seed {seed}, backend {BACKEND})"
        )
        _emit(args, "\n".join(lines))
    return 0 if all_passed else 1


_HANDLERS = {
    "verify-eq3": _cmd_verify_eq3,
    "experiment": _cmd_experiment,
    "sample": _cmd_sample,
    "diagram-check": _cmd_diagram_check,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ValueError as err:
        print(f"qctx: {err}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
