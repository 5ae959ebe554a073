"""Command-line front end.

Exit codes are part of the interface: 0 for success, 2 when an alarm
run ends Triggered (so pipelines can branch on the verdict), and 1 for
usage, file, or data errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import NoReturn, Sequence

from .alarm import Verdict, alarm_verdict, restrict_qa_range, run_alarm
from .axioms import pspace_stats
from .independent import solve_independent
from .model import (
    EvaluationSketch,
    OverallSpec,
    PerLabelSpec,
    SketchError,
    flip_labels,
    marginalize,
    sketch_from_decisions,
    truth_prevalence,
    validate_sketch,
)
from .oracle import (
    BudgetExceededError,
    DEFAULT_SPLIT_BUDGET,
    SummaryClaims,
    check_summary,
    enumerate_evaluations,
    evaluation_count,
)
from .persist import (
    FormatError,
    IngestError,
    atomic_write_text,
    decisions_to_csv_text,
    emit_trace,
    ingest,
    load_sketch,
    parse_claims,
    parse_params,
    records_to_decisions,
    save_sketch,
)
from .synth import generate_decisions

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_TRIGGERED = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this tool reserves 2 for the
    alarm verdict, so usage problems exit 1 instead."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def build_parser() -> _Parser:
    parser = _Parser(prog="crosscheck", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="turn a decision table into a sketch file")
    p.add_argument("path", help="decision table file")
    p.add_argument("--format", choices=("csv", "jsonl"), required=True)
    p.add_argument(
        "--map",
        action="append",
        default=[],
        metavar="SOURCE=LABEL",
        help="map a source label to a or b; repeatable",
    )
    p.add_argument("--out", required=True, help="sketch file to write")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("sketch", help="print a sketch's marginals and statistics")
    p.add_argument("path", help="sketch file")
    p.set_defaults(func=_cmd_sketch)

    p = sub.add_parser("alarm", help="scan prevalence hypotheses for safety")
    p.add_argument("path", help="sketch file")
    spec = p.add_mutually_exclusive_group()
    spec.add_argument(
        "--spec-per-label",
        type=_fraction,
        default=None,
        metavar="T",
        help="required accuracy on each label (default 1/2)",
    )
    spec.add_argument(
        "--spec-overall",
        type=_fraction,
        default=None,
        metavar="T",
        help="required prevalence-weighted overall accuracy",
    )
    p.add_argument(
        "--strict",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="require strictly above the threshold (default) or at least it",
    )
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--pair", nargs=2, metavar=("I", "J"), help="audit two classifiers")
    mode.add_argument(
        "--ensemble", action="store_true", help="audit the whole roster (default)"
    )
    p.add_argument(
        "--refine-pairs",
        action="store_true",
        help="enforce pairwise coupling constraints inside each hypothesis",
    )
    p.add_argument(
        "--qa-range",
        nargs=2,
        type=int,
        metavar=("LO", "HI"),
        help="restrict the verdict to hypotheses in [LO, HI]",
    )
    p.add_argument("--trace", help="write the full trace (.csv or .json)")
    p.add_argument("--plot", help="write the full trace as a band plot (.svg)")
    p.set_defaults(func=_cmd_alarm)

    p = sub.add_parser("enumerate", help="walk the single-classifier outcome space")
    p.add_argument("--q", type=int, required=True, help="test size")
    p.add_argument("--count-only", action="store_true", help="print only the count")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("verify", help="audit a sketch and optional claims about it")
    p.add_argument("path", help="sketch file")
    p.add_argument("--claims", help="claims file (marginals and/or a point)")
    p.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_SPLIT_BUDGET,
        help="max ground-truth combinations to enumerate",
    )
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser(
        "solve-independent",
        help="recover prevalence and accuracies from three classifiers",
    )
    p.add_argument("path", help="sketch file with exactly three classifiers")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("generate", help="draw a synthetic labeled decision table")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--params", required=True, help="parameter file")
    p.add_argument("--q", type=int, required=True, help="number of items")
    p.add_argument("--out", help="write csv here instead of stdout")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("flip", help="relabel one classifier's responses")
    p.add_argument("path", help="sketch file")
    p.add_argument("--classifier", required=True)
    p.add_argument("--mode", choices=("global", "true-a", "true-b"), required=True)
    p.add_argument("--out", required=True, help="sketch file to write")
    p.set_defaults(func=_cmd_flip)

    return parser


def _parse_label_map(pairs: Sequence[str]) -> dict[str, str] | None:
    if not pairs:
        return None
    label_map: dict[str, str] = {}
    for pair in pairs:
        source, sep, target = pair.partition("=")
        if not sep or not source:
            raise IngestError(f"bad --map entry {pair!r}; want SOURCE=LABEL")
        label_map[source] = target
    return label_map


def _cmd_ingest(args: argparse.Namespace) -> int:
    result = ingest(args.path, args.format, _parse_label_map(args.map))
    if not result.records:
        raise IngestError("no usable records after ingestion")
    decisions, truth = records_to_decisions(result)
    sketch = sketch_from_decisions(decisions, result.roster, truth)
    save_sketch(sketch, args.out)
    print(f"kept {len(result.records)} items over {len(result.roster)} classifiers")
    for item_id, reason in result.dropped:
        print(f"dropped {item_id}: {reason}")
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_sketch(args: argparse.Namespace) -> int:
    sketch = load_sketch(args.path)
    problems = validate_sketch(sketch)
    print(f"q: {sketch.q}")
    print(f"classifiers: {', '.join(sketch.classifiers)}")
    for cid in sketch.classifiers:
        m = marginalize(sketch, cid)
        print(f"marginals {cid}: said-a {m.r_a}, said-b {m.r_b}")
    if problems:
        for problem in problems:
            print(f"violation: {problem}")
        return EXIT_ERROR
    if sketch.truth_split is not None:
        q_a = truth_prevalence(sketch)
        print(f"true-a items: {q_a} of {sketch.q}")
        stats = pspace_stats(sketch)
        for idx, cid in enumerate(sketch.classifiers):
            print(
                f"accuracy {cid}: true-a {stats.accuracy_a[idx]}, "
                f"true-b {stats.accuracy_b[idx]}"
            )
        for (first, second), value in stats.delta.items():
            print(f"pattern covariance {first},{second}: {value}")
    return EXIT_OK


def _trace_format(path: str) -> str:
    lowered = path.lower()
    for fmt in ("csv", "json", "svg"):
        if lowered.endswith("." + fmt):
            return fmt
    raise FormatError(f"cannot infer a trace format from {path!r}")


def _cmd_alarm(args: argparse.Namespace) -> int:
    sketch = load_sketch(args.path)
    if args.spec_overall is not None:
        spec = OverallSpec(args.spec_overall, args.strict)
    else:
        threshold = (
            args.spec_per_label if args.spec_per_label is not None else Fraction(1, 2)
        )
        spec = PerLabelSpec(threshold, threshold, args.strict)
    pair = tuple(args.pair) if args.pair else None
    trace = run_alarm(sketch, spec, pair=pair, refine=args.refine_pairs)
    effective = trace
    if args.qa_range:
        lo, hi = args.qa_range
        effective = restrict_qa_range(trace, lo, hi)
        print(f"hypotheses restricted to [{lo}, {hi}]")
    if args.trace:
        fmt = _trace_format(args.trace)
        if fmt == "svg":
            raise FormatError("--trace writes csv or json; use --plot for svg")
        emit_trace(trace, fmt, args.trace)
        print(f"wrote {args.trace}")
    if args.plot:
        if _trace_format(args.plot) != "svg":
            raise FormatError("--plot writes svg; use --trace for csv or json")
        emit_trace(trace, "svg", args.plot)
        print(f"wrote {args.plot}")
    safe = sum(1 for s in effective.slices if s.safe_exists)
    print(f"safe hypotheses: {safe} of {len(effective.slices)}")
    print(f"verdict: {effective.verdict.value}")
    return EXIT_TRIGGERED if effective.verdict is Verdict.TRIGGERED else EXIT_OK


def _cmd_enumerate(args: argparse.Namespace) -> int:
    if args.q < 0:
        raise SketchError("q must be non-negative")
    if args.count_only:
        print(evaluation_count(args.q))
        return EXIT_OK
    for point in enumerate_evaluations(args.q):
        print(f"{point.q_a} {point.correct_a[0]} {point.correct_b[0]}")
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    sketch = load_sketch(args.path)
    claims = SummaryClaims({})
    if args.claims:
        with open(args.claims, encoding="utf-8") as handle:
            claims = parse_claims(handle.read(), sketch)
    report = check_summary(sketch, claims, budget=args.budget)
    for violation in report.violations:
        print(f"violation: {violation}")
    if report.axioms_only:
        print("note: ground-truth enumeration skipped (budget exceeded)")
    elif report.variety_empty is not None:
        realizable = "no" if report.variety_empty else "yes"
        print(f"some ground truth realizes the sketch: {realizable}")
    if report.ok:
        print("ok")
        return EXIT_OK
    return EXIT_ERROR


def _cmd_solve(args: argparse.Namespace) -> int:
    sketch = load_sketch(args.path)
    solution = solve_independent(sketch)
    if not solution.consistent:
        print(f"inconsistent: {solution.diagnosis.value}")
        print(f"witness: {solution.witness}")
        return EXIT_OK
    for name, params in (("primary", solution.primary), ("mirror", solution.mirror)):
        acc_a = ", ".join(str(x) for x in params.accuracy_a)
        acc_b = ", ".join(str(x) for x in params.accuracy_b)
        print(f"{name}: prevalence-a {params.p_a}; accuracy-a [{acc_a}]; "
              f"accuracy-b [{acc_b}]")
    return EXIT_OK


def _cmd_generate(args: argparse.Namespace) -> int:
    with open(args.params, encoding="utf-8") as handle:
        ids, params = parse_params(handle.read())
    if ids is None:
        ids = tuple(f"clf{k + 1}" for k in range(params.size))
    decisions, truth = generate_decisions(ids, params, args.q, args.seed)
    text = decisions_to_csv_text(decisions, ids, truth)
    if args.out:
        atomic_write_text(args.out, text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_flip(args: argparse.Namespace) -> int:
    sketch = load_sketch(args.path)
    flipped = flip_labels(sketch, args.classifier, args.mode)
    save_sketch(flipped, args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_ERROR
    try:
        return args.func(args)
    except (SketchError, FormatError, IngestError, BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def run() -> None:
    sys.exit(main())
