"""Logical-consistency auditing for ensembles of binary classifiers.

Given only the joint decision counts a group of classifiers produced on
a shared test, this package computes what their unobservable accuracies
could possibly be, raises an alarm when a safety requirement is
logically impossible to meet, and, for three error-independent
classifiers, recovers prevalence and accuracies exactly.
"""

from .alarm import (
    AlarmTrace,
    LabelMinimums,
    OverallMinimum,
    QaSlice,
    Verdict,
    alarm_verdict,
    evaluate_qa,
    min_count_above,
    restrict_qa_range,
    run_alarm,
    safe_threshold,
)
from .axioms import (
    IntInterval,
    feasible_interval_label_a,
    feasible_interval_label_b,
    induced_correct_b,
    joint_correct_a_window,
    pair_axiom_sum,
    pair_feasible,
    pair_partner_interval,
    pattern_covariance,
    point_axiom_violations,
    pspace_stats,
    reconstruct_pair_counts,
    reconstruct_pair_frequencies,
    single_axiom_residual,
    sketch_point,
)
from .independent import (
    Diagnosis,
    IndependentParams,
    IndependentSolution,
    PlataniosReport,
    SqrtValue,
    forward_model,
    majority_vote_prevalence,
    platanios_error,
    rational_sqrt,
    solve_independent,
)
from .model import (
    FLIP_MODES,
    LABEL_A,
    LABEL_B,
    LABELS,
    EvaluationPoint,
    EvaluationSketch,
    Marginals,
    OverallSpec,
    PerLabelSpec,
    PSpaceStats,
    SafetySpec,
    SketchError,
    all_patterns,
    correct_counts,
    flip_labels,
    flip_position,
    joint_correct_counts,
    marginalize,
    other_label,
    pair_counts,
    point_bound_violations,
    project,
    reorder,
    sketch_from_decisions,
    truth_prevalence,
    validate_sketch,
)
from .oracle import (
    BudgetExceededError,
    DEFAULT_SPLIT_BUDGET,
    SummaryClaims,
    SummaryReport,
    VarietyPoint,
    check_summary,
    count_feasible,
    enumerate_evaluations,
    enumerate_variety,
    evaluation_count,
    split_combinations,
    variety_is_empty,
)
from .persist import (
    DecisionRecord,
    FormatError,
    IngestError,
    IngestResult,
    atomic_write_text,
    decisions_to_csv_text,
    emit_trace,
    ingest,
    load_sketch,
    parse_claims,
    parse_params,
    parse_sketch,
    parse_trace,
    records_to_decisions,
    save_sketch,
    sketch_to_text,
    trace_to_csv_text,
    trace_to_json_text,
)
from .svg import default_label, render_traces
from .synth import generate_decisions

__version__ = "0.1.0"

__all__ = [
    "AlarmTrace",
    "BudgetExceededError",
    "DEFAULT_SPLIT_BUDGET",
    "DecisionRecord",
    "Diagnosis",
    "EvaluationPoint",
    "EvaluationSketch",
    "FLIP_MODES",
    "FormatError",
    "IndependentParams",
    "IndependentSolution",
    "IngestError",
    "IngestResult",
    "IntInterval",
    "LABELS",
    "LABEL_A",
    "LABEL_B",
    "LabelMinimums",
    "Marginals",
    "OverallMinimum",
    "OverallSpec",
    "PSpaceStats",
    "PerLabelSpec",
    "PlataniosReport",
    "QaSlice",
    "SafetySpec",
    "SketchError",
    "SqrtValue",
    "SummaryClaims",
    "SummaryReport",
    "VarietyPoint",
    "Verdict",
    "alarm_verdict",
    "all_patterns",
    "atomic_write_text",
    "check_summary",
    "correct_counts",
    "count_feasible",
    "decisions_to_csv_text",
    "default_label",
    "emit_trace",
    "enumerate_evaluations",
    "enumerate_variety",
    "evaluate_qa",
    "evaluation_count",
    "feasible_interval_label_a",
    "feasible_interval_label_b",
    "flip_labels",
    "flip_position",
    "forward_model",
    "generate_decisions",
    "induced_correct_b",
    "ingest",
    "joint_correct_a_window",
    "joint_correct_counts",
    "load_sketch",
    "majority_vote_prevalence",
    "marginalize",
    "min_count_above",
    "other_label",
    "pair_axiom_sum",
    "pair_counts",
    "pair_feasible",
    "pair_partner_interval",
    "parse_claims",
    "parse_params",
    "parse_sketch",
    "parse_trace",
    "pattern_covariance",
    "platanios_error",
    "point_axiom_violations",
    "point_bound_violations",
    "project",
    "pspace_stats",
    "rational_sqrt",
    "reconstruct_pair_counts",
    "reconstruct_pair_frequencies",
    "records_to_decisions",
    "render_traces",
    "reorder",
    "restrict_qa_range",
    "run_alarm",
    "safe_threshold",
    "save_sketch",
    "single_axiom_residual",
    "sketch_from_decisions",
    "sketch_point",
    "sketch_to_text",
    "solve_independent",
    "split_combinations",
    "trace_to_csv_text",
    "trace_to_json_text",
    "truth_prevalence",
    "validate_sketch",
    "variety_is_empty",
]
