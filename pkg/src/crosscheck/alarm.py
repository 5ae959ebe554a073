"""The logical-consistency alarm.

For every hypothetical number of true-a items, the response counts of
each audited classifier confine its unobservable correctness counts to
an integer interval.  If a safety requirement excludes that interval for
every hypothesis, no ground truth could make the classifiers meet the
requirement, and the alarm fires.  The alarm never needs an answer key;
by construction it cannot fire on a group that actually meets the
requirement.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Mapping, NamedTuple, Sequence

from .axioms import (
    IntInterval,
    feasible_interval_label_a,
    feasible_interval_label_b,
    pair_partner_interval,
)
from .model import (
    EvaluationSketch,
    Marginals,
    OverallSpec,
    PerLabelSpec,
    SafetySpec,
    SketchError,
    marginalize,
    pair_counts,
    validate_sketch,
)


class Verdict(enum.Enum):
    TRIGGERED = "triggered"
    NOT_TRIGGERED = "not_triggered"


class LabelMinimums(NamedTuple):
    min_correct_a: int
    min_correct_b: int


class OverallMinimum(NamedTuple):
    min_correct_total: int


def min_count_above(total: int, threshold, strict: bool = True) -> int:
    """Smallest correct count on ``total`` items whose accuracy clears a
    threshold.

    With ``strict`` the accuracy must exceed the threshold, otherwise
    meeting it is enough.  An empty item set needs nothing.  The result
    can exceed ``total`` (an unmeetable requirement, e.g. strictly above
    1), which callers observe as an empty safe interval.
    """
    if total < 0:
        raise SketchError("total must be non-negative")
    if total == 0:
        return 0
    scaled = threshold * total
    if strict:
        return math.floor(scaled) + 1
    return max(0, math.ceil(scaled))


def safe_threshold(spec: SafetySpec, q: int, q_a: int) -> LabelMinimums | OverallMinimum:
    """Minimum correctness counts a classifier needs at one hypothesis."""
    if isinstance(spec, PerLabelSpec):
        return LabelMinimums(
            min_count_above(q_a, spec.threshold_a, spec.strict),
            min_count_above(q - q_a, spec.threshold_b, spec.strict),
        )
    return OverallMinimum(min_count_above(q, spec.threshold, spec.strict))


def _safe_subinterval(
    q: int, q_a: int, marginals: Marginals, spec: SafetySpec
) -> IntInterval:
    """Correct-on-true-a counts that are feasible and meet the spec.

    Uses the fact that the true-b count is an increasing affine function
    of the true-a count, so every requirement becomes a lower bound on
    the a-axis and the safe set stays an interval.
    """
    ia = feasible_interval_label_a(q, q_a, marginals)
    offset = q - q_a - marginals.r_a
    if isinstance(spec, PerLabelSpec):
        need = safe_threshold(spec, q, q_a)
        lo = max(ia.lo, need.min_correct_a, need.min_correct_b - offset)
    else:
        need_total = safe_threshold(spec, q, q_a).min_correct_total
        lo = max(ia.lo, -(-(need_total - offset) // 2))
    return IntInterval(lo, ia.hi)


@dataclass(frozen=True)
class QaSlice:
    """Alarm state at one hypothesis for the number of true-a items.

    ``intervals_a``/``intervals_b`` are the per-classifier feasible
    correctness intervals (roster order of the trace).  ``safe_exists``
    says whether some ground truth at this hypothesis would let every
    audited classifier meet the requirement; with ``refined`` set, the
    cross-classifier coupling constraints were enforced too, otherwise
    each classifier was judged on its own.
    """

    q_a: int
    intervals_a: tuple[IntInterval, ...]
    intervals_b: tuple[IntInterval, ...]
    safe_exists: bool
    refined: bool = False


@dataclass(frozen=True)
class AlarmTrace:
    """Full record of one alarm run."""

    q: int
    spec: SafetySpec
    mode: str
    classifiers: tuple[str, ...]
    slices: tuple[QaSlice, ...]
    verdict: Verdict

    def __post_init__(self) -> None:
        object.__setattr__(self, "classifiers", tuple(self.classifiers))
        object.__setattr__(self, "slices", tuple(self.slices))

    @property
    def is_complete(self) -> bool:
        return [s.q_a for s in self.slices] == list(range(self.q + 1))

    def slice_at(self, q_a: int) -> QaSlice:
        for s in self.slices:
            if s.q_a == q_a:
                return s
        raise SketchError(f"trace has no slice at q_a={q_a}")


def _refined_safe_exists(
    q: int,
    q_a: int,
    safe: Sequence[IntInterval],
    pair_tables: Mapping[tuple[int, int], Mapping[str, int]],
) -> bool:
    """Is there one ground truth putting every classifier in its safe
    interval simultaneously?

    Backtracking over candidate true-a correctness counts, pruning each
    classifier's interval with the pairwise coupling to all classifiers
    already fixed.  For two classifiers the couplings are the whole
    story, so the answer is exact.  For three or more, only pairwise
    couplings are enforced; a True here can still be unrealizable by any
    single ground truth, so callers get a tightening of the independent
    check, never a loosening, and a False remains definitive.
    """
    n = len(safe)

    def admissible(k: int, chosen: list[int]) -> IntInterval:
        iv = safe[k]
        for i in range(k):
            if iv.is_empty:
                break
            iv = iv.intersect(pair_partner_interval(q, q_a, pair_tables[(i, k)], chosen[i]))
        return iv

    def search(k: int, chosen: list[int]) -> bool:
        if k == n:
            return True
        for x in admissible(k, chosen):
            chosen.append(x)
            if search(k + 1, chosen):
                return True
            chosen.pop()
        return False

    return search(0, [])


def evaluate_qa(
    sketch: EvaluationSketch,
    q_a: int,
    spec: SafetySpec,
    classifiers: Sequence[str] | None = None,
    refine: bool = False,
) -> QaSlice:
    """Judge one hypothesis for the number of true-a items."""
    ids = tuple(classifiers) if classifiers is not None else sketch.classifiers
    if not 0 <= q_a <= sketch.q:
        raise SketchError(f"q_a={q_a} outside [0, {sketch.q}]")
    margs = [marginalize(sketch, cid) for cid in ids]
    intervals_a = tuple(feasible_interval_label_a(sketch.q, q_a, m) for m in margs)
    intervals_b = tuple(feasible_interval_label_b(sketch.q, q_a, m) for m in margs)
    safe = [_safe_subinterval(sketch.q, q_a, m, spec) for m in margs]
    exists = all(not iv.is_empty for iv in safe)
    if exists and refine and len(ids) > 1:
        tables = {
            (i, j): pair_counts(sketch, ids[i], ids[j])
            for i in range(len(ids))
            for j in range(i + 1, len(ids))
        }
        exists = _refined_safe_exists(sketch.q, q_a, safe, tables)
    return QaSlice(q_a, intervals_a, intervals_b, exists, refine)


def _resolve_roster(
    sketch: EvaluationSketch, pair: Sequence[str] | None
) -> tuple[tuple[str, ...], str]:
    if pair is None:
        return sketch.classifiers, "ensemble"
    ids = tuple(pair)
    if len(ids) != 2 or ids[0] == ids[1]:
        raise SketchError("pair mode needs exactly two distinct classifier ids")
    for cid in ids:
        sketch.index_of(cid)
    return ids, "pair"


def run_alarm(
    sketch: EvaluationSketch,
    spec: SafetySpec,
    pair: Sequence[str] | None = None,
    refine: bool = False,
) -> AlarmTrace:
    """Scan every hypothesis and record the full trace.

    The alarm fires (verdict TRIGGERED) exactly when no hypothesis
    admits a ground truth under which all audited classifiers meet the
    requirement.
    """
    problems = validate_sketch(sketch)
    if problems:
        raise SketchError("invalid sketch: " + "; ".join(problems))
    ids, mode = _resolve_roster(sketch, pair)
    slices = tuple(
        evaluate_qa(sketch, q_a, spec, ids, refine) for q_a in range(sketch.q + 1)
    )
    verdict = (
        Verdict.NOT_TRIGGERED
        if any(s.safe_exists for s in slices)
        else Verdict.TRIGGERED
    )
    return AlarmTrace(sketch.q, spec, mode, ids, slices, verdict)


def alarm_verdict(
    sketch: EvaluationSketch,
    spec: SafetySpec,
    pair: Sequence[str] | None = None,
    refine: bool = False,
    qa_range: tuple[int, int] | None = None,
) -> Verdict:
    """Verdict without the trace; stops at the first safe hypothesis."""
    problems = validate_sketch(sketch)
    if problems:
        raise SketchError("invalid sketch: " + "; ".join(problems))
    ids, _ = _resolve_roster(sketch, pair)
    lo, hi = _check_range(sketch.q, qa_range if qa_range is not None else (0, sketch.q))
    for q_a in range(lo, hi + 1):
        if evaluate_qa(sketch, q_a, spec, ids, refine).safe_exists:
            return Verdict.NOT_TRIGGERED
    return Verdict.TRIGGERED


def _check_range(q: int, qa_range: tuple[int, int]) -> tuple[int, int]:
    lo, hi = qa_range
    if not (0 <= lo <= hi <= q):
        raise SketchError(f"bad hypothesis range [{lo}, {hi}] for q={q}")
    return lo, hi


def restrict_qa_range(trace: AlarmTrace, lo: int, hi: int) -> AlarmTrace:
    """Re-judge a trace considering only hypotheses in [lo, hi].

    Useful when outside knowledge bounds the prevalence; the verdict is
    recomputed over the kept slices.
    """
    _check_range(trace.q, (lo, hi))
    kept = tuple(s for s in trace.slices if lo <= s.q_a <= hi)
    verdict = (
        Verdict.NOT_TRIGGERED
        if any(s.safe_exists for s in kept)
        else Verdict.TRIGGERED
    )
    return replace(trace, slices=kept, verdict=verdict)
