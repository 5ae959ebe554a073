"""Brute-force ground truth enumeration, used as an independent referee.

These routines ignore the interval algebra entirely: they walk the raw
lattice of candidate correctness counts, or the raw set of per-pattern
truth splits, and test definitions directly.  They exist so the fast
paths elsewhere can be checked against something with no shared code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .model import (
    LABEL_A,
    EvaluationPoint,
    EvaluationSketch,
    Marginals,
    SketchError,
    point_bound_violations,
    validate_sketch,
)

DEFAULT_SPLIT_BUDGET = 10_000_000


class BudgetExceededError(RuntimeError):
    """The requested enumeration is larger than the configured budget."""


def enumerate_evaluations(q: int) -> Iterator[EvaluationPoint]:
    """Every possible single-classifier evaluation outcome on q items.

    Yields one point per (q_a, correct_a, correct_b) triple with the
    obvious bounds; nothing else is assumed.  There are exactly
    (q+1)(q+2)(q+3)/6 of them.
    """
    if q < 0:
        raise SketchError("q must be non-negative")
    for q_a in range(q + 1):
        for c_a in range(q_a + 1):
            for c_b in range(q - q_a + 1):
                yield EvaluationPoint(q_a, (c_a,), (c_b,))


def evaluation_count(q: int) -> int:
    return (q + 1) * (q + 2) * (q + 3) // 6


@dataclass(frozen=True)
class VarietyPoint:
    """One realizable ground truth for a sketch.

    ``true_a_split`` records, pattern by pattern, how many of the
    pattern's items carry true label a; everything in ``point`` is
    derived from it.
    """

    point: EvaluationPoint
    true_a_split: Mapping[str, int]


def split_combinations(sketch: EvaluationSketch) -> int:
    """Size of the raw truth-split search space for a sketch."""
    total = 1
    for n in sketch.counts.values():
        total *= n + 1
    return total


def _point_from_split(
    sketch: EvaluationSketch, split: Mapping[str, int]
) -> EvaluationPoint:
    ids = sketch.classifiers
    size = len(ids)
    q_a = sum(split.values())
    c_a = [0] * size
    c_b = [0] * size
    pairs = {
        (i, j): [0, 0] for i in range(size) for j in range(i + 1, size)
    }
    for pattern, n in sketch.counts.items():
        n_a = split.get(pattern, 0)
        n_b = n - n_a
        for k in range(size):
            if pattern[k] == LABEL_A:
                c_a[k] += n_a
            else:
                c_b[k] += n_b
        for (i, j), acc in pairs.items():
            if pattern[i] == LABEL_A and pattern[j] == LABEL_A:
                acc[0] += n_a
            elif pattern[i] != LABEL_A and pattern[j] != LABEL_A:
                acc[1] += n_b
    return EvaluationPoint(
        q_a,
        tuple(c_a),
        tuple(c_b),
        {k: (v[0], v[1]) for k, v in pairs.items()},
    )


def enumerate_variety(
    sketch: EvaluationSketch,
    q_a: int | None = None,
    budget: int = DEFAULT_SPLIT_BUDGET,
) -> Iterator[VarietyPoint]:
    """All ground truths a sketch admits, optionally fixing the number
    of true-a items.

    Walks every way of declaring 0..n of each pattern's items true-a.
    Raises :class:`BudgetExceededError` before starting when the search
    space exceeds ``budget`` combinations.
    """
    problems = validate_sketch(sketch)
    if problems:
        raise SketchError("invalid sketch: " + "; ".join(problems))
    if split_combinations(sketch) > budget:
        raise BudgetExceededError(
            f"{split_combinations(sketch)} split combinations exceed the "
            f"budget of {budget}"
        )
    patterns = sorted(sketch.counts)
    ranges = [range(sketch.counts[p] + 1) for p in patterns]
    for choice in itertools.product(*ranges):
        if q_a is not None and sum(choice) != q_a:
            continue
        split = dict(zip(patterns, choice))
        yield VarietyPoint(_point_from_split(sketch, split), split)


def variety_is_empty(
    sketch: EvaluationSketch,
    q_a: int | None = None,
    budget: int = DEFAULT_SPLIT_BUDGET,
) -> bool:
    for _ in enumerate_variety(sketch, q_a=q_a, budget=budget):
        return False
    return True


def count_feasible(q: int, marginals: Marginals) -> int:
    """Number of evaluation outcomes consistent with one classifier's
    response totals, summed over all prevalences.

    Counted by brute force over :func:`enumerate_evaluations`.
    """
    if marginals.r_a + marginals.r_b != q:
        raise SketchError("marginals must sum to q")
    total = 0
    for point in enumerate_evaluations(q):
        said_a = point.correct_a[0] + (q - point.q_a - point.correct_b[0])
        if said_a == marginals.r_a:
            total += 1
    return total


@dataclass(frozen=True)
class SummaryClaims:
    """An externally supplied summary of an evaluation to be audited.

    ``marginals`` maps classifier id to claimed response totals;
    ``point`` is an optional claimed ground truth.
    """

    marginals: Mapping[str, Marginals]
    point: EvaluationPoint | None = None


@dataclass(frozen=True)
class SummaryReport:
    """Outcome of auditing claims against a sketch.

    ``variety_empty`` is None when the claims alone settle nothing
    (no point claimed) or the enumeration was skipped for budget;
    ``axioms_only`` records that skip.
    """

    violations: tuple[str, ...]
    variety_empty: bool | None
    axioms_only: bool

    @property
    def ok(self) -> bool:
        return not self.violations


def check_summary(
    sketch: EvaluationSketch,
    claims: SummaryClaims,
    budget: int = DEFAULT_SPLIT_BUDGET,
) -> SummaryReport:
    """Audit claimed marginals and an optional claimed point.

    Marginal claims are compared against the sketch's actual totals.  A
    claimed point is checked against the axioms, and then against the
    brute-force variety at its claimed prevalence when the budget
    allows.  Structural invalidity of the sketch itself is reported as
    violations rather than raised, since auditing bad data is the point.
    """
    from .axioms import point_axiom_violations

    sketch_problems = validate_sketch(sketch)
    violations = list(sketch_problems)
    roster = set(sketch.classifiers)
    for cid in sorted(claims.marginals):
        if cid not in roster:
            violations.append(f"claimed marginals for unknown classifier {cid}")
    if not violations:
        from .model import marginalize

        for cid, claimed in claims.marginals.items():
            actual = marginalize(sketch, cid)
            if claimed != actual:
                violations.append(
                    f"classifier {cid}: claimed totals ({claimed.r_a}, {claimed.r_b}) "
                    f"differ from actual ({actual.r_a}, {actual.r_b})"
                )
    variety_empty: bool | None = None
    axioms_only = False
    if claims.point is None and not sketch_problems:
        try:
            variety_empty = variety_is_empty(sketch, budget=budget)
        except BudgetExceededError:
            axioms_only = True
    if claims.point is not None and not violations:
        point = claims.point
        violations.extend(point_bound_violations(point, sketch.q))
        if not violations:
            violations.extend(point_axiom_violations(sketch, point))
        try:
            empty = variety_is_empty(sketch, q_a=point.q_a, budget=budget)
        except BudgetExceededError:
            axioms_only = True
        else:
            variety_empty = empty
            if empty:
                violations.append(
                    f"no ground truth with q_a={point.q_a} realizes this sketch"
                )
            elif not violations:
                found = False
                for vp in enumerate_variety(sketch, q_a=point.q_a, budget=budget):
                    p = vp.point
                    if (
                        p.correct_a == point.correct_a
                        and p.correct_b == point.correct_b
                        and (
                            point.pair_correct is None
                            or p.pair_correct == point.pair_correct
                        )
                    ):
                        found = True
                        break
                if not found:
                    violations.append(
                        "claimed point is not realized by any ground truth "
                        f"with q_a={point.q_a}"
                    )
    return SummaryReport(tuple(violations), variety_empty, axioms_only)
