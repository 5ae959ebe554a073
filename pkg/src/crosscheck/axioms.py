"""Consistency constraints linking response counts to correctness counts.

Everything here is exact integer or rational arithmetic.  The central
objects are closed integer intervals of feasible per-label correctness
counts for a hypothesised number of true-a items, and the constraints a
pair of classifiers must jointly satisfy on top of the per-classifier
ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .model import (
    LABEL_A,
    EvaluationSketch,
    Marginals,
    PSpaceStats,
    SketchError,
    correct_counts,
    joint_correct_counts,
    marginalize,
    pair_counts,
    validate_sketch,
)


@dataclass(frozen=True)
class IntInterval:
    """Closed integer interval [lo, hi]; empty when lo > hi."""

    lo: int
    hi: int

    @classmethod
    def empty(cls) -> "IntInterval":
        return cls(0, -1)

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    @property
    def width(self) -> int:
        return 0 if self.is_empty else self.hi - self.lo + 1

    def __contains__(self, value: int) -> bool:
        return self.lo <= value <= self.hi

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.lo, self.hi + 1))

    def intersect(self, other: "IntInterval") -> "IntInterval":
        return IntInterval(max(self.lo, other.lo), min(self.hi, other.hi))


def single_axiom_residual(
    q: int, q_a: int, correct_a: int, correct_b: int, marginals: Marginals
) -> int:
    """Zero iff one classifier's correctness counts match its responses.

    A classifier that says "a" ``r_a`` times and is right ``correct_a``
    times on the ``q_a`` true-a items has no remaining freedom: its
    true-b correctness is forced.  The residual measures the failure of
    that forcing and vanishes exactly on consistent assignments.
    """
    q_b = q - q_a
    left = q * correct_a - q_a * marginals.r_a
    right = q * correct_b - q_b * marginals.r_b
    return left - right


def induced_correct_b(q: int, q_a: int, correct_a: int, marginals: Marginals) -> int:
    """The true-b correctness forced by a true-a correctness count.

    Increasing in ``correct_a``; together with the single-classifier
    residual this is the whole content of the per-classifier constraint.
    """
    return q - q_a - marginals.r_a + correct_a


def feasible_interval_label_a(q: int, q_a: int, marginals: Marginals) -> IntInterval:
    """Correct-on-true-a counts compatible with the response totals."""
    lo = max(0, marginals.r_a - (q - q_a))
    hi = min(q_a, marginals.r_a)
    return IntInterval(lo, hi)


def feasible_interval_label_b(q: int, q_a: int, marginals: Marginals) -> IntInterval:
    """Correct-on-true-b counts compatible with the response totals.

    The affine image of the label-a interval under
    :func:`induced_correct_b`; endpoints correspond one to one.
    """
    lo = max(0, marginals.r_b - q_a)
    hi = min(q - q_a, marginals.r_b)
    return IntInterval(lo, hi)


def pair_axiom_sum(
    q: int,
    q_a: int,
    marginals_i: Marginals,
    marginals_j: Marginals,
    agree_a: int,
    correct_a_i: int,
    correct_a_j: int,
) -> int:
    """Forced sum of a pair's two joint correctness counts.

    ``agree_a`` is the observable count of items where both classifiers
    responded "a".  Once each classifier's own true-a correctness is
    fixed, the number of items where both are right on true-a plus the
    number where both are right on true-b is fully determined; only the
    split between the two remains free, and :func:`pair_feasible` says
    which splits admit non-negative pattern cells.
    """
    q_b = q - q_a
    return (
        q_b
        - (marginals_i.r_a + marginals_j.r_a)
        + agree_a
        + (correct_a_i + correct_a_j)
    )


def joint_correct_a_window(
    q_a: int,
    pair: Mapping[str, int],
    correct_a_i: int,
    correct_a_j: int,
) -> IntInterval:
    """Feasible joint-correct-on-true-a counts for a pair, given both
    classifiers' own true-a correctness.

    The window is exactly the set of values for which every joint
    pattern count splits into non-negative true-a and true-b parts, so
    membership is equivalent to the existence of an item-level ground
    truth realizing all the counts.
    """
    x = correct_a_i
    y = correct_a_j
    n_aa = pair["aa"]
    n_ab = pair["ab"]
    n_ba = pair["ba"]
    n_bb = pair["bb"]
    lo = max(0, x - n_ab, y - n_ba, x + y - q_a)
    hi = min(n_aa, x, y, n_bb - q_a + x + y)
    return IntInterval(lo, hi)


def pair_feasible(
    q: int,
    q_a: int,
    pair: Mapping[str, int],
    marginals_i: Marginals,
    marginals_j: Marginals,
    correct_a_i: int,
    correct_a_j: int,
) -> bool:
    """Can these two per-classifier counts coexist on one ground truth?

    Requires each count to sit inside its own feasible interval first;
    callers asking about points outside that rectangle get an error
    rather than a misleading False.
    """
    ia_i = feasible_interval_label_a(q, q_a, marginals_i)
    ia_j = feasible_interval_label_a(q, q_a, marginals_j)
    if correct_a_i not in ia_i or correct_a_j not in ia_j:
        raise SketchError(
            "pair feasibility asked outside the per-classifier rectangle: "
            f"({correct_a_i}, {correct_a_j}) vs [{ia_i.lo},{ia_i.hi}]x[{ia_j.lo},{ia_j.hi}]"
        )
    return not joint_correct_a_window(q_a, pair, correct_a_i, correct_a_j).is_empty


def pair_partner_interval(
    q: int,
    q_a: int,
    pair: Mapping[str, int],
    correct_a_i: int,
) -> IntInterval:
    """All partner true-a counts jointly feasible with ``correct_a_i``.

    Empty when the fixed count alone already exceeds what the pattern
    table can absorb.  Callers still intersect the result with the
    partner's own feasible interval; this captures only the coupling.
    """
    x = correct_a_i
    n_aa = pair["aa"]
    n_ab = pair["ab"]
    n_ba = pair["ba"]
    n_bb = pair["bb"]
    if x < q_a - n_bb - n_ba:
        return IntInterval.empty()
    lo = max(0, x - n_ab, q_a - n_bb - x, q_a - n_bb - n_ab)
    hi = min(x + n_ba, q_a + n_aa - x)
    return IntInterval(lo, hi)


def pattern_covariance(sketch: EvaluationSketch, first: str, second: str) -> Fraction:
    """Observable covariance of a pair's decisions, label-symmetric.

    Computed both ways (agree on "a" and agree on "b"); the two must
    match on any sketch whose counts sum to q, and a mismatch means the
    sketch is corrupted.
    """
    pair = pair_counts(sketch, first, second)
    q = Fraction(sketch.q)
    f_aa = Fraction(pair["aa"]) / q
    f_ab = Fraction(pair["ab"]) / q
    f_ba = Fraction(pair["ba"]) / q
    f_bb = Fraction(pair["bb"]) / q
    f_ai = f_aa + f_ab
    f_aj = f_aa + f_ba
    f_bi = f_ba + f_bb
    f_bj = f_ab + f_bb
    via_a = f_aa - f_ai * f_aj
    via_b = f_bb - f_bi * f_bj
    if via_a != via_b:
        raise SketchError(
            f"pattern covariance mismatch for pair ({first!r}, {second!r}): "
            f"{via_a} via label a, {via_b} via label b; counts do not sum to q"
        )
    return via_a


def pspace_stats(sketch: EvaluationSketch) -> PSpaceStats:
    """Exact ratio statistics of a truth-split sketch.

    Raises when the sketch fails validation or has no truth split.
    Accuracies and within-label correlations are None whenever their
    label has no items.
    """
    if sketch.truth_split is None:
        raise SketchError("ratio statistics need a truth split")
    problems = validate_sketch(sketch)
    if problems:
        raise SketchError("invalid sketch: " + "; ".join(problems))
    q = sketch.q
    q_a = sum(a for a, _ in sketch.truth_split.values())
    q_b = q - q_a
    p_a = Fraction(q_a, q)
    p_b = Fraction(q_b, q)
    acc_a: list[Fraction | None] = []
    acc_b: list[Fraction | None] = []
    for cid in sketch.classifiers:
        on_a, on_b = correct_counts(sketch, cid)
        acc_a.append(Fraction(on_a, q_a) if q_a else None)
        acc_b.append(Fraction(on_b, q_b) if q_b else None)
    gamma_a: dict[tuple[str, str], Fraction | None] = {}
    gamma_b: dict[tuple[str, str], Fraction | None] = {}
    delta: dict[tuple[str, str], Fraction] = {}
    ids = sketch.classifiers
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            key = (ids[i], ids[j])
            joint_a, joint_b = joint_correct_counts(sketch, ids[i], ids[j])
            if q_a:
                pi = acc_a[i]
                pj = acc_a[j]
                assert pi is not None and pj is not None
                gamma_a[key] = Fraction(joint_a, q_a) - pi * pj
            else:
                gamma_a[key] = None
            if q_b:
                pi = acc_b[i]
                pj = acc_b[j]
                assert pi is not None and pj is not None
                gamma_b[key] = Fraction(joint_b, q_b) - pi * pj
            else:
                gamma_b[key] = None
            delta[key] = pattern_covariance(sketch, ids[i], ids[j])
    return PSpaceStats(
        classifiers=ids,
        p_a=p_a,
        p_b=p_b,
        accuracy_a=tuple(acc_a),
        accuracy_b=tuple(acc_b),
        gamma_a=gamma_a,
        gamma_b=gamma_b,
        delta=delta,
    )


def reconstruct_pair_frequencies(
    p_a: Fraction,
    acc_a_i: Fraction | None,
    acc_a_j: Fraction | None,
    acc_b_i: Fraction | None,
    acc_b_j: Fraction | None,
    gamma_a: Fraction | None,
    gamma_b: Fraction | None,
) -> dict[str, Fraction]:
    """Joint decision frequencies of a pair from ratio statistics.

    Terms attached to a label with zero weight are skipped, so the None
    statistics of an absent label never poison the result.
    """
    p_b = 1 - p_a
    out = {"aa": Fraction(0), "ab": Fraction(0), "ba": Fraction(0), "bb": Fraction(0)}

    def add(weight: Fraction, pi: Fraction | None, pj: Fraction | None,
            gamma: Fraction | None, correct_pattern_is_aa: bool) -> None:
        if weight == 0:
            return
        if pi is None or pj is None or gamma is None:
            raise SketchError("missing statistics for a label with positive weight")
        both = pi * pj + gamma
        only_i = pi * (1 - pj) - gamma
        only_j = (1 - pi) * pj - gamma
        neither = (1 - pi) * (1 - pj) + gamma
        if correct_pattern_is_aa:
            out["aa"] += weight * both
            out["ab"] += weight * only_i
            out["ba"] += weight * only_j
            out["bb"] += weight * neither
        else:
            out["bb"] += weight * both
            out["ba"] += weight * only_i
            out["ab"] += weight * only_j
            out["aa"] += weight * neither

    add(p_a, acc_a_i, acc_a_j, gamma_a, True)
    add(p_b, acc_b_i, acc_b_j, gamma_b, False)
    return out


def reconstruct_pair_counts(
    sketch: EvaluationSketch, first: str, second: str
) -> dict[str, int]:
    """Round-trip check: rebuild a pair's pattern counts from its stats.

    The reconstruction is exact; a non-integer intermediate would mean
    the statistics were not produced by :func:`pspace_stats` on this
    sketch.
    """
    stats = pspace_stats(sketch)
    i = sketch.index_of(first)
    j = sketch.index_of(second)
    key = (first, second) if i < j else (second, first)
    if i < j:
        freq = reconstruct_pair_frequencies(
            stats.p_a,
            stats.accuracy_a[i], stats.accuracy_a[j],
            stats.accuracy_b[i], stats.accuracy_b[j],
            stats.gamma_a[key], stats.gamma_b[key],
        )
    else:
        swapped = reconstruct_pair_frequencies(
            stats.p_a,
            stats.accuracy_a[j], stats.accuracy_a[i],
            stats.accuracy_b[j], stats.accuracy_b[i],
            stats.gamma_a[key], stats.gamma_b[key],
        )
        freq = {
            "aa": swapped["aa"],
            "ab": swapped["ba"],
            "ba": swapped["ab"],
            "bb": swapped["bb"],
        }
    out: dict[str, int] = {}
    for pattern, value in freq.items():
        scaled = value * sketch.q
        if scaled.denominator != 1:
            raise SketchError(
                f"pair reconstruction produced a non-integer count for {pattern}: {scaled}"
            )
        out[pattern] = int(scaled)
    return out


def sketch_point(sketch: EvaluationSketch) -> "EvaluationPoint":
    """The evaluation point actually realized by a truth-split sketch."""
    from .model import EvaluationPoint

    if sketch.truth_split is None:
        raise SketchError("sketch has no truth split")
    q_a = sum(a for a, _ in sketch.truth_split.values())
    ids = sketch.classifiers
    c_a: list[int] = []
    c_b: list[int] = []
    for cid in ids:
        on_a, on_b = correct_counts(sketch, cid)
        c_a.append(on_a)
        c_b.append(on_b)
    pairs: dict[tuple[int, int], tuple[int, int]] = {}
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            pairs[(i, j)] = joint_correct_counts(sketch, ids[i], ids[j])
    return EvaluationPoint(q_a, tuple(c_a), tuple(c_b), pairs)


def point_axiom_violations(sketch: EvaluationSketch, point: "EvaluationPoint") -> list[str]:
    """Axiom failures of a claimed point against a sketch's counts.

    Checks each classifier's residual and interval membership, then each
    claimed pair's forced true-b sum and feasibility window.  Bound
    violations (see :func:`model.point_bound_violations`) are assumed
    already reported by the caller.
    """
    problems: list[str] = []
    ids = sketch.classifiers
    if point.size != len(ids):
        return [f"point has {point.size} classifiers, sketch has {len(ids)}"]
    q = sketch.q
    q_a = point.q_a
    margs = [marginalize(sketch, cid) for cid in ids]
    for k, cid in enumerate(ids):
        res = single_axiom_residual(
            q, q_a, point.correct_a[k], point.correct_b[k], margs[k]
        )
        if res != 0:
            problems.append(
                f"classifier {cid}: correctness counts inconsistent with its "
                f"response totals (residual {res})"
            )
        ia = feasible_interval_label_a(q, q_a, margs[k])
        if point.correct_a[k] not in ia:
            problems.append(
                f"classifier {cid}: correct_a={point.correct_a[k]} outside "
                f"feasible interval [{ia.lo}, {ia.hi}]"
            )
        ib = feasible_interval_label_b(q, q_a, margs[k])
        if point.correct_b[k] not in ib:
            problems.append(
                f"classifier {cid}: correct_b={point.correct_b[k]} outside "
                f"feasible interval [{ib.lo}, {ib.hi}]"
            )
    if problems or not point.pair_correct:
        return problems
    for (i, j), (ja, jb) in point.pair_correct.items():
        pair = pair_counts(sketch, ids[i], ids[j])
        forced_sum = pair_axiom_sum(
            q, q_a, margs[i], margs[j], pair["aa"],
            point.correct_a[i], point.correct_a[j],
        )
        if ja + jb != forced_sum:
            problems.append(
                f"pair ({ids[i]}, {ids[j]}): joint correctness counts sum to "
                f"{ja + jb}, but the response table forces {forced_sum}"
            )
        window = joint_correct_a_window(q_a, pair, point.correct_a[i], point.correct_a[j])
        if ja not in window:
            problems.append(
                f"pair ({ids[i]}, {ids[j]}): joint true-a correctness {ja} outside "
                f"feasible window [{window.lo}, {window.hi}]"
            )
    return problems
