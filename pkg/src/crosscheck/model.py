"""Exact count statistics for joint binary decisions on a shared test.

The observable record of an evaluation is a sketch: for every joint
decision pattern the classifiers can produce, the number of test items
that produced it, optionally split by the true label when an answer key
is available.  Counts are plain Python integers and ratios appear only
as `fractions.Fraction` values; nothing in this module touches floats.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Literal, Mapping, NamedTuple, Sequence

LABEL_A = "a"
LABEL_B = "b"
LABELS = (LABEL_A, LABEL_B)

FlipMode = Literal["global", "true-a", "true-b"]
FLIP_MODES: tuple[FlipMode, ...] = ("global", "true-a", "true-b")


class SketchError(ValueError):
    """Structurally invalid sketch data or a bad argument to a sketch op."""


def other_label(label: str) -> str:
    if label == LABEL_A:
        return LABEL_B
    if label == LABEL_B:
        return LABEL_A
    raise SketchError(f"unknown label {label!r}; expected one of {LABELS}")


def all_patterns(size: int) -> list[str]:
    """All 2**size joint decision patterns in lexicographic order."""
    return ["".join(p) for p in itertools.product(LABELS, repeat=size)]


def flip_position(pattern: str, index: int) -> str:
    return pattern[:index] + other_label(pattern[index]) + pattern[index + 1 :]


class Marginals(NamedTuple):
    """How often one classifier said each label across the whole test."""

    r_a: int
    r_b: int


@dataclass(frozen=True)
class EvaluationSketch:
    """Counts of joint decision patterns produced on a test of ``q`` items.

    ``counts`` maps pattern strings over the alphabet "ab" (position k
    is classifier k's response) to item counts.  ``truth_split``
    optionally refines each pattern count into a pair (items whose true
    label is a, items whose true label is b).  Zero entries are dropped
    on construction so equal sketches compare equal; instances are
    immutable after construction.

    Construction checks only structure (key shape, roster sanity).
    Numeric consistency is the job of :func:`validate_sketch`, so that
    deliberately inconsistent sketches can still be built and reported.
    """

    classifiers: tuple[str, ...]
    q: int
    counts: Mapping[str, int]
    truth_split: Mapping[str, tuple[int, int]] | None = None

    def __post_init__(self) -> None:
        ids = tuple(self.classifiers)
        if not ids:
            raise SketchError("a sketch needs at least one classifier")
        if any(not isinstance(c, str) or not c for c in ids):
            raise SketchError("classifier ids must be non-empty strings")
        if len(set(ids)) != len(ids):
            raise SketchError("classifier ids must be unique")
        if not isinstance(self.q, int) or isinstance(self.q, bool) or self.q < 1:
            raise SketchError("q must be a positive integer")
        size = len(ids)
        counts: dict[str, int] = {}
        for pattern in sorted(self.counts):
            self._check_pattern(pattern, size)
            value = self.counts[pattern]
            if not isinstance(value, int) or isinstance(value, bool):
                raise SketchError(f"count for pattern {pattern!r} must be an integer")
            if value != 0:
                counts[pattern] = value
        split: dict[str, tuple[int, int]] | None = None
        if self.truth_split is not None:
            split = {}
            for pattern in sorted(self.truth_split):
                self._check_pattern(pattern, size)
                entry = tuple(self.truth_split[pattern])
                if len(entry) != 2 or any(
                    not isinstance(v, int) or isinstance(v, bool) for v in entry
                ):
                    raise SketchError(
                        f"truth split for pattern {pattern!r} must be a pair of integers"
                    )
                if entry != (0, 0):
                    split[pattern] = (entry[0], entry[1])
        object.__setattr__(self, "classifiers", ids)
        object.__setattr__(self, "counts", MappingProxyType(counts))
        object.__setattr__(
            self, "truth_split", MappingProxyType(split) if split is not None else None
        )

    @staticmethod
    def _check_pattern(pattern: object, size: int) -> None:
        if (
            not isinstance(pattern, str)
            or len(pattern) != size
            or any(c not in LABELS for c in pattern)
        ):
            raise SketchError(
                f"bad pattern key {pattern!r}: want length {size} over alphabet 'ab'"
            )

    @property
    def size(self) -> int:
        return len(self.classifiers)

    @property
    def has_truth(self) -> bool:
        return self.truth_split is not None

    def index_of(self, classifier: str) -> int:
        try:
            return self.classifiers.index(classifier)
        except ValueError:
            raise SketchError(
                f"unknown classifier {classifier!r}; roster is {list(self.classifiers)}"
            ) from None


def sketch_from_decisions(
    decisions: Mapping[str, Mapping[str, str]],
    classifiers: Sequence[str],
    truth: Mapping[str, str] | None = None,
) -> EvaluationSketch:
    """Aggregate per-item decisions into a sketch.

    ``decisions`` maps item id to {classifier id: canonical label}; every
    item must carry a response from every classifier in ``classifiers``.
    When ``truth`` is given it must cover every item, and the resulting
    sketch carries a truth split.
    """
    ids = tuple(classifiers)
    if not decisions:
        raise SketchError("no items to sketch")
    counts: dict[str, int] = {}
    split: dict[str, list[int]] | None = None if truth is None else {}
    for item, row in decisions.items():
        responses = []
        for cid in ids:
            if cid not in row:
                raise SketchError(f"item {item!r} has no response from classifier {cid!r}")
            label = row[cid]
            if label not in LABELS:
                raise SketchError(
                    f"item {item!r}, classifier {cid!r}: label {label!r} is not canonical"
                )
            responses.append(label)
        pattern = "".join(responses)
        counts[pattern] = counts.get(pattern, 0) + 1
        if split is not None:
            assert truth is not None
            if item not in truth:
                raise SketchError(f"truth label missing for item {item!r}")
            t = truth[item]
            if t not in LABELS:
                raise SketchError(f"item {item!r}: truth label {t!r} is not canonical")
            entry = split.setdefault(pattern, [0, 0])
            entry[0 if t == LABEL_A else 1] += 1
    return EvaluationSketch(
        ids,
        len(decisions),
        counts,
        None if split is None else {p: (a, b) for p, (a, b) in split.items()},
    )


def marginalize(sketch: EvaluationSketch, classifier: str) -> Marginals:
    """Response totals (said a, said b) for one classifier."""
    idx = sketch.index_of(classifier)
    r_a = 0
    r_b = 0
    for pattern, n in sketch.counts.items():
        if pattern[idx] == LABEL_A:
            r_a += n
        else:
            r_b += n
    return Marginals(r_a, r_b)


def pair_counts(sketch: EvaluationSketch, first: str, second: str) -> dict[str, int]:
    """Joint decision counts for an ordered pair, keyed "aa".."bb"."""
    i = sketch.index_of(first)
    j = sketch.index_of(second)
    if i == j:
        raise SketchError("pair counts need two distinct classifiers")
    out = {"aa": 0, "ab": 0, "ba": 0, "bb": 0}
    for pattern, n in sketch.counts.items():
        out[pattern[i] + pattern[j]] += n
    return out


def validate_sketch(sketch: EvaluationSketch) -> list[str]:
    """Numeric consistency violations, empty when the sketch is sound."""
    problems: list[str] = []
    for pattern in sorted(sketch.counts):
        if sketch.counts[pattern] < 0:
            problems.append(f"negative count for pattern {pattern}")
    total = sum(sketch.counts.values())
    if total != sketch.q:
        problems.append(f"pattern counts do not sum to Q (got {total}, expected {sketch.q})")
    if sketch.truth_split is not None:
        patterns = sorted(set(sketch.counts) | set(sketch.truth_split))
        for pattern in patterns:
            n_a, n_b = sketch.truth_split.get(pattern, (0, 0))
            if n_a < 0 or n_b < 0:
                problems.append(f"negative truth split for pattern {pattern}")
            expected = sketch.counts.get(pattern, 0)
            if n_a + n_b != expected:
                problems.append(
                    f"truth split mismatch for pattern {pattern} "
                    f"({n_a}+{n_b} != {expected})"
                )
    return problems


def flip_labels(
    sketch: EvaluationSketch, classifier: str, mode: FlipMode
) -> EvaluationSketch:
    """Relabel one classifier's responses.

    "global" swaps the classifier's letter in every pattern.  "true-a"
    and "true-b" swap it only on items whose true label is a (resp. b),
    and therefore need a truth split.  Every mode is an involution.
    """
    if mode not in FLIP_MODES:
        raise SketchError(f"unknown flip mode {mode!r}; expected one of {FLIP_MODES}")
    idx = sketch.index_of(classifier)
    if mode == "global":
        counts = {flip_position(p, idx): n for p, n in sketch.counts.items()}
        split = None
        if sketch.truth_split is not None:
            split = {flip_position(p, idx): v for p, v in sketch.truth_split.items()}
        return EvaluationSketch(sketch.classifiers, sketch.q, counts, split)
    if sketch.truth_split is None:
        raise SketchError(f"flip mode {mode!r} needs a truth split")
    mismatch = [p for p in validate_sketch(sketch) if "truth split" in p]
    if mismatch:
        raise SketchError(
            "cannot apply a truth-conditioned flip to an inconsistent sketch: "
            + "; ".join(mismatch)
        )
    new_split: dict[str, list[int]] = {}

    def bump(pattern: str, part_a: int, part_b: int) -> None:
        entry = new_split.setdefault(pattern, [0, 0])
        entry[0] += part_a
        entry[1] += part_b

    for pattern in set(sketch.counts) | set(sketch.truth_split):
        n_a, n_b = sketch.truth_split.get(pattern, (0, 0))
        flipped = flip_position(pattern, idx)
        if mode == "true-a":
            bump(flipped, n_a, 0)
            bump(pattern, 0, n_b)
        else:
            bump(pattern, n_a, 0)
            bump(flipped, 0, n_b)
    counts = {p: a + b for p, (a, b) in new_split.items()}
    split = {p: (a, b) for p, (a, b) in new_split.items()}
    return EvaluationSketch(sketch.classifiers, sketch.q, counts, split)


def truth_prevalence(sketch: EvaluationSketch) -> int:
    """Number of items whose true label is a, from the truth split."""
    if sketch.truth_split is None:
        raise SketchError("sketch has no truth split")
    return sum(a for a, _ in sketch.truth_split.values())


def correct_counts(sketch: EvaluationSketch, classifier: str) -> tuple[int, int]:
    """(correct on true-a items, correct on true-b items) for one classifier."""
    if sketch.truth_split is None:
        raise SketchError("sketch has no truth split")
    idx = sketch.index_of(classifier)
    on_a = 0
    on_b = 0
    for pattern, (n_a, n_b) in sketch.truth_split.items():
        if pattern[idx] == LABEL_A:
            on_a += n_a
        else:
            on_b += n_b
    return on_a, on_b


def joint_correct_counts(
    sketch: EvaluationSketch, first: str, second: str
) -> tuple[int, int]:
    """(both correct on true-a, both correct on true-b) for a pair."""
    if sketch.truth_split is None:
        raise SketchError("sketch has no truth split")
    i = sketch.index_of(first)
    j = sketch.index_of(second)
    if i == j:
        raise SketchError("joint correct counts need two distinct classifiers")
    on_a = 0
    on_b = 0
    for pattern, (n_a, n_b) in sketch.truth_split.items():
        if pattern[i] == LABEL_A and pattern[j] == LABEL_A:
            on_a += n_a
        elif pattern[i] == LABEL_B and pattern[j] == LABEL_B:
            on_b += n_b
    return on_a, on_b


def reorder(sketch: EvaluationSketch, order: Sequence[str]) -> EvaluationSketch:
    """Permute the roster; pattern keys are rewritten to match."""
    ids = tuple(order)
    if sorted(ids) != sorted(sketch.classifiers):
        raise SketchError("reorder must permute the existing roster exactly")
    perm = [sketch.index_of(cid) for cid in ids]

    def remap(pattern: str) -> str:
        return "".join(pattern[k] for k in perm)

    counts = {remap(p): n for p, n in sketch.counts.items()}
    split = None
    if sketch.truth_split is not None:
        split = {remap(p): v for p, v in sketch.truth_split.items()}
    return EvaluationSketch(ids, sketch.q, counts, split)


def project(sketch: EvaluationSketch, keep: Sequence[str]) -> EvaluationSketch:
    """Marginalize onto a sub-roster by summing over the dropped positions."""
    ids = tuple(keep)
    if len(set(ids)) != len(ids) or not ids:
        raise SketchError("projection roster must be a non-empty set of distinct ids")
    indices = [sketch.index_of(cid) for cid in ids]
    counts: dict[str, int] = {}
    for pattern, n in sketch.counts.items():
        short = "".join(pattern[k] for k in indices)
        counts[short] = counts.get(short, 0) + n
    split: dict[str, tuple[int, int]] | None = None
    if sketch.truth_split is not None:
        acc: dict[str, list[int]] = {}
        for pattern, (n_a, n_b) in sketch.truth_split.items():
            short = "".join(pattern[k] for k in indices)
            entry = acc.setdefault(short, [0, 0])
            entry[0] += n_a
            entry[1] += n_b
        split = {p: (a, b) for p, (a, b) in acc.items()}
    return EvaluationSketch(ids, sketch.q, counts, split)


@dataclass(frozen=True)
class EvaluationPoint:
    """A candidate ground truth: the unobservable correctness counts.

    ``pair_correct`` maps index pairs (i, j) with i < j to the pair's
    joint correct counts (both right on true-a items, both right on
    true-b items).  Bounds relative to a test are checked separately by
    :func:`point_bound_violations` so claimed points from untrusted
    summaries can be represented and then reported on.
    """

    q_a: int
    correct_a: tuple[int, ...]
    correct_b: tuple[int, ...]
    pair_correct: Mapping[tuple[int, int], tuple[int, int]] | None = None

    def __post_init__(self) -> None:
        c_a = tuple(self.correct_a)
        c_b = tuple(self.correct_b)
        if len(c_a) != len(c_b):
            raise SketchError("correct_a and correct_b must have one entry per classifier")
        pairs = None
        if self.pair_correct is not None:
            pairs = {}
            for key in sorted(self.pair_correct):
                i, j = key
                if not 0 <= i < j < len(c_a):
                    raise SketchError(f"bad pair key {key!r} for {len(c_a)} classifiers")
                ja, jb = self.pair_correct[key]
                pairs[(i, j)] = (ja, jb)
        object.__setattr__(self, "correct_a", c_a)
        object.__setattr__(self, "correct_b", c_b)
        object.__setattr__(
            self, "pair_correct", MappingProxyType(pairs) if pairs is not None else None
        )

    @property
    def size(self) -> int:
        return len(self.correct_a)


def point_bound_violations(point: EvaluationPoint, q: int) -> list[str]:
    """Lattice-bound violations of a point relative to a test of size q."""
    problems: list[str] = []
    q_a = point.q_a
    if not 0 <= q_a <= q:
        problems.append(f"q_a={q_a} outside [0, {q}]")
    q_b = q - q_a
    for i, (c_a, c_b) in enumerate(zip(point.correct_a, point.correct_b)):
        if not 0 <= c_a <= max(q_a, 0):
            problems.append(f"correct_a[{i}]={c_a} outside [0, {q_a}]")
        if not 0 <= c_b <= max(q_b, 0):
            problems.append(f"correct_b[{i}]={c_b} outside [0, {q_b}]")
    if point.pair_correct:
        for (i, j), (ja, jb) in point.pair_correct.items():
            cap_a = min(point.correct_a[i], point.correct_a[j])
            cap_b = min(point.correct_b[i], point.correct_b[j])
            if not 0 <= ja <= cap_a:
                problems.append(
                    f"pair ({i},{j}) joint correct on a is {ja}, outside [0, {cap_a}]"
                )
            if not 0 <= jb <= cap_b:
                problems.append(
                    f"pair ({i},{j}) joint correct on b is {jb}, outside [0, {cap_b}]"
                )
    return problems


@dataclass(frozen=True)
class PerLabelSpec:
    """Require accuracy above a threshold on each label separately.

    With ``strict`` set (the default) the comparison is a strict
    inequality; a label with no items is vacuously satisfied.
    """

    threshold_a: Fraction
    threshold_b: Fraction
    strict: bool = True

    def __post_init__(self) -> None:
        t_a = Fraction(self.threshold_a)
        t_b = Fraction(self.threshold_b)
        for name, t in (("threshold_a", t_a), ("threshold_b", t_b)):
            if not 0 <= t <= 1:
                raise ValueError(f"{name}={t} outside [0, 1]")
        object.__setattr__(self, "threshold_a", t_a)
        object.__setattr__(self, "threshold_b", t_b)

    def swapped(self) -> "PerLabelSpec":
        return PerLabelSpec(self.threshold_b, self.threshold_a, self.strict)


@dataclass(frozen=True)
class OverallSpec:
    """Require prevalence-weighted overall accuracy above a threshold."""

    threshold: Fraction
    strict: bool = True

    def __post_init__(self) -> None:
        t = Fraction(self.threshold)
        if not 0 <= t <= 1:
            raise ValueError(f"threshold={t} outside [0, 1]")
        object.__setattr__(self, "threshold", t)


SafetySpec = PerLabelSpec | OverallSpec


@dataclass(frozen=True)
class PSpaceStats:
    """Exact ratio statistics of a truth-split sketch.

    Per-classifier accuracies are None when their label has no items.
    ``gamma_a``/``gamma_b`` are the pair correlations of correctness
    within each label (None when undefined); ``delta`` is the observable
    pattern covariance of each pair, which never needs the truth split.
    Mapping keys are classifier id pairs in roster order.
    """

    classifiers: tuple[str, ...]
    p_a: Fraction
    p_b: Fraction
    accuracy_a: tuple[Fraction | None, ...]
    accuracy_b: tuple[Fraction | None, ...]
    gamma_a: Mapping[tuple[str, str], Fraction | None]
    gamma_b: Mapping[tuple[str, str], Fraction | None]
    delta: Mapping[tuple[str, str], Fraction]

    def __post_init__(self) -> None:
        object.__setattr__(self, "classifiers", tuple(self.classifiers))
        object.__setattr__(self, "gamma_a", MappingProxyType(dict(self.gamma_a)))
        object.__setattr__(self, "gamma_b", MappingProxyType(dict(self.gamma_b)))
        object.__setattr__(self, "delta", MappingProxyType(dict(self.delta)))
