from fractions import Fraction

import pytest
from hypothesis import given, settings

from crosscheck import (
    BudgetExceededError,
    EvaluationPoint,
    EvaluationSketch,
    LABEL_A,
    Marginals,
    SketchError,
    SummaryClaims,
    check_summary,
    count_feasible,
    enumerate_evaluations,
    enumerate_variety,
    evaluation_count,
    sketch_point,
    split_combinations,
    variety_is_empty,
)

from ._strategies import sketches


class TestEnumeration:
    def test_small_counts(self):
        assert evaluation_count(0) == 1
        assert evaluation_count(1) == 4
        assert evaluation_count(2) == 10
        assert evaluation_count(3) == 20

    def test_count_matches_walk(self):
        for q in range(12):
            assert len(list(enumerate_evaluations(q))) == evaluation_count(q)

    def test_zero_items(self):
        points = list(enumerate_evaluations(0))
        assert points == [EvaluationPoint(0, (0,), (0,))]

    def test_negative_rejected(self):
        with pytest.raises(SketchError):
            list(enumerate_evaluations(-1))

    def test_points_respect_bounds(self):
        for point in enumerate_evaluations(5):
            assert 0 <= point.q_a <= 5
            assert 0 <= point.correct_a[0] <= point.q_a
            assert 0 <= point.correct_b[0] <= 5 - point.q_a

    def test_no_duplicates(self):
        points = list(enumerate_evaluations(6))
        assert len(points) == len(set(points))


class TestVariety:
    def test_single_agreeing_item(self):
        sketch = EvaluationSketch(("u", "v"), 1, {"aa": 1})
        points = list(enumerate_variety(sketch))
        assert len(points) == 2
        truths = {vp.true_a_split["aa"] for vp in points}
        assert truths == {0, 1}

    def test_two_item_one_classifier(self):
        sketch = EvaluationSketch(("u",), 2, {"a": 1, "b": 1})
        assert len(list(enumerate_variety(sketch))) == 4

    def test_qa_filter(self):
        sketch = EvaluationSketch(("u", "v"), 3, {"aa": 2, "ab": 1})
        for q_a in range(4):
            for vp in enumerate_variety(sketch, q_a=q_a):
                assert vp.point.q_a == q_a
                assert sum(vp.true_a_split.values()) == q_a

    def test_split_combinations(self):
        sketch = EvaluationSketch(("u", "v"), 3, {"aa": 2, "ab": 1})
        assert split_combinations(sketch) == 3 * 2

    def test_budget(self):
        sketch = EvaluationSketch(("u",), 9, {"a": 4, "b": 5})
        with pytest.raises(BudgetExceededError):
            list(enumerate_variety(sketch, budget=20))
        assert len(list(enumerate_variety(sketch, budget=30))) == 30

    def test_invalid_sketch_rejected(self):
        bad = EvaluationSketch(("u",), 3, {"a": 1})
        with pytest.raises(SketchError):
            list(enumerate_variety(bad))

    def test_points_match_their_splits(self):
        sketch = EvaluationSketch(("u", "v"), 4, {"aa": 1, "ab": 2, "bb": 1})
        for vp in enumerate_variety(sketch):
            c_a = [0, 0]
            c_b = [0, 0]
            for pattern, n in sketch.counts.items():
                n_a = vp.true_a_split.get(pattern, 0)
                for k in range(2):
                    if pattern[k] == LABEL_A:
                        c_a[k] += n_a
                    else:
                        c_b[k] += n - n_a
            assert vp.point.correct_a == tuple(c_a)
            assert vp.point.correct_b == tuple(c_b)

    @given(sketches(max_count=3))
    @settings(max_examples=50)
    def test_never_empty_for_real_counts(self, sketch):
        assert not variety_is_empty(sketch)

    @given(sketches(with_truth=True, max_count=3))
    @settings(max_examples=50, deadline=None)
    def test_realized_point_is_enumerated(self, sketch):
        real = sketch_point(sketch)
        found = any(
            vp.point == real
            for vp in enumerate_variety(sketch, q_a=real.q_a)
        )
        assert found


class TestCountFeasible:
    def test_frozen(self):
        assert count_feasible(1, Marginals(1, 0)) == 2
        assert count_feasible(2, Marginals(1, 1)) == 4

    def test_marginals_must_sum(self):
        with pytest.raises(SketchError):
            count_feasible(3, Marginals(1, 1))

    def test_feasible_share_shrinks(self):
        shares = []
        for q in (10, 20, 40):
            feasible = count_feasible(q, Marginals(q // 2, q - q // 2))
            shares.append(Fraction(feasible, evaluation_count(q)))
        assert shares[0] > shares[1] > shares[2]


class TestCheckSummary:
    def test_clean_sketch_no_claims(self):
        small = EvaluationSketch(("u", "v"), 2, {"aa": 1, "bb": 1})
        report = check_summary(small, SummaryClaims({}))
        assert report.ok
        assert report.variety_empty is False
        assert not report.axioms_only

    def test_invalid_sketch_reported_not_raised(self):
        bad = EvaluationSketch(("u",), 3, {"a": 1})
        report = check_summary(bad, SummaryClaims({}))
        assert not report.ok
        assert "pattern counts do not sum to Q (got 1, expected 3)" in report.violations
        assert report.variety_empty is None

    def test_unknown_classifier_claim(self):
        sketch = EvaluationSketch(("u",), 1, {"a": 1})
        report = check_summary(sketch, SummaryClaims({"w": Marginals(1, 0)}))
        assert report.violations == ("claimed marginals for unknown classifier w",)

    def test_marginal_mismatch(self):
        sketch = EvaluationSketch(("u",), 2, {"a": 1, "b": 1})
        report = check_summary(sketch, SummaryClaims({"u": Marginals(2, 0)}))
        assert report.violations == (
            "classifier u: claimed totals (2, 0) differ from actual (1, 1)",
        )

    def test_marginal_match(self):
        sketch = EvaluationSketch(("u",), 2, {"a": 1, "b": 1})
        report = check_summary(sketch, SummaryClaims({"u": Marginals(1, 1)}))
        assert report.ok

    def test_true_point_passes(self):
        small = EvaluationSketch(
            ("u", "v"), 3, {"aa": 1, "ab": 1, "bb": 1},
            {"aa": (1, 0), "ab": (1, 0), "bb": (0, 1)},
        )
        point = sketch_point(small)
        report = check_summary(small, SummaryClaims({}, point))
        assert report.ok
        assert report.variety_empty is False

    def test_out_of_bounds_point(self):
        sketch = EvaluationSketch(("u",), 4, {"a": 2, "b": 2})
        point = EvaluationPoint(10, (0,), (0,))
        report = check_summary(sketch, SummaryClaims({}, point))
        assert "q_a=10 outside [0, 4]" in report.violations
        assert "no ground truth with q_a=10 realizes this sketch" in report.violations

    def test_axiom_violating_point(self):
        sketch = EvaluationSketch(("u",), 4, {"a": 2, "b": 2})
        # r_a=2 at q_a=2 allows correct_a in [0, 2], but correct_b is then forced
        point = EvaluationPoint(2, (2,), (0,))
        report = check_summary(sketch, SummaryClaims({}, point))
        assert not report.ok
        assert any("residual" in v for v in report.violations)

    def test_jointly_unrealizable_singles(self):
        # each count is feasible alone; no single ground truth gives both
        sketch = EvaluationSketch(("u", "v"), 4, {"ab": 2, "ba": 2})
        point = EvaluationPoint(3, (2, 2), (1, 1))
        report = check_summary(sketch, SummaryClaims({}, point))
        assert report.violations == (
            "claimed point is not realized by any ground truth with q_a=3",
        )

    def test_budget_skip(self):
        sketch = EvaluationSketch(("u",), 9, {"a": 4, "b": 5})
        report = check_summary(sketch, SummaryClaims({}), budget=3)
        assert report.ok
        assert report.axioms_only
        assert report.variety_empty is None
