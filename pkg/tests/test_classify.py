import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jsonbag.bags import NormalizedBag, build_bag, normalize
from jsonbag.classify import (
    LabeledDataset,
    classify,
    evaluate,
    fit_pnns,
    n_shot_eval,
    stratified_split,
    wilson_interval,
)
from jsonbag.metrics import js_distance


def synthetic_bag(rng, weights):
    """Draw 60 tokens from a fixed per-class token distribution."""
    tokens = rng.choices(list(weights), weights=list(weights.values()), k=60)
    return normalize(build_bag(tokens))


CLASS_WEIGHTS = {
    "A": {"a": 6, "b": 2, "c": 1, "d": 1},
    "B": {"a": 1, "b": 6, "c": 2, "d": 1},
    "C": {"a": 1, "b": 1, "c": 2, "d": 6},
}


def synthetic_dataset(per_class=20, seed=11):
    rng = random.Random(seed)
    items = []
    for label, weights in CLASS_WEIGHTS.items():
        for _ in range(per_class):
            items.append((synthetic_bag(rng, weights), label))
    return items


class TestWilson:
    def test_perfect_hundred(self):
        lo, hi = wilson_interval(100, 100)
        assert (lo, hi) == pytest.approx((0.9630065017930143, 1.0), abs=1e-12)

    def test_eighty_of_hundred(self):
        lo, hi = wilson_interval(80, 100)
        assert (lo, hi) == pytest.approx(
            (0.7111708344068411, 0.8666330666689676), abs=1e-12
        )

    def test_satisfies_defining_equation(self):
        # Interval endpoints p solve |phat - p| = z*sqrt(p(1-p)/n).
        z = 1.959963984540054
        for s, n in [(1, 10), (5, 9), (37, 80), (99, 100)]:
            phat = s / n
            for p in wilson_interval(s, n):
                if p in (0.0, 1.0):
                    continue
                assert abs(phat - p) == pytest.approx(
                    z * math.sqrt(p * (1 - p) / n), abs=1e-10
                )

    def test_zero_n_rejected(self):
        with pytest.raises(ValueError):
            wilson_interval(0, 0)


class TestStratifiedSplit:
    def test_per_class_counts_balanced(self):
        items = synthetic_dataset(per_class=10)
        train, test = stratified_split(items, seed=3)
        assert len(train) == len(test) == 15
        for label in CLASS_WEIGHTS:
            assert sum(1 for _, l in train if l == label) == 5
            assert sum(1 for _, l in test if l == label) == 5

    def test_odd_class_extra_goes_to_train(self):
        items = [(NormalizedBag({"t": 1.0}), "A")] * 5
        train, test = stratified_split(items, seed=0)
        assert len(train) == 3 and len(test) == 2

    def test_disjoint_and_complete(self):
        items = synthetic_dataset(per_class=9)
        train, test = stratified_split(items, seed=1)
        assert len(train) + len(test) == len(items)

    def test_reproducible(self):
        items = synthetic_dataset(per_class=8)
        assert stratified_split(items, seed=7) == stratified_split(items, seed=7)


class TestFitAndClassify:
    def test_single_item_prototypes_equal_items(self):
        a, b = NormalizedBag({"x": 1.0}), NormalizedBag({"y": 1.0})
        model = fit_pnns([(a, "A"), (b, "B")], "jsd")
        assert model.prototypes[0].freqs == a
        assert model.prototypes[1].freqs == b

    def test_identical_classes_flagged_degenerate(self, caplog):
        bag = NormalizedBag({"x": 1.0})
        with caplog.at_level("WARNING"):
            fit_pnns([(bag, "A"), (bag, "B")], "jsd")
        assert any("degenerate" in rec.message for rec in caplog.records)

    def test_three_synthetic_classes_have_distinct_prototypes(self):
        model = fit_pnns(synthetic_dataset(), "jsd")
        for i in range(3):
            for j in range(i + 1, 3):
                d = js_distance(model.prototypes[i].freqs, model.prototypes[j].freqs)
                assert d > 0.0

    def test_item_equal_to_prototype_classified_as_it(self):
        a, b = NormalizedBag({"x": 1.0}), NormalizedBag({"y": 1.0})
        model = fit_pnns([(a, "A"), (b, "B")], "jsd")
        assert classify(a, model) == "A"
        assert classify(b, model) == "B"

    def test_exact_tie_breaks_lexicographically(self):
        model = fit_pnns(
            [(NormalizedBag({"x": 1.0}), "B"), (NormalizedBag({"y": 1.0}), "A")], "jsd"
        )
        # equidistant from both prototypes
        probe = NormalizedBag({"x": 0.5, "y": 0.5})
        assert classify(probe, model) == "A"

    def test_nearer_prototype_wins(self):
        a = NormalizedBag({"x": 0.9, "y": 0.1})
        b = NormalizedBag({"x": 0.1, "y": 0.9})
        model = fit_pnns([(a, "A"), (b, "B")], "jsd")
        probe = NormalizedBag({"x": 0.8, "y": 0.2})
        assert js_distance(probe, a) < js_distance(probe, b)
        assert classify(probe, model) == "A"

    def test_classify_invariant_under_monotone_transform(self):
        model = fit_pnns(synthetic_dataset(per_class=5), "jsd")
        rng = random.Random(2)
        for _ in range(20):
            probe = synthetic_bag(rng, CLASS_WEIGHTS["B"])
            distances = {p.label: js_distance(probe, p.freqs) for p in model.prototypes}
            squared = {l: d * d for l, d in distances.items()}  # strictly monotone on [0,1]
            assert min(distances, key=lambda l: (distances[l], l)) == min(
                squared, key=lambda l: (squared[l], l)
            ) == classify(probe, model)

    def test_unknown_metric_rejected(self):
        with pytest.raises(ValueError):
            fit_pnns([(NormalizedBag({"x": 1.0}), "A")], "manhattan")


class TestVectorMetricModels:
    def test_cosine_and_l2_fit_and_classify(self):
        items = synthetic_dataset(per_class=12)
        train, test = stratified_split(items, seed=5)
        for metric in ("cosine", "l2"):
            model = fit_pnns(train, metric)
            result = evaluate(test, model)
            assert result.accuracy > 0.5  # far above the 1/3 chance level

    def test_one_hot_vector_classification(self):
        a, b = NormalizedBag({"x": 1.0}), NormalizedBag({"y": 1.0})
        for metric in ("cosine", "l2"):
            model = fit_pnns([(a, "A"), (a, "A"), (b, "B"), (b, "B")], metric)
            assert classify(NormalizedBag({"x": 0.9, "y": 0.1}), model) == "A"
            assert classify(NormalizedBag({"x": 0.1, "y": 0.9}), model) == "B"


class TestEvaluate:
    def test_all_correct_ci(self):
        bag_a, bag_b = NormalizedBag({"x": 1.0}), NormalizedBag({"y": 1.0})
        model = fit_pnns([(bag_a, "A"), (bag_b, "B")], "jsd")
        test = [(bag_a, "A")] * 50 + [(bag_b, "B")] * 50
        result = evaluate(test, model)
        assert result.accuracy == 1.0
        assert result.ci_low >= 0.96 and result.ci_high == 1.0
        assert np.trace(result.confusion.counts) == 100

    def test_accuracy_equals_confusion_trace_ratio(self):
        items = synthetic_dataset(per_class=16)
        train, test = stratified_split(items, seed=9)
        result = evaluate(test, fit_pnns(train, "jsd"))
        cm = result.confusion
        assert result.accuracy == np.trace(cm.counts) / cm.counts.sum()

    def test_random_guessing_near_chance(self):
        # Identical class distributions: the classifier cannot beat chance.
        rng = random.Random(4)
        weights = {"a": 1, "b": 1, "c": 1}
        items = [
            (synthetic_bag(rng, weights), label)
            for label in ("A", "B", "C", "D")
            for _ in range(250)
        ]
        train, test = stratified_split(items, seed=2)
        result = evaluate(test, fit_pnns(train, "jsd"))
        assert abs(result.accuracy - 0.25) < 0.05

    def test_perfect_accuracy_iff_diagonal(self):
        items = synthetic_dataset(per_class=10)
        train, test = stratified_split(items, seed=0)
        result = evaluate(test, fit_pnns(train, "jsd"))
        off_diagonal = result.confusion.counts.sum() - np.trace(result.confusion.counts)
        assert (result.accuracy == 1.0) == (off_diagonal == 0)

    def test_unseen_test_label_rejected(self):
        model = fit_pnns([(NormalizedBag({"x": 1.0}), "A")], "jsd")
        with pytest.raises(ValueError):
            evaluate([(NormalizedBag({"x": 1.0}), "Z")], model)

    def test_confusion_csv(self, tmp_path):
        items = synthetic_dataset(per_class=6)
        train, test = stratified_split(items, seed=0)
        result = evaluate(test, fit_pnns(train, "jsd"))
        path = tmp_path / "cm.csv"
        result.confusion.to_csv(path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "true\\predicted,A,B,C"
        assert len(lines) == 4


class TestNShot:
    def test_separable_classes_at_three_shot(self):
        a, b = NormalizedBag({"x": 1.0}), NormalizedBag({"y": 1.0})
        items = [(a, "A")] * 12 + [(b, "B")] * 12
        result = n_shot_eval(items, "jsd", n_values=(3,), trials=5, seed=1)
        assert result.mean(3) == 1.0

    def test_accuracy_grows_with_n_on_noisy_data(self):
        items = synthetic_dataset(per_class=60, seed=21)
        result = n_shot_eval(items, "jsd", n_values=(1, 40), trials=10, seed=3)
        assert result.mean(40) >= result.mean(1)

    def test_matches_manual_protocol(self):
        from jsonbag.classify import _group, _sample_split

        items = synthetic_dataset(per_class=10)
        seed, n = 5, 4
        result = n_shot_eval(items, "jsd", n_values=(n,), trials=1, seed=seed)
        rng = random.Random(seed * 1_000_003 + 0)
        train, test = _sample_split(_group(items), {l: n for l in CLASS_WEIGHTS}, rng)
        manual = evaluate(test, fit_pnns(train, "jsd")).accuracy
        assert result.accuracies[n] == [manual]

    def test_bit_reproducible(self):
        items = synthetic_dataset(per_class=12)
        r1 = n_shot_eval(items, "jsd", n_values=(2, 4), trials=4, seed=9)
        r2 = n_shot_eval(items, "jsd", n_values=(2, 4), trials=4, seed=9)
        assert r1.accuracies == r2.accuracies

    def test_insufficient_items_rejected(self):
        items = [(NormalizedBag({"x": 1.0}), "A")] * 3 + [(NormalizedBag({"y": 1.0}), "B")] * 3
        with pytest.raises(ValueError):
            n_shot_eval(items, "jsd", n_values=(3,), trials=2)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=50), st.integers(min_value=1, max_value=50))
def test_wilson_interval_contains_point_estimate(successes, n):
    successes = min(successes, n)
    lo, hi = wilson_interval(successes, n)
    assert 0.0 <= lo <= successes / n <= hi <= 1.0
