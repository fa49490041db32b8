"""Prototype nearest-neighbor classification and the N-shot protocol.

A model holds one prototype per class. Under the JSD metric prototypes are
mean normalized bags compared with Jensen-Shannon distance; under cosine/L2
they are per-class means of min-max scaled feature vectors. Ties always
break toward the lexicographically smallest class label.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .bags import MinMaxScaler, NormalizedBag, Prototype, prototype
from .metrics import js_distance, js_distance_rows

logger = logging.getLogger(__name__)

Z95 = 1.959963984540054  # two-sided 95% normal quantile

Item = tuple[Mapping[str, float], str]

METRICS = ("jsd", "cosine", "l2")


@dataclass
class LabeledDataset:
    """Bags (or feature mappings) with class labels and a split seed."""

    items: list[Item]
    rng_seed: int = 0

    def classes(self) -> list[str]:
        return sorted({label for _, label in self.items})

    def by_class(self) -> dict[str, list[Item]]:
        groups: dict[str, list[Item]] = {}
        for item in self.items:
            groups.setdefault(item[1], []).append(item)
        return {label: groups[label] for label in sorted(groups)}

    def split(self, fraction: float = 0.5) -> tuple["LabeledDataset", "LabeledDataset"]:
        train, test = stratified_split(self.items, self.rng_seed, fraction)
        return LabeledDataset(train, self.rng_seed), LabeledDataset(test, self.rng_seed)


def _group(items: Iterable[Item]) -> dict[str, list[Item]]:
    groups: dict[str, list[Item]] = {}
    for item in items:
        groups.setdefault(item[1], []).append(item)
    return {label: groups[label] for label in sorted(groups)}


def _sample_split(
    groups: Mapping[str, list[Item]], n_per_class: Mapping[str, int], rng: random.Random
) -> tuple[list[Item], list[Item]]:
    """Sample n items per class (without replacement) into train; rest test.

    Classes are visited in sorted order so the rng stream is reproducible.
    """
    train: list[Item] = []
    test: list[Item] = []
    for label in sorted(groups):
        members = groups[label]
        n = n_per_class[label]
        picked = set(rng.sample(range(len(members)), n))
        for i, item in enumerate(members):
            (train if i in picked else test).append(item)
    return train, test


def stratified_split(
    items: Sequence[Item], seed: int = 0, fraction: float = 0.5
) -> tuple[list[Item], list[Item]]:
    """Per-class split; odd classes put the extra item in train."""
    groups = _group(items)
    n_per_class = {
        label: max(1, math.ceil(len(members) * fraction))
        for label, members in groups.items()
    }
    return _sample_split(groups, n_per_class, random.Random(seed))


def wilson_interval(successes: int, n: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n <= 0:
        raise ValueError("n must be positive")
    phat = successes / n
    denom = 1.0 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / n + z * z / (4 * n * n)) / denom
    # The interval always contains the point estimate; rounding can push an
    # endpoint a few ulps past it at phat = 0 or 1, so clamp.
    return (max(0.0, min(centre - half, phat)), min(1.0, max(centre + half, phat)))


@dataclass
class ConfusionMatrix:
    classes: tuple[str, ...]
    counts: np.ndarray  # counts[true_index][predicted_index]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def accuracy(self) -> float:
        return float(np.trace(self.counts)) / self.total

    def row(self, label: str) -> dict[str, int]:
        i = self.classes.index(label)
        return {c: int(v) for c, v in zip(self.classes, self.counts[i])}

    def to_csv(self, path) -> None:
        import csv

        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["true\\predicted", *self.classes])
            for label, row in zip(self.classes, self.counts):
                writer.writerow([label, *(int(v) for v in row)])


@dataclass
class PnnsModel:
    """Fitted prototype nearest-neighbor state for one metric."""

    metric: str
    classes: tuple[str, ...]
    prototypes: list[Prototype] = field(default_factory=list)  # jsd path
    vocabulary: tuple[str, ...] = ()
    ref_rows: np.ndarray | None = None  # per-class vectors aligned to vocabulary
    scaler: MinMaxScaler | None = None  # cosine / l2 path only


def fit_pnns(train: Sequence[Item] | LabeledDataset, metric: str = "jsd") -> PnnsModel:
    if isinstance(train, LabeledDataset):
        train = train.items
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    groups = _group(train)
    if not groups:
        raise ValueError("empty training set")
    for label, members in groups.items():
        if not members:
            raise ValueError(f"class {label!r} has no training items")
    classes = tuple(sorted(groups))

    if metric == "jsd":
        protos = [prototype([bag for bag, _ in groups[label]], label) for label in classes]
        for i in range(len(protos)):
            for j in range(i + 1, len(protos)):
                if protos[i].freqs == protos[j].freqs:
                    logger.warning(
                        "degenerate prototypes: classes %r and %r are identical",
                        protos[i].label,
                        protos[j].label,
                    )
        vocab = tuple(sorted(set().union(*(p.freqs for p in protos))))
        index = {t: k for k, t in enumerate(vocab)}
        refs = np.zeros((len(protos), len(vocab)))
        for r, p in enumerate(protos):
            for t, v in p.freqs.items():
                refs[r, index[t]] = v
        return PnnsModel("jsd", classes, protos, vocab, refs)

    # cosine / l2: min-max scaled feature vectors over the training vocabulary
    from .bags import export_matrix

    bags = [bag for bag, _ in train]
    labels = [label for _, label in train]
    matrix = export_matrix(bags, labels)
    scaler = MinMaxScaler().fit(matrix.rows) if matrix.rows.shape[0] >= 2 else None
    scaled = scaler.transform(matrix.rows) if scaler else matrix.rows
    refs = np.zeros((len(classes), len(matrix.vocabulary)))
    y = np.array(labels)
    for r, label in enumerate(classes):
        refs[r] = scaled[y == label].mean(axis=0)
    return PnnsModel(metric, classes, [], matrix.vocabulary, refs, scaler)


def _vectorize(
    bags: Sequence[Mapping[str, float]], vocabulary: tuple[str, ...]
) -> tuple[np.ndarray, np.ndarray]:
    """Dense rows over the vocabulary plus each bag's out-of-vocabulary mass."""
    index = {t: k for k, t in enumerate(vocabulary)}
    rows = np.zeros((len(bags), len(vocabulary)))
    extra = np.zeros(len(bags))
    for r, bag in enumerate(bags):
        out = 0.0
        for t, v in bag.items():
            k = index.get(t)
            if k is None:
                out += v
            else:
                rows[r, k] = v
        extra[r] = out
    return rows, extra


def _predict_rows(model: PnnsModel, bags: Sequence[Mapping[str, float]]) -> list[str]:
    rows, extra = _vectorize(bags, model.vocabulary)
    if model.metric == "jsd":
        picks = [
            int(np.argmin(js_distance_rows(rows[r], model.ref_rows, extra[r])))
            for r in range(rows.shape[0])
        ]
    else:
        x = model.scaler.transform(rows) if model.scaler else rows
        refs = model.ref_rows
        if model.metric == "l2":
            d2 = (x * x).sum(1)[:, None] - 2.0 * x @ refs.T + (refs * refs).sum(1)[None, :]
            picks = list(np.argmin(np.maximum(d2, 0.0), axis=1))
        else:  # cosine: argmax similarity, zero vectors score 0
            xn = np.linalg.norm(x, axis=1, keepdims=True)
            rn = np.linalg.norm(refs, axis=1, keepdims=True)
            sims = np.divide(x, np.where(xn == 0, 1, xn)) @ np.divide(
                refs, np.where(rn == 0, 1, rn)
            ).T
            picks = list(np.argmax(sims, axis=1))
    return [model.classes[int(i)] for i in picks]


def classify(item: Mapping[str, float], model: PnnsModel) -> str:
    """Label of the nearest prototype (ties → smallest label)."""
    if model.metric == "jsd":
        best_label, best_d = None, math.inf
        for p in model.prototypes:  # already in sorted-label order
            d = js_distance(item, p.freqs)
            if d < best_d:
                best_label, best_d = p.label, d
        return best_label
    return _predict_rows(model, [item])[0]


@dataclass
class EvalResult:
    accuracy: float
    ci_low: float
    ci_high: float
    confusion: ConfusionMatrix

    @property
    def ci(self) -> tuple[float, float]:
        return (self.ci_low, self.ci_high)


def evaluate(test: Sequence[Item] | LabeledDataset, model: PnnsModel) -> EvalResult:
    if isinstance(test, LabeledDataset):
        test = test.items
    if not test:
        raise ValueError("empty test set")
    predictions = _predict_rows(model, [bag for bag, _ in test])
    index = {label: i for i, label in enumerate(model.classes)}
    counts = np.zeros((len(model.classes), len(model.classes)), dtype=int)
    correct = 0
    for (_, true_label), predicted in zip(test, predictions):
        if true_label not in index:  # test-only class: add a row/col? keep strict
            raise ValueError(f"test label {true_label!r} unseen in training")
        counts[index[true_label], index[predicted]] += 1
        correct += true_label == predicted
    lo, hi = wilson_interval(correct, len(test))
    return EvalResult(correct / len(test), lo, hi, ConfusionMatrix(model.classes, counts))


@dataclass
class NShotResult:
    n_values: tuple[int, ...]
    trials: int
    accuracies: dict[int, list[float]]  # per N, one accuracy per trial

    def mean(self, n: int) -> float:
        return float(np.mean(self.accuracies[n]))

    def table(self) -> list[tuple[int, float]]:
        return [(n, self.mean(n)) for n in self.n_values]


def n_shot_eval(
    dataset: Sequence[Item] | LabeledDataset,
    metric: str = "jsd",
    n_values: Sequence[int] = (1, 3, 5, 10),
    trials: int = 20,
    seed: int = 0,
) -> NShotResult:
    """Accuracy when only N examples per class are available for fitting.

    Each trial samples N items per class without replacement, fits
    prototypes on them and evaluates on every remaining item; per-trial rng
    streams derive from (seed, trial) so trials are independently
    reproducible.
    """
    if isinstance(dataset, LabeledDataset):
        dataset = dataset.items
    groups = _group(dataset)
    smallest = min(len(members) for members in groups.values())
    if max(n_values) >= smallest:
        raise ValueError(
            f"n={max(n_values)} needs more items than the smallest class has ({smallest})"
        )
    accuracies: dict[int, list[float]] = {n: [] for n in n_values}
    for n in n_values:
        per_class = {label: n for label in groups}
        for trial in range(trials):
            rng = random.Random(seed * 1_000_003 + trial)
            train, test = _sample_split(groups, per_class, rng)
            model = fit_pnns(train, metric)
            accuracies[n].append(evaluate(test, model).accuracy)
    return NShotResult(tuple(n_values), trials, accuracies)
