"""Bags of tokens, normalized bags, class prototypes, feature matrices.

A JSON-Bag is a multiset of tokens (counts stored as reals so averaged
bags reuse the same arithmetic). Normalizing divides by the total, giving
a probability distribution over tokens; a class prototype is the per-token
arithmetic mean of its members' normalized bags.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

logger = logging.getLogger(__name__)


class NormalizedBag(dict):
    """Token → frequency mapping summing to 1 (within 1e-9)."""

    def validate(self) -> "NormalizedBag":
        total = math.fsum(self.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"frequencies sum to {total!r}, not 1")
        return self


@dataclass
class JsonBag:
    counts: dict[str, float]
    total: float

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> "JsonBag":
        counts: dict[str, float] = {}
        n = 0
        for t in tokens:
            counts[t] = counts.get(t, 0.0) + 1.0
            n += 1
        if n == 0:
            raise ValueError("cannot build a bag from an empty token list")
        return cls(counts, float(n))

    def normalized(self) -> NormalizedBag:
        if self.total <= 0.0:
            raise ValueError("cannot normalize a bag with zero total")
        return NormalizedBag({t: c / self.total for t, c in self.counts.items()})


def build_bag(tokens: Iterable[str]) -> JsonBag:
    return JsonBag.from_tokens(tokens)


def normalize(bag: JsonBag) -> NormalizedBag:
    return bag.normalized()


@dataclass
class Prototype:
    label: str
    freqs: NormalizedBag
    support: int


def prototype(bags: Sequence[Mapping[str, float]], label: str) -> Prototype:
    """Per-token arithmetic mean of normalized bags (absent = 0).

    The mean is computed with exact summation (math.fsum), so the result
    does not depend on the order of the input list; when every member
    carries the same frequency for a token, that value is returned
    unchanged, making the prototype of n copies of a bag exactly that bag.
    """
    bags = list(bags)
    if not bags:
        raise ValueError("prototype of an empty class")
    n = len(bags)
    freqs = NormalizedBag()
    for token in sorted(set().union(*bags)):
        values = [b.get(token, 0.0) for b in bags]
        first = values[0]
        if all(v == first for v in values):
            mean = first
        else:
            mean = math.fsum(values) / n
        if mean > 0.0:
            freqs[token] = mean
    return Prototype(label, freqs, n)


def prototype_pooled(raw_bags: Sequence[JsonBag], label: str) -> Prototype:
    """Alternative prototype: normalize the pooled raw counts.

    Weighs members by trajectory length instead of equally; kept behind an
    explicit call (and config switch) for comparison, not the default.
    """
    raw_bags = list(raw_bags)
    if not raw_bags:
        raise ValueError("prototype of an empty class")
    pooled: dict[str, float] = {}
    for bag in raw_bags:
        for t, c in bag.counts.items():
            pooled[t] = pooled.get(t, 0.0) + c
    total = math.fsum(pooled.values())
    freqs = NormalizedBag({t: pooled[t] / total for t in sorted(pooled)})
    return Prototype(label, freqs, len(raw_bags))


@dataclass
class FeatureMatrix:
    vocabulary: tuple[str, ...]
    rows: np.ndarray  # shape (n_bags, len(vocabulary))
    labels: tuple[str, ...]
    zero_rows: int = 0  # bags that lost every token to the vocabulary cut

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=float)
        if self.rows.ndim != 2 or self.rows.shape[1] != len(self.vocabulary):
            raise ValueError(
                f"rows shape {self.rows.shape} does not match vocabulary size "
                f"{len(self.vocabulary)}"
            )
        if len(self.labels) != self.rows.shape[0]:
            raise ValueError("one label per row required")


def export_matrix(
    bags: Sequence[Mapping[str, float]],
    labels: Sequence[str],
    vocabulary: Sequence[str] | None = None,
) -> FeatureMatrix:
    """Align normalized bags to a shared vocabulary.

    With ``vocabulary=None`` the vocabulary is the sorted union of all bag
    tokens (the training convention); passing a training vocabulary drops
    unseen test tokens, and any bag reduced to an all-zero row is counted
    and logged.
    """
    bags = list(bags)
    if not bags:
        raise ValueError("no bags to export")
    if len(labels) != len(bags):
        raise ValueError("one label per bag required")
    if vocabulary is None:
        vocab = tuple(sorted(set().union(*bags)))
    else:
        vocab = tuple(vocabulary)
    index = {t: i for i, t in enumerate(vocab)}
    rows = np.zeros((len(bags), len(vocab)), dtype=float)
    zero_rows = 0
    for r, bag in enumerate(bags):
        hit = False
        for t, v in bag.items():
            i = index.get(t)
            if i is not None:
                rows[r, i] = v
                hit = True
        if not hit:
            zero_rows += 1
    if zero_rows:
        logger.warning("%d bag(s) contain no in-vocabulary token (all-zero rows)", zero_rows)
    return FeatureMatrix(vocab, rows, tuple(labels), zero_rows)


@dataclass
class MinMaxScaler:
    """Per-column min-max scaling fitted on training rows only.

    Constant columns map to 0; transformed values are clamped to [0, 1] so
    out-of-range test values cannot escape the training box.
    """

    mins: np.ndarray = field(default_factory=lambda: np.empty(0))
    maxs: np.ndarray = field(default_factory=lambda: np.empty(0))

    def fit(self, rows: np.ndarray) -> "MinMaxScaler":
        rows = np.asarray(rows, dtype=float)
        if rows.ndim != 2 or rows.shape[0] < 2:
            raise ValueError("min-max scaling needs at least 2 rows")
        self.mins = rows.min(axis=0)
        self.maxs = rows.max(axis=0)
        return self

    def transform(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows, dtype=float)
        span = self.maxs - self.mins
        with np.errstate(divide="ignore", invalid="ignore"):
            scaled = np.where(span > 0.0, (rows - self.mins) / span, 0.0)
        return np.clip(scaled, 0.0, 1.0)

    def fit_transform(self, rows: np.ndarray) -> np.ndarray:
        return self.fit(rows).transform(rows)


def minmax_scale(
    bags: Sequence[Mapping[str, float]], labels: Sequence[str] | None = None
) -> FeatureMatrix:
    """Convenience: matrix over the bags' own vocabulary, min-max scaled."""
    if len(bags) < 2:
        raise ValueError("min-max scaling needs at least 2 bags")
    matrix = export_matrix(bags, labels if labels is not None else [""] * len(bags))
    scaled = MinMaxScaler().fit_transform(matrix.rows)
    return FeatureMatrix(matrix.vocabulary, scaled, matrix.labels, matrix.zero_rows)


# ---------------------------------------------------------------------------
# persistence


def bag_to_json(bag: JsonBag) -> dict:
    return {"counts": {t: bag.counts[t] for t in sorted(bag.counts)}, "total": bag.total}


def bag_from_json(data: Mapping) -> JsonBag:
    counts = {str(t): float(c) for t, c in data["counts"].items()}
    return JsonBag(counts, float(data["total"]))


def save_bag(bag: JsonBag, path: str | Path) -> None:
    Path(path).write_text(json.dumps(bag_to_json(bag)), encoding="utf-8")


def load_bag(path: str | Path) -> JsonBag:
    return bag_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def prototype_to_json(proto: Prototype) -> dict:
    return {
        "counts": {t: proto.freqs[t] for t in sorted(proto.freqs)},
        "total": math.fsum(proto.freqs.values()),
        "label": proto.label,
        "support": proto.support,
    }


def prototype_from_json(data: Mapping) -> Prototype:
    freqs = NormalizedBag({str(t): float(v) for t, v in data["counts"].items()})
    return Prototype(str(data["label"]), freqs, int(data["support"]))


def save_prototype(proto: Prototype, path: str | Path) -> None:
    Path(path).write_text(json.dumps(prototype_to_json(proto)), encoding="utf-8")


def load_prototype(path: str | Path) -> Prototype:
    return prototype_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def matrix_to_csv(matrix: FeatureMatrix, path: str | Path) -> None:
    """CSV with header ``label,<token...>`` and full-precision floats."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", *matrix.vocabulary])
        for label, row in zip(matrix.labels, matrix.rows):
            writer.writerow([label, *(repr(float(v)) for v in row)])


def matrix_from_csv(path: str | Path) -> FeatureMatrix:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        vocab = tuple(header[1:])
        labels: list[str] = []
        rows: list[list[float]] = []
        for record in reader:
            labels.append(record[0])
            rows.append([float(v) for v in record[1:]])
    data = np.array(rows, dtype=float) if rows else np.empty((0, len(vocab)))
    return FeatureMatrix(vocab, data, tuple(labels))
