"""Random forest over token-frequency features, written from first principles.

Greedy CART trees with Gini impurity; each split considers a without-
replacement sample of features and midpoint thresholds between consecutive
sorted unique values. The forest averages leaf class-probability vectors
and reports mean-decrease-in-impurity feature importances.
"""

from __future__ import annotations

import csv
import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np


@dataclass
class ForestConfig:
    n_trees: int = 100
    max_features: int | str = "sqrt"  # "sqrt", "all", or an explicit count
    bootstrap: bool = True
    min_samples_leaf: int = 1
    rng_seed: int = 0

    def features_per_split(self, d: int) -> int:
        if self.max_features == "sqrt":
            return max(1, int(math.sqrt(d)))
        if self.max_features == "all":
            return d
        k = int(self.max_features)
        if not 1 <= k <= d:
            raise ValueError(f"max_features {k} outside [1, {d}]")
        return k


@dataclass
class TreeNode:
    feature: int = -1  # -1 marks a leaf
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    probs: np.ndarray | None = None  # leaves only; sums to 1

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0


def gini(counts: np.ndarray, total: int) -> float:
    """Gini impurity from integer class counts."""
    if total == 0:
        return 0.0
    p = counts / total
    return 1.0 - float(p @ p)


@dataclass
class DecisionTree:
    root: TreeNode
    classes: tuple[str, ...]
    # per-feature sum of (node fraction × impurity decrease), unnormalized
    importance: np.ndarray = field(default=None)

    def predict_proba_one(self, x: np.ndarray) -> np.ndarray:
        node = self.root
        while not node.is_leaf:
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node.probs

    def depth(self) -> int:
        def walk(node):
            if node.is_leaf:
                return 0
            return 1 + max(walk(node.left), walk(node.right))

        return walk(self.root)


def fit_tree(
    X: np.ndarray,
    y: np.ndarray,
    config: ForestConfig,
    rng: random.Random,
    classes: tuple[str, ...] | None = None,
) -> DecisionTree:
    """Greedy CART fit; ``y`` holds class labels, not indices."""
    X = np.asarray(X, dtype=float)
    if classes is None:
        classes = tuple(sorted(set(y)))
    class_index = {c: i for i, c in enumerate(classes)}
    yi = np.array([class_index[label] for label in y])
    n, d = X.shape
    k_features = config.features_per_split(d)
    n_classes = len(classes)
    importance = np.zeros(d)

    def leaf(counts: np.ndarray, total: int) -> TreeNode:
        return TreeNode(probs=counts / total)

    def build(idx: np.ndarray) -> TreeNode:
        counts = np.bincount(yi[idx], minlength=n_classes).astype(float)
        total = idx.size
        node_gini = gini(counts, total)
        if node_gini == 0.0 or total < 2 * config.min_samples_leaf:
            return leaf(counts, total)

        features = sorted(rng.sample(range(d), k_features))
        n_left = np.arange(1, total)
        n_right = (total - n_left).astype(float)
        # Gini gain is never negative, so any valid boundary is acceptable;
        # zero-gain splits must proceed (XOR-style data needs two levels).
        best_gain, best_feature, best_threshold = -1.0, -1, 0.0
        for f in features:
            column = X[idx, f]
            order = np.argsort(column, kind="stable")
            sorted_vals = column[order]
            valid = sorted_vals[:-1] != sorted_vals[1:]
            if config.min_samples_leaf > 1:
                m = config.min_samples_leaf
                valid &= (n_left >= m) & (n_right >= m)
            if not valid.any():
                continue
            onehot = np.zeros((total, n_classes))
            onehot[np.arange(total), yi[idx][order]] = 1.0
            left = np.cumsum(onehot, axis=0)[:-1]  # class counts left of boundary i
            right = counts[None, :] - left
            gini_left = 1.0 - ((left / n_left[:, None]) ** 2).sum(axis=1)
            gini_right = 1.0 - ((right / n_right[:, None]) ** 2).sum(axis=1)
            gain = node_gini - (n_left / total * gini_left + n_right / total * gini_right)
            gain = np.where(valid, gain, -np.inf)
            i = int(np.argmax(gain))  # first maximum → lowest threshold wins ties
            if gain[i] > best_gain:
                best_gain = float(gain[i])
                best_feature = f
                best_threshold = 0.5 * (sorted_vals[i] + sorted_vals[i + 1])
        if best_feature < 0:
            return leaf(counts, total)

        importance[best_feature] += (total / n) * max(best_gain, 0.0)
        mask = X[idx, best_feature] <= best_threshold
        node = TreeNode(feature=best_feature, threshold=best_threshold)
        node.left = build(idx[mask])
        node.right = build(idx[~mask])
        return node

    tree = DecisionTree(build(np.arange(n)), classes)
    tree.importance = importance
    return tree


@dataclass
class RandomForest:
    config: ForestConfig
    classes: tuple[str, ...] = ()
    trees: list[DecisionTree] = field(default_factory=list)

    def fit(self, X: np.ndarray, y: Sequence[str]) -> "RandomForest":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        self.classes = tuple(sorted(set(y)))
        self.trees = []
        n = X.shape[0]
        for t in range(self.config.n_trees):
            rng = random.Random(self.config.rng_seed * 1_000_003 + t)
            if self.config.bootstrap:
                idx = np.array([rng.randrange(n) for _ in range(n)])
            else:
                idx = np.arange(n)
            self.trees.append(fit_tree(X[idx], y[idx], self.config, rng, self.classes))
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.zeros((X.shape[0], len(self.classes)))
        for r in range(X.shape[0]):
            acc = np.zeros(len(self.classes))
            for tree in self.trees:
                acc += tree.predict_proba_one(X[r])
            out[r] = acc / len(self.trees)
        return out

    def predict(self, X: np.ndarray) -> list[str]:
        probs = self.predict_proba(X)
        # argmax returns the first maximum; classes are sorted, so ties
        # resolve to the lexicographically smallest label
        return [self.classes[int(i)] for i in np.argmax(probs, axis=1)]

    def feature_importance(self) -> np.ndarray:
        """Mean decrease in impurity, averaged over trees, normalized to 1."""
        if not self.trees:
            raise ValueError("forest is not fitted")
        mean = np.mean([tree.importance for tree in self.trees], axis=0)
        total = mean.sum()
        return mean / total if total > 0 else mean


def fit_forest(X: np.ndarray, y: Sequence[str], config: ForestConfig | None = None) -> RandomForest:
    return RandomForest(config or ForestConfig()).fit(X, y)


# ---------------------------------------------------------------------------
# persistence


def _node_to_json(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"probs": [float(p) for p in node.probs]}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _node_to_json(node.left),
        "right": _node_to_json(node.right),
    }


def _node_from_json(data: dict) -> TreeNode:
    if "probs" in data:
        return TreeNode(probs=np.array(data["probs"], dtype=float))
    return TreeNode(
        feature=int(data["feature"]),
        threshold=float(data["threshold"]),
        left=_node_from_json(data["left"]),
        right=_node_from_json(data["right"]),
    )


def save_forest(forest: RandomForest, path: str | Path) -> None:
    payload = {
        "config": {
            "n_trees": forest.config.n_trees,
            "max_features": forest.config.max_features,
            "bootstrap": forest.config.bootstrap,
            "min_samples_leaf": forest.config.min_samples_leaf,
            "rng_seed": forest.config.rng_seed,
        },
        "classes": list(forest.classes),
        "trees": [
            {"root": _node_to_json(t.root), "importance": [float(v) for v in t.importance]}
            for t in forest.trees
        ],
    }
    Path(path).write_text(json.dumps(payload), encoding="utf-8")


def load_forest(path: str | Path) -> RandomForest:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    config = ForestConfig(**data["config"])
    classes = tuple(data["classes"])
    forest = RandomForest(config, classes)
    for td in data["trees"]:
        tree = DecisionTree(_node_from_json(td["root"]), classes)
        tree.importance = np.array(td["importance"], dtype=float)
        forest.trees.append(tree)
    return forest


def importance_to_csv(
    forest: RandomForest, feature_names: Sequence[str], path: str | Path
) -> None:
    """Per-feature MDI, sorted descending (name ascending within ties)."""
    values = forest.feature_importance()
    if len(feature_names) != len(values):
        raise ValueError("one name per feature required")
    ranked = sorted(zip(feature_names, values), key=lambda kv: (-kv[1], kv[0]))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["feature", "importance"])
        for name, value in ranked:
            writer.writerow([name, repr(float(value))])
