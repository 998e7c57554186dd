"""Regression trees and a bagged forest, built for exact reproducibility.

Splits minimise the summed squared error of the two children.  The
search scans features in column order and candidate thresholds in
ascending order, accepting only strictly better splits, so ties always
resolve the same way and refits are bitwise identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class _Node:
    value: float
    feature: int = -1
    threshold: float = 0.0
    left: "_Node | None" = None
    right: "_Node | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None


@dataclass(frozen=True)
class TreeConfig:
    min_leaf: int = 5
    max_depth: int | None = None


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    min_leaf: int = 5
    max_depth: int | None = None
    #: Features tried per split; None means ceil(p / 3).
    mtry: int | None = None


def _best_split(
    X: np.ndarray, y: np.ndarray, features: np.ndarray, min_leaf: int
) -> tuple[float, int, float] | None:
    """Lowest-SSE split over the given feature columns, or None.

    Thresholds are midpoints between consecutive distinct values; both
    children must keep at least `min_leaf` samples.
    """
    n = len(y)
    best: tuple[float, int, float] | None = None
    for j in features:
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        ys = y[order]
        csum = np.cumsum(ys)
        csq = np.cumsum(ys * ys)
        total_sum = csum[-1]
        total_sq = csq[-1]
        for i in range(min_leaf, n - min_leaf + 1):
            if xs[i - 1] == xs[i]:
                continue
            left_sum, left_sq = csum[i - 1], csq[i - 1]
            right_sum = total_sum - left_sum
            right_sq = total_sq - left_sq
            sse = (left_sq - left_sum * left_sum / i) + (
                right_sq - right_sum * right_sum / (n - i)
            )
            if best is None or sse < best[0]:
                best = (sse, int(j), (xs[i - 1] + xs[i]) / 2.0)
    return best


def _grow(
    X: np.ndarray,
    y: np.ndarray,
    config: TreeConfig,
    depth: int,
    rng: np.random.Generator | None,
    mtry: int | None,
) -> _Node:
    node = _Node(value=float(np.mean(y)))
    n, p = X.shape
    if config.max_depth is not None and depth >= config.max_depth:
        return node
    if n < 2 * config.min_leaf or np.all(y == y[0]):
        return node
    if rng is not None and mtry is not None and mtry < p:
        # Candidate features are sorted so the first-best rule still
        # means lowest column index among equals.
        features = np.sort(rng.choice(p, size=mtry, replace=False))
    else:
        features = np.arange(p)
    best = _best_split(X, y, features, config.min_leaf)
    if best is None:
        return node
    _, j, threshold = best
    mask = X[:, j] <= threshold
    node.feature = j
    node.threshold = threshold
    node.left = _grow(X[mask], y[mask], config, depth + 1, rng, mtry)
    node.right = _grow(X[~mask], y[~mask], config, depth + 1, rng, mtry)
    return node


@dataclass
class FittedTree:
    root: _Node
    n_features: int

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(len(X), dtype=float)
        for i, row in enumerate(X):
            node = self.root
            while not node.is_leaf:
                node = node.left if row[node.feature] <= node.threshold else node.right
            out[i] = node.value
        return out


def fit_tree(
    X: np.ndarray,
    y: np.ndarray,
    config: TreeConfig = TreeConfig(),
    rng: np.random.Generator | None = None,
    mtry: int | None = None,
) -> FittedTree:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    return FittedTree(_grow(X, y, config, 0, rng, mtry), X.shape[1])


@dataclass
class FittedForest:
    trees: list[FittedTree]

    def predict(self, X: np.ndarray) -> np.ndarray:
        # Mean taken in tree order; the sum order is part of the
        # reproducibility contract.
        acc = np.zeros(len(X), dtype=float)
        for tree in self.trees:
            acc += tree.predict(X)
        return acc / len(self.trees)


def fit_forest(
    X: np.ndarray, y: np.ndarray, config: ForestConfig, seed_seq: np.random.SeedSequence
) -> FittedForest:
    """Bagged trees; each tree gets its own child RNG stream so the
    forest is reproducible regardless of build order."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    mtry = config.mtry if config.mtry is not None else math.ceil(p / 3)
    mtry = max(1, min(mtry, p))
    tree_config = TreeConfig(min_leaf=config.min_leaf, max_depth=config.max_depth)
    trees: list[FittedTree] = []
    for child in seed_seq.spawn(config.n_trees):
        rng = np.random.default_rng(child)
        idx = rng.integers(0, n, size=n)
        trees.append(
            FittedTree(_grow(X[idx], y[idx], tree_config, 0, rng, mtry), p)
        )
    return FittedForest(trees)
