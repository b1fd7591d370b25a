"""Tree boosting rankers: pointwise MART and listwise LambdaMART.

MART fits each tree to least-squares residuals of the labels. LambdaMART
drives the same tree machinery with pairwise lambda gradients and replaces
every leaf value with the Newton step sum(lambda) / sum(weight).
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from ..letor_io import Dataset
from .base import (KIND_LAMBDAMART, KIND_MART, RankingModel, TrainConfig,
                   allowed_features, check_trainable, query_blocks)
from .lambdas import lambda_gradients
from .tree import RegressionTree


class TreeEnsemble:
    tag = "trees"

    def __init__(self, base_score: float, learning_rate: float,
                 trees: list[RegressionTree]):
        self.base_score = base_score
        self.learning_rate = learning_rate
        self.trees = trees

    def score_one(self, x: np.ndarray) -> float:
        total = self.base_score
        for tree in self.trees:
            total += self.learning_rate * tree.predict_one(x)
        return float(total)

    def predict(self, X: np.ndarray) -> np.ndarray:
        scores = np.full(X.shape[0], self.base_score, dtype=np.float64)
        for tree in self.trees:
            scores += self.learning_rate * tree.predict(X)
        return scores

    def staged_predict(self, X: np.ndarray) -> Iterator[np.ndarray]:
        """Predictions after each boosting stage (for loss diagnostics)."""
        scores = np.full(X.shape[0], self.base_score, dtype=np.float64)
        for tree in self.trees:
            scores = scores + self.learning_rate * tree.predict(X)
            yield scores

    def to_lines(self):
        yield f"base {self.base_score!r}"
        yield f"learning_rate {self.learning_rate!r}"
        yield f"trees {len(self.trees)}"
        for tree in self.trees:
            yield from tree.to_lines()

    @classmethod
    def from_lines(cls, lines, feature_count: int,
                   masked: tuple[int, ...]) -> "TreeEnsemble":
        base = float(next(lines).split()[1])
        learning_rate = float(next(lines).split()[1])
        count = int(next(lines).split()[1])
        trees = [RegressionTree.from_lines(lines) for _ in range(count)]
        return cls(base, learning_rate, trees)


def _stack(blocks):
    X = np.vstack([b.X for b in blocks])
    y = np.concatenate([b.y for b in blocks]).astype(np.float64)
    return X, y


def train_mart(dataset: Dataset, cfg: TrainConfig) -> RankingModel:
    """Least-squares gradient boosting on the binary labels."""
    check_trainable(dataset, cfg)
    blocks = query_blocks(dataset)
    X, y = _stack(blocks)
    features = allowed_features(dataset)
    base = float(y.mean())
    predictions = np.full(y.shape, base)
    trees: list[RegressionTree] = []
    for _ in range(cfg.rounds):
        residuals = y - predictions
        tree = RegressionTree.fit(X, residuals, cfg.leaves, features)
        predictions += cfg.learning_rate * tree.predict(X)
        trees.append(tree)
    return RankingModel(
        kind=KIND_MART, feature_count=dataset.feature_count,
        masked=dataset.masked, seed=cfg.seed,
        meta={
            "trees": str(cfg.rounds),
            "learning_rate": repr(cfg.learning_rate),
            "leaves": str(cfg.leaves),
            "objective": "least-squares",
        },
        scorer=TreeEnsemble(base, cfg.learning_rate, trees),
    )


def newton_leaf_values(tree: RegressionTree, X: np.ndarray,
                       lambdas: np.ndarray,
                       weights: np.ndarray) -> dict[int, float]:
    """Per-leaf sum(lambda)/sum(weight); 0 where the curvature vanishes."""
    leaf_of = tree.apply(X)
    values: dict[int, float] = {}
    for leaf in np.unique(leaf_of):
        rows = leaf_of == leaf
        w = weights[rows].sum()
        values[int(leaf)] = float(lambdas[rows].sum() / w) if w > 0 else 0.0
    return values


def train_lambdamart(dataset: Dataset, cfg: TrainConfig,
                     lambda_k: int = 10) -> RankingModel:
    """Boosted trees driven by NDCG@10 lambda gradients with Newton leaves."""
    check_trainable(dataset, cfg)
    blocks = query_blocks(dataset)
    X, _ = _stack(blocks)
    features = allowed_features(dataset)
    spans = []
    start = 0
    for block in blocks:
        spans.append((start, start + len(block.doc_ids)))
        start += len(block.doc_ids)
    scores = np.zeros(X.shape[0])
    trees: list[RegressionTree] = []
    for _ in range(cfg.rounds):
        lambdas = np.zeros(X.shape[0])
        weights = np.zeros(X.shape[0])
        for block, (lo, hi) in zip(blocks, spans):
            lam, w = lambda_gradients(block.y.tolist(), scores[lo:hi].tolist(),
                                      block.doc_ids, k=lambda_k)
            lambdas[lo:hi] = lam
            weights[lo:hi] = w
        tree = RegressionTree.fit(X, lambdas, cfg.leaves, features)
        tree.set_leaf_values(newton_leaf_values(tree, X, lambdas, weights))
        scores += cfg.learning_rate * tree.predict(X)
        trees.append(tree)
    return RankingModel(
        kind=KIND_LAMBDAMART, feature_count=dataset.feature_count,
        masked=dataset.masked, seed=cfg.seed,
        meta={
            "trees": str(cfg.rounds),
            "learning_rate": repr(cfg.learning_rate),
            "leaves": str(cfg.leaves),
            "objective": f"ndcg@{lambda_k}-lambda",
        },
        scorer=TreeEnsemble(0.0, cfg.learning_rate, trees),
    )
