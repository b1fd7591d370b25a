"""AdaRank: boosting over single-feature weak rankers.

Each round picks the (feature, orientation) pair with the best
query-weight-averaged metric, gives it a combination weight from the
weighted performance, then re-weights queries by exponentiated negative
ensemble performance. Features are tried in both orientations because a
feature's polarity is not known in advance.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import TrainingError
from ..letor_io import Dataset
from ..metrics import RankedList, metric_fn
from .base import (KIND_ADARANK, RankingModel, TrainConfig, allowed_features,
                   check_trainable, query_blocks)

_EPS = 1e-10


class WeakEnsemble:
    tag = "weak-ensemble"

    def __init__(self, items: list[tuple[int, int, float]]):
        # (0-based feature column, orientation +1/-1, combination weight)
        self.items = items

    def score_one(self, x: np.ndarray) -> float:
        return float(sum(alpha * orient * x[f] for f, orient, alpha in self.items))

    def scores(self, X: np.ndarray) -> np.ndarray:
        scores = np.zeros(X.shape[0])
        for f, orient, alpha in self.items:
            scores += alpha * orient * X[:, f]
        return scores

    def to_lines(self):
        yield f"items {len(self.items)}"
        for f, orient, alpha in self.items:
            # features as 1-based slots, matching the dataset format
            yield f"item {f + 1} {orient:+d} {alpha!r}"

    @classmethod
    def from_lines(cls, lines, feature_count: int,
                   masked: tuple[int, ...]) -> "WeakEnsemble":
        count = int(next(lines).split()[1])
        items = []
        for _ in range(count):
            fields = next(lines).split()
            items.append((int(fields[1]) - 1, int(fields[2]), float(fields[3])))
        return cls(items)


def _query_metric(block, scores, metric) -> float:
    ranked = RankedList.from_scores(
        block.query_id,
        [(doc_id, float(s), int(y))
         for doc_id, s, y in zip(block.doc_ids, scores, block.y)],
    )
    return metric(ranked)


def weak_ranker_metrics(blocks, candidates, metric) -> np.ndarray:
    """Per-query metric of every (feature, orientation) weak ranker."""
    values = np.zeros((len(candidates), len(blocks)))
    for ci, (f, orient) in enumerate(candidates):
        for qi, block in enumerate(blocks):
            values[ci, qi] = _query_metric(block, orient * block.X[:, f], metric)
    return values


def train_adarank(dataset: Dataset, cfg: TrainConfig) -> RankingModel:
    check_trainable(dataset, cfg)
    metric = metric_fn(cfg.metric, cfg.metric_k)
    # the per-query metric needs at least one relevant document
    blocks = [b for b in query_blocks(dataset) if b.y.sum() > 0]
    if not blocks:
        raise TrainingError("no query has a relevant document")
    candidates = [(f, orient) for f in allowed_features(dataset)
                  for orient in (1, -1)]
    performance = weak_ranker_metrics(blocks, candidates, metric)
    m = len(blocks)
    p = np.full(m, 1.0 / m)
    items: list[tuple[int, int, float]] = []
    ensemble_scores = [np.zeros(len(b.doc_ids)) for b in blocks]
    best_mean = -math.inf
    for _ in range(cfg.rounds):
        weighted = performance @ p
        choice = int(np.argmax(weighted))
        f, orient = candidates[choice]
        e = performance[choice]
        numerator = float((p * (1.0 + e)).sum())
        denominator = float((p * (1.0 - e)).sum())
        alpha = 0.5 * math.log((numerator + _EPS) / (denominator + _EPS))
        if alpha <= 0.0:
            break
        items.append((f, orient, alpha))
        for qi, block in enumerate(blocks):
            ensemble_scores[qi] = ensemble_scores[qi] + \
                alpha * orient * block.X[:, f]
        ensemble_perf = np.array([
            _query_metric(block, ensemble_scores[qi], metric)
            for qi, block in enumerate(blocks)
        ])
        mean_perf = float(ensemble_perf.mean())
        if mean_perf <= best_mean:
            items.pop()  # the new round did not improve training performance
            break
        best_mean = mean_perf
        exp_neg = np.exp(-ensemble_perf)
        p = exp_neg / exp_neg.sum()
    if not items:
        raise TrainingError("adarank selected no weak ranker")
    return RankingModel(
        kind=KIND_ADARANK, feature_count=dataset.feature_count,
        masked=dataset.masked, seed=cfg.seed,
        meta={
            "rounds": str(cfg.rounds),
            "rounds_used": str(len(items)),
            "objective": f"{cfg.metric}@{cfg.metric_k}"
            if cfg.metric.upper() != "MAP" else "MAP",
        },
        scorer=WeakEnsemble(items),
    )
