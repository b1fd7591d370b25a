"""Pairwise lambda gradients weighted by the rank-metric change of a swap.

For every pair (i, j) with label_i > label_j the contribution has magnitude
rho_ij * |delta NDCG@k(i,j)| where rho_ij = 1 / (1 + exp(s_i - s_j)). The
returned lambdas are oriented as ascent directions: positive values push a
document up. Weights are the corresponding second derivatives
rho * (1 - rho) * |delta|, used for Newton leaf steps.
"""

from __future__ import annotations

import math
from typing import Iterator, Sequence

import numpy as np


def _sigmoid_neg(diff: float) -> float:
    """1 / (1 + exp(diff)) computed without overflow."""
    if diff >= 0:
        z = math.exp(-diff)
        return z / (1.0 + z)
    return 1.0 / (1.0 + math.exp(diff))


def rank_positions(scores: Sequence[float], doc_ids: Sequence[str]) -> list[int]:
    """1-based position of each document under (score desc, doc_id asc)."""
    n = len(scores)
    order = sorted(range(n), key=lambda i: (-scores[i], doc_ids[i]))
    pos = [0] * n
    for p, i in enumerate(order, start=1):
        pos[i] = p
    return pos


def pair_deltas(labels: Sequence[int], scores: Sequence[float],
                doc_ids: Sequence[str], k: int = 10) -> Iterator[tuple[int, int, float]]:
    """Yield (better, worse, |delta NDCG@k|) for every mis-orderable pair."""
    n = len(labels)
    pos = rank_positions(scores, doc_ids)
    ideal = sum(
        (2.0 ** y - 1.0) / math.log2(1.0 + p)
        for p, y in enumerate(sorted(labels, reverse=True)[:k], start=1)
    )
    if ideal == 0.0:
        return
    def disc(p: int) -> float:
        return 1.0 / math.log2(1.0 + p) if p <= k else 0.0
    for i in range(n):
        for j in range(n):
            if labels[i] > labels[j]:
                gain_diff = (2.0 ** labels[i] - 1.0) - (2.0 ** labels[j] - 1.0)
                delta = abs(gain_diff * (disc(pos[i]) - disc(pos[j]))) / ideal
                yield i, j, delta


def lambda_gradients(labels: Sequence[int], scores: Sequence[float],
                     doc_ids: Sequence[str],
                     k: int = 10) -> tuple[np.ndarray, np.ndarray]:
    """Aggregate per-document lambdas (ascent-oriented) and Newton weights."""
    n = len(labels)
    lambdas = np.zeros(n)
    weights = np.zeros(n)
    for i, j, delta in pair_deltas(labels, scores, doc_ids, k):
        rho = _sigmoid_neg(scores[i] - scores[j])
        lambdas[i] += rho * delta
        lambdas[j] -= rho * delta
        w = rho * (1.0 - rho) * delta
        weights[i] += w
        weights[j] += w
    return lambdas, weights
