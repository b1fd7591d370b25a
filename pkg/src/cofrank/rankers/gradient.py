"""Gradient-descent rankers: ListNet and LambdaRank over a shared scorer.

The scorer is linear by default; hidden_units > 0 switches to one tanh
layer. Training is full-batch with the per-epoch objective averaged over
queries, single-threaded for determinism.
"""

from __future__ import annotations

import numpy as np

from ..errors import DivergenceError
from ..letor_io import Dataset
from .base import (KIND_LAMBDARANK, KIND_LISTNET, QueryBlock, RankingModel,
                   TrainConfig, check_trainable, query_blocks)
from .lambdas import lambda_gradients


class NeuralScorer:
    """Linear or one-hidden-layer scorer; masked inputs are zeroed."""

    tag = "neural"

    def __init__(self, feature_count: int, masked: tuple[int, ...],
                 hidden_units: int, seed: int):
        self.feature_count = feature_count
        self.masked = masked
        self.hidden_units = hidden_units
        self.mask = np.ones(feature_count)
        for slot in masked:
            self.mask[slot - 1] = 0.0
        if hidden_units > 0:
            rng = np.random.default_rng(seed)
            self.params = [
                rng.normal(0.0, 0.1, size=(feature_count, hidden_units)),  # W1
                np.zeros(hidden_units),                                    # b1
                rng.normal(0.0, 0.1, size=hidden_units),                   # w2
                np.zeros(1),                                               # b2
            ]
        else:
            self.params = [np.zeros(feature_count), np.zeros(1)]  # w, b

    def scores(self, X: np.ndarray) -> np.ndarray:
        Xm = X * self.mask
        if self.hidden_units > 0:
            W1, b1, w2, b2 = self.params
            return np.tanh(Xm @ W1 + b1) @ w2 + b2[0]
        w, b = self.params
        return Xm @ w + b[0]

    def score_one(self, x: np.ndarray) -> float:
        return float(self.scores(x.reshape(1, -1))[0])

    def grad(self, X: np.ndarray, dscore: np.ndarray) -> list[np.ndarray]:
        """Backpropagate d(objective)/d(score) to the parameters."""
        Xm = X * self.mask
        if self.hidden_units > 0:
            W1, b1, w2, _ = self.params
            H = np.tanh(Xm @ W1 + b1)
            g_w2 = H.T @ dscore
            g_b2 = np.array([dscore.sum()])
            dH = np.outer(dscore, w2) * (1.0 - H * H)
            g_W1 = Xm.T @ dH
            g_b1 = dH.sum(axis=0)
            return [g_W1, g_b1, g_w2, g_b2]
        g_w = Xm.T @ dscore
        g_b = np.array([dscore.sum()])
        return [g_w, g_b]

    def add_scaled(self, grads: list[np.ndarray], scale: float) -> None:
        for p, g in zip(self.params, grads):
            p += scale * g

    def zero_grads(self) -> list[np.ndarray]:
        return [np.zeros_like(p) for p in self.params]

    def get_flat(self) -> np.ndarray:
        return np.concatenate([p.ravel() for p in self.params])

    def set_flat(self, flat: np.ndarray) -> None:
        offset = 0
        for p in self.params:
            p[...] = flat[offset:offset + p.size].reshape(p.shape)
            offset += p.size

    def to_lines(self):
        yield f"hidden {self.hidden_units}"
        for p in self.params:
            yield " ".join(repr(float(v)) for v in p.ravel())

    @classmethod
    def from_lines(cls, lines, feature_count: int,
                   masked: tuple[int, ...]) -> "NeuralScorer":
        hidden = int(next(lines).split()[1])
        scorer = cls(feature_count, masked, hidden, seed=0)
        for p in scorer.params:
            values = [float(tok) for tok in next(lines).split()]
            if len(values) != p.size:
                raise ValueError(
                    f"expected {p.size} parameters, got {len(values)}")
            p[...] = np.array(values).reshape(p.shape)
        return scorer


def softmax(values: np.ndarray) -> np.ndarray:
    shifted = values - values.max()
    e = np.exp(shifted)
    return e / e.sum()


def log_softmax(values: np.ndarray) -> np.ndarray:
    shifted = values - values.max()
    return shifted - np.log(np.exp(shifted).sum())


def listnet_loss_and_grad(scores: np.ndarray,
                          labels: np.ndarray) -> tuple[float, np.ndarray]:
    """Top-one cross entropy between the label and score distributions.

    Returns the per-query loss and d(loss)/d(scores).
    """
    target = softmax(labels.astype(np.float64))
    loss = float(-(target * log_softmax(scores)).sum())
    dscore = softmax(scores) - target
    return loss, dscore


def train_listnet(dataset: Dataset, cfg: TrainConfig,
                  loss_history: list[float] | None = None) -> RankingModel:
    """Gradient descent on the mean per-query top-one cross entropy."""
    check_trainable(dataset, cfg)
    blocks = query_blocks(dataset)
    scorer = NeuralScorer(dataset.feature_count, dataset.masked,
                          cfg.hidden_units, cfg.seed)
    m = len(blocks)
    for epoch in range(cfg.rounds):
        grads = scorer.zero_grads()
        total_loss = 0.0
        for block in blocks:
            s = scorer.scores(block.X)
            loss, dscore = listnet_loss_and_grad(s, block.y)
            total_loss += loss
            for g, extra in zip(grads, scorer.grad(block.X, dscore)):
                g += extra
        mean_loss = total_loss / m
        if not np.isfinite(mean_loss):
            raise DivergenceError(epoch)
        if loss_history is not None:
            loss_history.append(mean_loss)
        scorer.add_scaled(grads, -cfg.learning_rate / m)
    return RankingModel(
        kind=KIND_LISTNET, feature_count=dataset.feature_count,
        masked=dataset.masked, seed=cfg.seed,
        meta={
            "epochs": str(cfg.rounds),
            "learning_rate": repr(cfg.learning_rate),
            "hidden_units": str(cfg.hidden_units),
            "objective": "top1-cross-entropy",
        },
        scorer=scorer,
    )


def lambdarank_epoch_grads(scorer: NeuralScorer, blocks: list[QueryBlock],
                           k: int = 10) -> list[np.ndarray]:
    """Ascent gradients summed over queries at the current parameters."""
    grads = scorer.zero_grads()
    for block in blocks:
        s = scorer.scores(block.X)
        lambdas, _ = lambda_gradients(block.y.tolist(), s.tolist(),
                                      block.doc_ids, k=k)
        for g, extra in zip(grads, scorer.grad(block.X, lambdas)):
            g += extra
    return grads


def train_lambdarank(dataset: Dataset, cfg: TrainConfig) -> RankingModel:
    """Gradient ascent on NDCG@10-weighted pairwise lambdas."""
    check_trainable(dataset, cfg)
    blocks = query_blocks(dataset)
    scorer = NeuralScorer(dataset.feature_count, dataset.masked,
                          cfg.hidden_units, cfg.seed)
    m = len(blocks)
    for epoch in range(cfg.rounds):
        grads = lambdarank_epoch_grads(scorer, blocks)
        if not all(np.isfinite(g).all() for g in grads):
            raise DivergenceError(epoch)
        scorer.add_scaled(grads, cfg.learning_rate / m)
    return RankingModel(
        kind=KIND_LAMBDARANK, feature_count=dataset.feature_count,
        masked=dataset.masked, seed=cfg.seed,
        meta={
            "epochs": str(cfg.rounds),
            "learning_rate": repr(cfg.learning_rate),
            "hidden_units": str(cfg.hidden_units),
            "objective": "ndcg@10-lambda",
        },
        scorer=scorer,
    )
