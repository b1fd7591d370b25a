"""Five ranking models behind one trainer/scorer contract."""

from ..errors import ValidationError
from ..letor_io import Dataset
from .adarank import train_adarank
from .base import (ALGORITHMS, KIND_ADARANK, KIND_LAMBDAMART, KIND_LAMBDARANK,
                   KIND_LISTNET, KIND_MART, RankingModel, TrainConfig,
                   evaluate, load, rank, save, save_path, score)
from .boosting import train_lambdamart, train_mart
from .gradient import train_lambdarank, train_listnet

_TRAINERS = {
    KIND_ADARANK: train_adarank,
    KIND_LISTNET: train_listnet,
    KIND_MART: train_mart,
    KIND_LAMBDARANK: train_lambdarank,
    KIND_LAMBDAMART: train_lambdamart,
}


def train(kind: str, dataset: Dataset, cfg: TrainConfig) -> RankingModel:
    """Train the named algorithm on a dataset."""
    if kind not in _TRAINERS:
        raise ValidationError(f"unknown algorithm {kind!r}; "
                              f"choose one of {', '.join(ALGORITHMS)}")
    return _TRAINERS[kind](dataset, cfg)


__all__ = [
    "ALGORITHMS", "RankingModel", "TrainConfig", "train", "train_adarank",
    "train_listnet", "train_mart", "train_lambdarank", "train_lambdamart",
    "score", "rank", "evaluate", "save", "save_path", "load",
]
