"""Shared trainer/scorer contract: model type, config, ranking, persistence.

Model files are versioned text ("# cof-model v1"); floats are written with
repr so reloaded models score bit-identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

import numpy as np

from ..errors import ModelFormatError, TrainingError, ValidationError
from ..features import FeatureVector, Instance
from ..letor_io import Dataset
from ..metrics import RankedList

MODEL_MAGIC = "# cof-model v1"

KIND_ADARANK = "adarank"
KIND_LISTNET = "listnet"
KIND_MART = "mart"
KIND_LAMBDARANK = "lambdarank"
KIND_LAMBDAMART = "lambdamart"
ALGORITHMS = (KIND_ADARANK, KIND_LISTNET, KIND_MART, KIND_LAMBDARANK,
              KIND_LAMBDAMART)

_DEFAULT_ROUNDS = {
    KIND_ADARANK: 500,
    KIND_LISTNET: 1500,
    KIND_LAMBDARANK: 1500,
    KIND_MART: 300,
    KIND_LAMBDAMART: 300,
}
_DEFAULT_LEARNING_RATE = {
    KIND_ADARANK: 1.0,  # unused: combination weights come from the boosting step
    KIND_LISTNET: 1e-3,
    KIND_LAMBDARANK: 1e-3,
    KIND_MART: 0.1,
    KIND_LAMBDAMART: 0.1,
}


@dataclass(frozen=True)
class TrainConfig:
    """Budgets and knobs for one training run.

    rounds counts boosting rounds, trees or epochs depending on the
    algorithm; rounds == 0 is rejected at train time.
    """

    rounds: int
    learning_rate: float
    leaves: int = 10
    metric: str = "MAP"
    metric_k: int = 10
    hidden_units: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.rounds < 0:
            raise ValidationError(f"rounds must be >= 0, got {self.rounds}")
        if self.learning_rate <= 0:
            raise ValidationError(
                f"learning_rate must be > 0, got {self.learning_rate}")
        if self.leaves < 1:
            raise ValidationError(f"leaves must be >= 1, got {self.leaves}")
        if not (1 <= self.metric_k <= 10):
            raise ValidationError(
                f"metric cutoff must be in 1..10, got {self.metric_k}")
        if self.hidden_units < 0:
            raise ValidationError(
                f"hidden_units must be >= 0, got {self.hidden_units}")

    @classmethod
    def for_algorithm(cls, kind: str, rounds: int | None = None,
                      learning_rate: float | None = None,
                      **kwargs) -> "TrainConfig":
        if kind not in ALGORITHMS:
            raise ValidationError(f"unknown algorithm {kind!r}")
        return cls(
            rounds=_DEFAULT_ROUNDS[kind] if rounds is None else rounds,
            learning_rate=(_DEFAULT_LEARNING_RATE[kind]
                           if learning_rate is None else learning_rate),
            **kwargs,
        )


@dataclass
class RankingModel:
    kind: str
    feature_count: int
    masked: tuple[int, ...]  # 1-based slots excluded from scoring
    seed: int
    meta: dict[str, str]
    scorer: object

    def score_one(self, values: Sequence[float]) -> float:
        return self.scorer.score_one(np.asarray(values, dtype=np.float64))


@dataclass
class QueryBlock:
    """One query's instances as arrays, rows sorted by doc_id."""

    query_id: int
    doc_ids: list[str]
    X: np.ndarray  # (n_docs, n_features)
    y: np.ndarray  # (n_docs,) int labels


def query_blocks(dataset: Dataset) -> list[QueryBlock]:
    blocks = []
    for qid, group in sorted(dataset.groups().items()):
        blocks.append(QueryBlock(
            query_id=qid,
            doc_ids=[inst.doc_id for inst in group],
            X=np.array([inst.features.values for inst in group],
                       dtype=np.float64),
            y=np.array([inst.label for inst in group], dtype=np.int64),
        ))
    return blocks


def allowed_features(dataset: Dataset) -> list[int]:
    """0-based columns a trainer may look at, honoring the dataset mask."""
    masked = set(dataset.masked)
    return [i for i in range(dataset.feature_count) if (i + 1) not in masked]


def check_trainable(dataset: Dataset, cfg: TrainConfig) -> None:
    if cfg.rounds == 0:
        raise TrainingError("rounds is 0: no model would be produced")
    if len(dataset) == 0:
        raise TrainingError("dataset is empty")
    for group in dataset.groups().values():
        labels = {inst.label for inst in group}
        if len(labels) > 1:
            return
    raise TrainingError(
        "degenerate dataset: no query has both relevant and non-relevant "
        "documents"
    )


def score(model: RankingModel, features: FeatureVector | Sequence[float]) -> float:
    values = features.values if isinstance(features, FeatureVector) else features
    if len(values) != model.feature_count:
        raise ValidationError(
            f"model expects {model.feature_count} features, got {len(values)}")
    return model.score_one(values)


def rank(model: RankingModel, instances: Iterable[Instance]) -> RankedList:
    """Score one query's instances; sorts score desc, doc_id asc on ties."""
    instances = list(instances)
    if not instances:
        raise ValidationError("cannot rank an empty instance list")
    qids = {inst.query_id for inst in instances}
    if len(qids) != 1:
        raise ValidationError(f"rank() expects one query, got ids {sorted(qids)}")
    return RankedList.from_scores(
        query_id=instances[0].query_id,
        items=[(inst.doc_id, score(model, inst.features), inst.label)
               for inst in instances],
    )


def evaluate(model: RankingModel, dataset: Dataset, side: str = "train"):
    """Rank every query group and assemble the metric report."""
    from ..metrics import report
    lists = [rank(model, group) for _, group in sorted(dataset.groups().items())]
    return report(lists, side=side)


# --- persistence ----------------------------------------------------------

def _scorer_registry() -> dict[str, type]:
    from .adarank import WeakEnsemble
    from .boosting import TreeEnsemble
    from .gradient import NeuralScorer
    return {cls.tag: cls for cls in (WeakEnsemble, TreeEnsemble, NeuralScorer)}


EXPECTED_TAG = {
    KIND_ADARANK: "weak-ensemble",
    KIND_LISTNET: "neural",
    KIND_LAMBDARANK: "neural",
    KIND_MART: "trees",
    KIND_LAMBDAMART: "trees",
}


def save(model: RankingModel, sink: IO[str]) -> None:
    sink.write(MODEL_MAGIC + "\n")
    sink.write(f"kind: {model.kind}\n")
    sink.write(f"features: {model.feature_count}\n")
    masked = " ".join(str(i) for i in model.masked) or "none"
    sink.write(f"masked: {masked}\n")
    sink.write(f"seed: {model.seed}\n")
    for key in sorted(model.meta):
        sink.write(f"meta.{key}: {model.meta[key]}\n")
    sink.write(f"payload: {model.scorer.tag}\n")
    for line in model.scorer.to_lines():
        sink.write(line + "\n")
    sink.write("end\n")


def save_path(model: RankingModel, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        save(model, fh)


def _iter_lines(source) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            yield from (line.rstrip("\n") for line in fh)
    else:
        yield from (line.rstrip("\n") for line in source)


def load(source: str | Path | IO[str] | Iterable[str]) -> RankingModel:
    lines = _iter_lines(source)
    try:
        first = next(lines)
    except StopIteration:
        raise ModelFormatError("empty model file") from None
    if first.strip() != MODEL_MAGIC:
        raise ModelFormatError(f"bad magic line {first!r}")
    fields: dict[str, str] = {}
    meta: dict[str, str] = {}
    tag = None
    for line in lines:
        if line.startswith("payload: "):
            tag = line[len("payload: "):].strip()
            break
        key, sep, value = line.partition(": ")
        if not sep:
            raise ModelFormatError(f"malformed header line {line!r}")
        if key.startswith("meta."):
            meta[key[5:]] = value
        else:
            fields[key] = value
    if tag is None:
        raise ModelFormatError("truncated model file: missing payload")
    for required in ("kind", "features", "masked", "seed"):
        if required not in fields:
            raise ModelFormatError(f"missing header field {required!r}")
    kind = fields["kind"]
    if kind not in ALGORITHMS:
        raise ModelFormatError(f"unknown model kind {kind!r}")
    if EXPECTED_TAG[kind] != tag:
        raise ModelFormatError(
            f"kind mismatch: {kind} models use payload "
            f"{EXPECTED_TAG[kind]!r}, file has {tag!r}"
        )
    registry = _scorer_registry()
    masked_field = fields["masked"].strip()
    masked = () if masked_field == "none" else \
        tuple(int(tok) for tok in masked_field.split())
    try:
        feature_count = int(fields["features"])
        seed = int(fields["seed"])
        scorer = registry[tag].from_lines(lines, feature_count, masked)
        terminator = next(lines)
    except StopIteration:
        raise ModelFormatError("truncated model file") from None
    except (ValueError, IndexError) as exc:
        raise ModelFormatError(f"corrupt payload: {exc}") from None
    if terminator.strip() != "end":
        raise ModelFormatError(f"expected end marker, got {terminator!r}")
    return RankingModel(kind=kind, feature_count=feature_count, masked=masked,
                        seed=seed, meta=meta, scorer=scorer)
