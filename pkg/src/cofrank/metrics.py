"""Rank-quality measures: precision/recall, P@k, AP/MAP, NDCG@k and ERR@k.

NDCG uses base-2 logarithms in the position discount. ERR follows the
cascade form R_j = (2^y - 1) / 2^y_max with a 1/position weight. Ranked
lists are deterministic: score ties always break by ascending doc_id.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import UndefinedMetricError, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_KS = tuple(range(1, 11))


@dataclass(frozen=True)
class RankedList:
    """Documents of one query in rank order (best first)."""

    query_id: int
    doc_ids: tuple[str, ...]
    labels: tuple[int, ...]
    scores: tuple[float, ...]

    def __post_init__(self):
        n = len(self.doc_ids)
        if len(self.labels) != n or len(self.scores) != n:
            raise ValidationError("doc_ids, labels and scores must align")
        for i in range(1, n):
            if self.scores[i] > self.scores[i - 1]:
                raise ValidationError("scores must be non-increasing")
            if self.scores[i] == self.scores[i - 1] and \
                    self.doc_ids[i] < self.doc_ids[i - 1]:
                raise ValidationError("ties must be ordered by ascending doc_id")

    def __len__(self) -> int:
        return len(self.doc_ids)

    @property
    def n_relevant(self) -> int:
        return sum(1 for y in self.labels if y > 0)

    @classmethod
    def from_scores(cls, query_id: int,
                    items: Iterable[tuple[str, float, int]]) -> "RankedList":
        """Build from (doc_id, score, label) triples; sorts score desc, id asc."""
        ordered = sorted(items, key=lambda item: (-item[1], item[0]))
        return cls(
            query_id=query_id,
            doc_ids=tuple(d for d, _, _ in ordered),
            labels=tuple(y for _, _, y in ordered),
            scores=tuple(s for _, s, _ in ordered),
        )


def precision_recall(retrieved: set, relevant: set) -> tuple[float, float]:
    """Fraction of retrieved that are relevant, and of relevant retrieved."""
    if not retrieved:
        raise UndefinedMetricError("precision undefined: no retrieved documents")
    if not relevant:
        raise UndefinedMetricError("recall undefined: no relevant documents")
    hits = len(retrieved & relevant)
    return hits / len(retrieved), hits / len(relevant)


def precision_at_k(ranked: RankedList, k: int) -> float:
    """Relevant fraction of the top k; short lists pad as non-relevant."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    return sum(1 for y in ranked.labels[:k] if y > 0) / k


def average_precision(ranked: RankedList) -> float:
    """Mean of P@position over the positions holding relevant documents."""
    n_rel = ranked.n_relevant
    if n_rel == 0:
        raise UndefinedMetricError(
            f"query {ranked.query_id}: average precision undefined without "
            "relevant documents"
        )
    total = 0.0
    hits = 0
    for pos, y in enumerate(ranked.labels, start=1):
        if y > 0:
            hits += 1
            total += hits / pos
    return total / n_rel


def mean_average_precision(lists: Sequence[RankedList]) -> float:
    """Mean AP over queries that have at least one relevant document."""
    aps = []
    skipped = 0
    for ranked in lists:
        if ranked.n_relevant == 0:
            skipped += 1
            continue
        aps.append(average_precision(ranked))
    if skipped:
        logger.warning("MAP: skipped %d queries without relevant documents", skipped)
    if not aps:
        raise UndefinedMetricError("MAP undefined: no query has relevant documents")
    return sum(aps) / len(aps)


def _dcg(labels: Sequence[int], k: int) -> float:
    return sum(
        (2.0 ** y - 1.0) / math.log2(1.0 + pos)
        for pos, y in enumerate(labels[:k], start=1)
    )


def ndcg_at_k(ranked: RankedList, k: int) -> float:
    """DCG@k normalized by the ideally reordered list; 0 if nothing relevant."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    ideal = _dcg(sorted(ranked.labels, reverse=True), k)
    if ideal == 0.0:
        return 0.0
    return _dcg(ranked.labels, k) / ideal


def err_at_k(ranked: RankedList, k: int, y_max: int = 1) -> float:
    """Expected reciprocal rank under the cascade stop model."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if y_max < 1:
        raise ValidationError(f"y_max must be >= 1, got {y_max}")
    total = 0.0
    p_continue = 1.0
    for pos, y in enumerate(ranked.labels[:k], start=1):
        r = (2.0 ** y - 1.0) / (2.0 ** y_max)
        total += p_continue * r / pos
        p_continue *= 1.0 - r
    return total


@dataclass
class MetricReport:
    """Per-query and mean values for every metric family at k = 1..10."""

    side: str
    ks: tuple[int, ...]
    per_query: dict[int, dict[str, float | None]]
    mean: dict[str, float]
    zero_relevant_queries: int = 0

    def value(self, metric: str, k: int | None = None) -> float:
        key = metric if k is None else f"{metric}@{k}"
        return self.mean[key]


def report(lists: Sequence[RankedList], ks: Sequence[int] = DEFAULT_KS,
           side: str = "train", y_max: int = 1) -> MetricReport:
    """Evaluate MAP, P@k, NDCG@k and ERR@k for every query and on average."""
    if not lists:
        raise UndefinedMetricError("cannot evaluate an empty list set")
    ks = tuple(ks)
    per_query: dict[int, dict[str, float | None]] = {}
    zero_rel = 0
    for ranked in sorted(lists, key=lambda r: r.query_id):
        row: dict[str, float | None] = {}
        if ranked.n_relevant > 0:
            row["AP"] = average_precision(ranked)
        else:
            row["AP"] = None
            zero_rel += 1
        for k in ks:
            row[f"P@{k}"] = precision_at_k(ranked, k)
            row[f"NDCG@{k}"] = ndcg_at_k(ranked, k)
            row[f"ERR@{k}"] = err_at_k(ranked, k, y_max)
        per_query[ranked.query_id] = row
    if zero_rel:
        logger.warning("%d queries had no relevant documents", zero_rel)
    mean: dict[str, float] = {}
    aps = [row["AP"] for row in per_query.values() if row["AP"] is not None]
    if not aps:
        raise UndefinedMetricError("MAP undefined: no query has relevant documents")
    mean["MAP"] = sum(aps) / len(aps)
    n = len(per_query)
    for k in ks:
        for fam in ("P", "NDCG", "ERR"):
            key = f"{fam}@{k}"
            mean[key] = sum(row[key] for row in per_query.values()) / n
    return MetricReport(side=side, ks=ks, per_query=per_query,
                        mean=mean, zero_relevant_queries=zero_rel)


def format_table(rep: MetricReport) -> str:
    """Aligned plain-text rendering of a report."""
    lines = [
        f"split: {rep.side}   queries: {len(rep.per_query)}   "
        f"zero-relevant (skipped in MAP): {rep.zero_relevant_queries}",
        f"MAP: {rep.mean['MAP']:.6f}",
        "",
    ]
    header = ["metric"] + [f"k={k}" for k in rep.ks]
    rows = [header]
    for fam in ("P", "NDCG", "ERR"):
        rows.append([fam + "@k"] + [f"{rep.mean[f'{fam}@{k}']:.4f}" for k in rep.ks])
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    for row in rows:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def to_csv(rep: MetricReport) -> str:
    """CSV rendering: metric,k,split,value (mean values only)."""
    lines = ["metric,k,split,value"]
    lines.append(f"MAP,,{rep.side},{rep.mean['MAP']:.6f}")
    for fam in ("P", "NDCG", "ERR"):
        for k in rep.ks:
            lines.append(f"{fam},{k},{rep.side},{rep.mean[f'{fam}@{k}']:.6f}")
    return "\n".join(lines) + "\n"


def metric_fn(name: str, k: int = 10, y_max: int = 1):
    """Per-query metric callable used by metric-driven trainers."""
    name = name.upper()
    if name == "MAP":
        return average_precision
    if name == "NDCG":
        if not (1 <= k <= 10):
            raise ValidationError(f"metric cutoff must be in 1..10, got {k}")
        return lambda ranked: ndcg_at_k(ranked, k)
    if name == "ERR":
        if not (1 <= k <= 10):
            raise ValidationError(f"metric cutoff must be in 1..10, got {k}")
        return lambda ranked: err_at_k(ranked, k, y_max)
    raise ValidationError(f"unknown optimization metric {name!r}")
