"""The 12 query-document features behind the combination-of-features vector.

All logarithms here are natural logs. Term counts c(t, d) sum occurrences
over the subject, lead and body parts. Sums over query terms run over the
distinct terms of the query; the query-likelihood model weights each term
by its query frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .corpus import CorpusStats, Document, Judgment, Query
from .errors import EmptyCorpusError, ValidationError

SMOOTHING_DIRICHLET = "dirichlet"
SMOOTHING_JELINEK_MERCER = "jelinek-mercer"
SMOOTHING_ABSOLUTE_DISCOUNT = "absolute-discount"
SMOOTHING_METHODS = (
    SMOOTHING_DIRICHLET,
    SMOOTHING_JELINEK_MERCER,
    SMOOTHING_ABSOLUTE_DISCOUNT,
)

PRESET_PAPER_FAITHFUL = "paper-faithful"
PRESET_LEAKAGE_SAFE = "leakage-safe"

# Feature slots masked (zeroed and excluded from training) per preset. The
# query-id and relevance-code slots encode the judgment itself, so the safe
# preset hides them; the faithful preset keeps all 12.
PRESET_MASKS = {
    PRESET_PAPER_FAITHFUL: (),
    PRESET_LEAKAGE_SAFE: (1, 2),
}


@dataclass(frozen=True)
class Bm25Params:
    k1: float = 1.2
    b: float = 0.75

    def __post_init__(self):
        if self.k1 < 0:
            raise ValidationError(f"k1 must be >= 0, got {self.k1}")
        if not (0.0 <= self.b <= 1.0):
            raise ValidationError(f"b must be in [0,1], got {self.b}")


@dataclass(frozen=True)
class SmoothingConfig:
    method: str = SMOOTHING_DIRICHLET
    mu: float = 2000.0
    lam: float = 0.1
    delta: float = 0.7

    def __post_init__(self):
        if self.method not in SMOOTHING_METHODS:
            raise ValidationError(f"unknown smoothing method {self.method!r}")
        if self.method == SMOOTHING_DIRICHLET and self.mu <= 0:
            raise ValidationError(f"mu must be > 0, got {self.mu}")
        if self.method == SMOOTHING_JELINEK_MERCER and not (0 < self.lam < 1):
            raise ValidationError(f"lambda must be in (0,1), got {self.lam}")
        if self.method == SMOOTHING_ABSOLUTE_DISCOUNT and not (0 < self.delta < 1):
            raise ValidationError(f"delta must be in (0,1), got {self.delta}")


@dataclass(frozen=True)
class FeatureConfig:
    """Everything extraction needs besides corpus statistics."""

    bm25: Bm25Params = field(default_factory=Bm25Params)
    smoothing: SmoothingConfig = field(default_factory=SmoothingConfig)
    preset: str = PRESET_LEAKAGE_SAFE

    def __post_init__(self):
        if self.preset not in PRESET_MASKS:
            raise ValidationError(f"unknown feature preset {self.preset!r}")

    @property
    def masked(self) -> tuple[int, ...]:
        return PRESET_MASKS[self.preset]

    def describe(self) -> str:
        masked = " ".join(str(i) for i in self.masked) or "none"
        return (
            f"preset={self.preset} masked={masked} "
            f"k1={self.bm25.k1} b={self.bm25.b} "
            f"smoothing={self.smoothing.method} mu={self.smoothing.mu} "
            f"lambda={self.smoothing.lam} delta={self.smoothing.delta}"
        )


FEATURE_NAMES = (
    "query_term_id",  # 1
    "is_rel_raw",     # 2
    "query_scope",    # 3
    "tf",             # 4
    "idf",            # 5
    "tf_idf",         # 6
    "icf",            # 7
    "bm25",           # 8
    "lm_score",       # 9
    "doc_len",        # 10
    "query_len",      # 11
    "doc_type_id",    # 12
)


@dataclass(frozen=True)
class FeatureVector:
    """The 12 values in their fixed 1..12 slot order."""

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != len(FEATURE_NAMES):
            raise ValidationError(
                f"expected {len(FEATURE_NAMES)} features, got {len(self.values)}"
            )

    def __getitem__(self, slot: int) -> float:
        """1-based slot access, matching the serialized feature indices."""
        if not (1 <= slot <= len(self.values)):
            raise IndexError(f"feature slot {slot} out of range")
        return self.values[slot - 1]

    def masked_copy(self, masked: tuple[int, ...]) -> "FeatureVector":
        values = list(self.values)
        for slot in masked:
            values[slot - 1] = 0.0
        return FeatureVector(tuple(values))


@dataclass(frozen=True)
class Instance:
    query_id: int
    doc_id: str
    label: int  # binary relevance
    features: FeatureVector


def tf(query: Query, doc: Document) -> float:
    """Sum over shared terms of log(c + 1)."""
    total = 0.0
    for term in sorted(set(query.terms)):
        c = doc.term_count(term)
        if c > 0:
            total += math.log(c + 1)
    return total


def idf(query: Query, stats: CorpusStats) -> float:
    """Sum over query terms of log(N / df); unseen terms contribute 0."""
    total = 0.0
    for term in sorted(set(query.terms)):
        df = stats.df.get(term, 0)
        if df > 0:
            total += math.log(stats.n_docs / df)
    return total


def tf_idf(query: Query, doc: Document, stats: CorpusStats) -> float:
    """Sum over shared terms of log(c + 1) * log(N / df)."""
    total = 0.0
    for term in sorted(set(query.terms)):
        c = doc.term_count(term)
        df = stats.df.get(term, 0)
        if c > 0 and df > 0:
            total += math.log(c + 1) * math.log(stats.n_docs / df)
    return total


def icf(query: Query, stats: CorpusStats) -> float:
    """Sum over query terms of log(|C| / cf); unseen terms contribute 0."""
    total = 0.0
    for term in sorted(set(query.terms)):
        cf = stats.cf.get(term, 0)
        if cf > 0:
            total += math.log(stats.total_tokens / cf)
    return total


def bm25(query: Query, doc: Document, stats: CorpusStats,
         params: Bm25Params) -> float:
    """Okapi weighting with saturation k1 and length normalization b."""
    if stats.avgdl <= 0:
        raise EmptyCorpusError("bm25 undefined: average document length is 0")
    total = 0.0
    norm = params.k1 * (1.0 - params.b + params.b * doc.length_tokens / stats.avgdl)
    for term in sorted(set(query.terms)):
        c = doc.term_count(term)
        df = stats.df.get(term, 0)
        if c > 0 and df > 0:
            w = math.log(stats.n_docs / df)
            total += w * (c * (params.k1 + 1.0)) / (c + norm)
    return total


def collection_prob(term: str, stats: CorpusStats) -> float:
    """p(t|C) = cf/|C|, floored at 1/(|C| + |V|) for unseen terms."""
    if stats.total_tokens <= 0:
        raise EmptyCorpusError("collection model undefined: corpus has no tokens")
    cf = stats.cf.get(term, 0)
    if cf > 0:
        return cf / stats.total_tokens
    return 1.0 / (stats.total_tokens + len(stats.df))


def smoothed_doc_prob(term: str, doc: Document, stats: CorpusStats,
                      smoothing: SmoothingConfig) -> float:
    """The smoothed document model p(t | theta_d).

    For an empty document every method degenerates to the collection model.
    """
    p_c = collection_prob(term, stats)
    dl = doc.length_tokens
    c = doc.term_count(term)
    if smoothing.method == SMOOTHING_DIRICHLET:
        return (c + smoothing.mu * p_c) / (dl + smoothing.mu)
    if dl == 0:
        return p_c
    if smoothing.method == SMOOTHING_JELINEK_MERCER:
        return (1.0 - smoothing.lam) * c / dl + smoothing.lam * p_c
    # absolute discount
    discounted = max(c - smoothing.delta, 0.0) / dl
    backoff = smoothing.delta * doc.distinct_terms / dl
    return discounted + backoff * p_c


def lm_score(query: Query, doc: Document, stats: CorpusStats,
             smoothing: SmoothingConfig) -> float:
    """Query-likelihood score: sum of p(t|theta_q) * log p(t|theta_d).

    Always <= 0; the query model is the maximum-likelihood term distribution
    of the query.
    """
    if query.length_terms == 0:
        raise ValidationError(f"query {query.query_id}: no terms after preprocessing")
    counts = query.term_counts
    total = 0.0
    for term in sorted(counts):
        p_q = counts[term] / query.length_terms
        total += p_q * math.log(smoothed_doc_prob(term, doc, stats, smoothing))
    return total


def query_scope(query: Query, doc: Document) -> int:
    """How many of subject/lead/body contain at least one query term."""
    terms = set(query.terms)
    return sum(1 for part in doc.parts if terms & part.token_set)


def extract(query: Query, doc: Document, judgment: Judgment,
            stats: CorpusStats, cfg: FeatureConfig) -> Instance:
    """Fill all 12 slots for one judged (query, document) pair."""
    if judgment.query_id != query.query_id or judgment.doc_id != doc.doc_id:
        raise ValidationError(
            f"judgment ({judgment.query_id}, {judgment.doc_id}) does not match "
            f"query {query.query_id} / doc {doc.doc_id}"
        )
    vector = FeatureVector((
        float(query.query_id),
        float(judgment.is_rel_raw),
        float(query_scope(query, doc)),
        tf(query, doc),
        idf(query, stats),
        tf_idf(query, doc, stats),
        icf(query, stats),
        bm25(query, doc, stats, cfg.bm25),
        lm_score(query, doc, stats, cfg.smoothing),
        float(doc.length_tokens),
        float(query.length_terms),
        float(doc.category),
    ))
    return Instance(
        query_id=query.query_id,
        doc_id=doc.doc_id,
        label=judgment.label,
        features=vector.masked_copy(cfg.masked),
    )
