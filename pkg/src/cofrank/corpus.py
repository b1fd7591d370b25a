"""Document/query/judgment data model and global corpus statistics.

A Corpus is built once by :func:`ingest` and is immutable afterwards, as is
the :class:`CorpusStats` snapshot every feature formula reads.
"""

from __future__ import annotations

import hashlib
import json
import random
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import IO, Iterable, Iterator, Mapping

from .errors import EmptyCorpusError, ParseError, SplitError, ValidationError
from .text_pipeline import PipelineConfig, process

PART_KINDS = ("subject", "lead", "body")

CATEGORY_CODES = {"political": 0, "sports": 1, "economic": 2, "artistic": 3}
CATEGORY_NAMES = {code: name for name, code in CATEGORY_CODES.items()}


@dataclass(frozen=True)
class DocumentPart:
    kind: str  # "subject" | "lead" | "body"
    raw_text: str
    tokens: tuple[str, ...]

    @cached_property
    def token_set(self) -> frozenset[str]:
        return frozenset(self.tokens)


@dataclass(frozen=True)
class Document:
    doc_id: str
    parts: tuple[DocumentPart, ...]
    category: int  # 0..3
    length_tokens: int  # |d|: processed tokens over all parts

    def term_count(self, term: str) -> int:
        """Occurrences of term across subject, lead and body."""
        return self.term_counts.get(term, 0)

    @cached_property
    def term_counts(self) -> Counter:
        counts: Counter = Counter()
        for part in self.parts:
            counts.update(part.tokens)
        return counts

    @property
    def distinct_terms(self) -> int:
        return len(self.term_counts)


def _make_document(doc_id: str, texts: dict[str, str], category: int,
                   cfg: PipelineConfig) -> Document:
    parts = tuple(
        DocumentPart(kind=kind, raw_text=texts[kind],
                     tokens=tuple(process(texts[kind], cfg)))
        for kind in PART_KINDS
    )
    return Document(
        doc_id=doc_id,
        parts=parts,
        category=category,
        length_tokens=sum(len(p.tokens) for p in parts),
    )


@dataclass(frozen=True)
class Query:
    query_id: int
    terms: tuple[str, ...]

    @property
    def length_terms(self) -> int:
        return len(self.terms)

    @property
    def term_counts(self) -> Counter:
        return Counter(self.terms)


@dataclass(frozen=True)
class Judgment:
    query_id: int
    doc_id: str
    is_rel_raw: int  # 1 = related, 2 = non-related

    def __post_init__(self):
        if self.is_rel_raw not in (1, 2):
            raise ValidationError(
                f"judgment for ({self.query_id}, {self.doc_id}): "
                f"is_rel_raw must be 1 or 2, got {self.is_rel_raw}"
            )

    @property
    def label(self) -> int:
        """Binary relevance: 1 iff is_rel_raw == 1."""
        return 1 if self.is_rel_raw == 1 else 0


@dataclass(frozen=True)
class CorpusStats:
    """Global statistics: N, df, cf, |C| and avgdl. Immutable."""

    n_docs: int
    df: Mapping[str, int]
    cf: Mapping[str, int]
    total_tokens: int
    avgdl: float

    @property
    def vocabulary(self) -> frozenset[str]:
        return frozenset(self.df)

    def to_json(self) -> str:
        payload = {
            "n_docs": self.n_docs,
            "avgdl": self.avgdl,
            "total_tokens": self.total_tokens,
            "vocabulary_size": len(self.df),
            "df": dict(sorted(self.df.items())),
            "cf": dict(sorted(self.cf.items())),
        }
        return json.dumps(payload, indent=2, sort_keys=False)


class Corpus:
    """Ingested document collection; read-only after construction."""

    def __init__(self, documents: list[Document], config: PipelineConfig):
        self.config = config
        self._documents = list(documents)
        self._by_id = {d.doc_id: d for d in self._documents}

    def __len__(self) -> int:
        return len(self._documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self._documents)

    @property
    def documents(self) -> list[Document]:
        return list(self._documents)

    def get(self, doc_id: str) -> Document:
        try:
            return self._by_id[doc_id]
        except KeyError:
            raise ValidationError(f"unknown doc_id {doc_id!r}") from None

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._by_id

    def content_hash(self) -> str:
        """Stable sha256 over doc ids, categories and token streams."""
        h = hashlib.sha256()
        for doc in sorted(self._documents, key=lambda d: d.doc_id):
            h.update(doc.doc_id.encode("utf-8"))
            h.update(b"\x00")
            h.update(str(doc.category).encode())
            for part in doc.parts:
                h.update(b"\x01")
                h.update(" ".join(part.tokens).encode("utf-8"))
            h.update(b"\x02")
        return h.hexdigest()


def parse_category(value) -> int:
    """Accept 0..3 codes or case-insensitive category names."""
    if isinstance(value, bool):
        raise ValidationError(f"invalid category {value!r}")
    if isinstance(value, int):
        if value in CATEGORY_NAMES:
            return value
        raise ValidationError(f"category code out of range: {value}")
    if isinstance(value, str):
        name = value.strip().lower()
        if name in CATEGORY_CODES:
            return CATEGORY_CODES[name]
        if name.isdigit() and int(name) in CATEGORY_NAMES:
            return int(name)
    raise ValidationError(f"unknown category {value!r}")


def _iter_lines(source) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            yield from fh
    else:
        yield from source


def ingest(source: str | Path | IO | Iterable[str], cfg: PipelineConfig) -> Corpus:
    """Build a Corpus from JSON Lines records.

    Each line is an object with doc_id, subject, lead, body and category.
    Raises ParseError (with the line number) on malformed lines and
    ValidationError on duplicate ids or unknown categories.
    """
    documents: list[Document] = []
    seen: set[str] = set()
    for line_no, line in enumerate(_iter_lines(source), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(line_no, f"invalid JSON: {exc.msg}") from None
        if not isinstance(record, dict):
            raise ParseError(line_no, "record is not a JSON object")
        missing = [k for k in ("doc_id", "subject", "lead", "body", "category")
                   if k not in record]
        if missing:
            raise ParseError(line_no, f"missing fields: {', '.join(missing)}")
        doc_id = str(record["doc_id"])
        if doc_id in seen:
            raise ValidationError(f"line {line_no}: duplicate doc_id {doc_id!r}")
        seen.add(doc_id)
        try:
            category = parse_category(record["category"])
        except ValidationError as exc:
            raise ValidationError(f"line {line_no}: {exc}") from None
        texts = {kind: str(record[kind]) for kind in PART_KINDS}
        documents.append(_make_document(doc_id, texts, category, cfg))
    return Corpus(documents, cfg)


def compute_stats(corpus: Corpus) -> CorpusStats:
    """Count df/cf/|C| and avgdl over the whole corpus."""
    if len(corpus) == 0:
        raise EmptyCorpusError("cannot compute statistics of an empty corpus")
    df: Counter = Counter()
    cf: Counter = Counter()
    total = 0
    for doc in corpus:
        counts = doc.term_counts
        df.update(counts.keys())
        cf.update(counts)
        total += doc.length_tokens
    return CorpusStats(
        n_docs=len(corpus),
        df=dict(df),
        cf=dict(cf),
        total_tokens=total,
        avgdl=total / len(corpus),
    )


def make_query(query_id: int, text: str, cfg: PipelineConfig) -> Query:
    if query_id < 0:
        raise ValidationError(f"query_id must be nonnegative, got {query_id}")
    return Query(query_id=query_id, terms=tuple(process(text, cfg)))


def load_queries(source: str | Path | IO | Iterable[str],
                 cfg: PipelineConfig) -> list[Query]:
    """Read queries from JSON Lines records with query_id and text fields."""
    queries: list[Query] = []
    seen: set[int] = set()
    for line_no, line in enumerate(_iter_lines(source), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
            query_id = int(record["query_id"])
            text = str(record["text"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ParseError(line_no, f"bad query record: {exc}") from None
        if query_id in seen:
            raise ValidationError(f"line {line_no}: duplicate query_id {query_id}")
        seen.add(query_id)
        queries.append(make_query(query_id, text, cfg))
    return queries


def load_judgments(source: str | Path | IO | Iterable[str]) -> list[Judgment]:
    """Read whitespace-separated judgment rows: query_id doc_id is_rel_raw."""
    rows: list[Judgment] = []
    seen: set[tuple[int, str]] = set()
    for line_no, line in enumerate(_iter_lines(source), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ParseError(line_no, f"expected 3 fields, got {len(fields)}")
        try:
            query_id = int(fields[0])
            raw = int(fields[2])
        except ValueError:
            raise ParseError(line_no, "query_id and is_rel_raw must be integers") from None
        key = (query_id, fields[1])
        if key in seen:
            raise ValidationError(f"line {line_no}: duplicate judgment {key}")
        seen.add(key)
        try:
            rows.append(Judgment(query_id=query_id, doc_id=fields[1], is_rel_raw=raw))
        except ValidationError as exc:
            raise ValidationError(f"line {line_no}: {exc}") from None
    return rows


def choose_train_queries(query_ids: Iterable[int], train_fraction: float,
                         seed: int) -> set[int]:
    """Pick round(train_fraction * n) query ids, at least 1 on each side."""
    if not (0.0 < train_fraction < 1.0):
        raise ValidationError(f"train_fraction must be in (0,1), got {train_fraction}")
    ids = sorted(set(query_ids))
    if len(ids) < 2:
        raise SplitError(f"need at least 2 distinct queries, got {len(ids)}")
    rng = random.Random(seed)
    rng.shuffle(ids)
    n_train = int(train_fraction * len(ids) + 0.5)  # round half up
    n_train = max(1, min(len(ids) - 1, n_train))
    return set(ids[:n_train])


def split_by_query(judgments: Iterable[Judgment], train_fraction: float,
                   seed: int) -> tuple[list[Judgment], list[Judgment]]:
    """Partition judgments at query granularity.

    The train side gets round(train_fraction * n_queries) queries, clamped so
    both sides keep at least one. Deterministic for a fixed seed.
    """
    judgments = list(judgments)
    train_ids = choose_train_queries((j.query_id for j in judgments),
                                     train_fraction, seed)
    train = [j for j in judgments if j.query_id in train_ids]
    test = [j for j in judgments if j.query_id not in train_ids]
    return train, test
