"""Synthetic news corpus with the benchmark shape: 10 queries, 10 related
plus 5 non-related judged documents each, categories drawn from 4 classes.

Background text is Zipf-distributed over a pipeline-safe vocabulary (every
word survives preprocessing and its stem is a stemmer fixpoint). Related
documents carry the query word in subject, lead and body. Each query also
gets one "twin" pair: a non-related copy of a related document whose id
sorts first, so content features alone can never order the pair correctly
and the relevance-code feature keeps measurable value.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from .corpus import CATEGORY_NAMES
from .text_pipeline import DEFAULT_STOPWORDS, PipelineConfig, process

_CONSONANTS = "bcdfghjklmnprstvz"
_VOWELS = "aeiou"


@dataclass(frozen=True)
class SynthSpec:
    n_queries: int = 10
    n_relevant: int = 10
    n_nonrelevant: int = 5
    vocab_size: int = 500
    zipf_exponent: float = 1.1


@dataclass
class SynthData:
    corpus_records: list[dict]
    query_records: list[dict]
    judgment_rows: list[tuple[int, str, int]]

    def corpus_lines(self) -> list[str]:
        return [json.dumps(rec, sort_keys=True) for rec in self.corpus_records]

    def query_lines(self) -> list[str]:
        return [json.dumps(rec, sort_keys=True) for rec in self.query_records]

    def judgment_lines(self) -> list[str]:
        return [f"{qid}\t{doc_id}\t{raw}" for qid, doc_id, raw in self.judgment_rows]


def _random_word(rng: random.Random) -> str:
    syllables = rng.randint(2, 4)
    parts = []
    for _ in range(syllables):
        parts.append(rng.choice(_CONSONANTS) + rng.choice(_VOWELS))
    if rng.random() < 0.3:
        parts.append(rng.choice(_CONSONANTS))
    return "".join(parts)


def _pipeline_safe(word: str, cfg: PipelineConfig) -> str | None:
    """The word's stem, if processing the word and its stem is stable."""
    processed = process(word, cfg)
    if len(processed) != 1:
        return None
    stem = processed[0]
    if len(stem) < cfg.min_len or stem in DEFAULT_STOPWORDS:
        return None
    if process(stem, cfg) != [stem]:
        return None
    return stem


def build_vocabulary(rng: random.Random, size: int,
                     cfg: PipelineConfig) -> list[str]:
    """Distinct pipeline-safe words with pairwise distinct stems."""
    words: list[str] = []
    stems: set[str] = set()
    while len(words) < size:
        word = _random_word(rng)
        stem = _pipeline_safe(word, cfg)
        if stem is None or stem in stems:
            continue
        stems.add(stem)
        words.append(word)
    return words


def _sample_tokens(rng: random.Random, population: list[str],
                   weights: list[float], n: int) -> list[str]:
    return rng.choices(population, weights=weights, k=n)


def _inject(rng: random.Random, tokens: list[str], term: str, count: int) -> list[str]:
    out = list(tokens)
    for _ in range(count):
        out.insert(rng.randint(0, len(out)), term)
    return out


def _doc_record(doc_id: str, subject: list[str], lead: list[str],
                body: list[str], category: int) -> dict:
    subject_text = " ".join(subject).capitalize()
    return {
        "doc_id": doc_id,
        "subject": subject_text,
        "lead": " ".join(lead),
        "body": " ".join(body) + ".",
        "category": CATEGORY_NAMES[category].capitalize(),
    }


def generate(seed: int, spec: SynthSpec = SynthSpec(),
             cfg: PipelineConfig | None = None) -> SynthData:
    """Deterministic corpus + queries + judgments for a seed."""
    if cfg is None:
        cfg = PipelineConfig()
    rng = random.Random(seed)
    vocab = build_vocabulary(rng, spec.vocab_size, cfg)
    query_words = vocab[: spec.n_queries]
    background = vocab[spec.n_queries:]
    weights = [1.0 / (rank + 1) ** spec.zipf_exponent
               for rank in range(len(background))]

    corpus_records: list[dict] = []
    query_records: list[dict] = []
    judgment_rows: list[tuple[int, str, int]] = []

    for qid in range(spec.n_queries):
        term = query_words[qid]
        query_records.append({"query_id": qid, "text": term})
        relevant_parts: list[tuple[list[str], list[str], list[str], int]] = []
        for j in range(spec.n_relevant):
            subject = _inject(rng, _sample_tokens(rng, background, weights,
                                                  rng.randint(4, 7)),
                              term, 1)
            lead = _inject(rng, _sample_tokens(rng, background, weights,
                                               rng.randint(8, 14)),
                           term, rng.randint(1, 2))
            body = _inject(rng, _sample_tokens(rng, background, weights,
                                               rng.randint(18, 35)),
                           term, rng.randint(1, 4))
            category = rng.randrange(4)
            relevant_parts.append((subject, lead, body, category))
            doc_id = f"d{qid}r{j:02d}"
            corpus_records.append(_doc_record(doc_id, subject, lead, body,
                                              category))
            judgment_rows.append((qid, doc_id, 1))
        twin_source = rng.randrange(spec.n_relevant)
        for j in range(spec.n_nonrelevant):
            doc_id = f"d{qid}n{j:02d}"
            if j == spec.n_nonrelevant - 1:
                # twin: same content and category as one related document
                subject, lead, body, category = relevant_parts[twin_source]
            else:
                subject = _sample_tokens(rng, background, weights,
                                         rng.randint(4, 7))
                lead = _sample_tokens(rng, background, weights,
                                      rng.randint(8, 14))
                body = _sample_tokens(rng, background, weights,
                                      rng.randint(18, 35))
                if j < 2:  # hard negatives: the query word appears sparsely
                    lead = _inject(rng, lead, term, 1)
                    body = _inject(rng, body, term, 1)
                category = rng.randrange(4)
            corpus_records.append(_doc_record(doc_id, subject, lead, body,
                                              category))
            judgment_rows.append((qid, doc_id, 2))
    return SynthData(corpus_records=corpus_records,
                     query_records=query_records,
                     judgment_rows=judgment_rows)


def write_files(data: SynthData, out_dir: str | Path) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "corpus": out / "corpus.jsonl",
        "queries": out / "queries.jsonl",
        "judgments": out / "judgments.tsv",
    }
    paths["corpus"].write_text("\n".join(data.corpus_lines()) + "\n",
                               encoding="utf-8")
    paths["queries"].write_text("\n".join(data.query_lines()) + "\n",
                                encoding="utf-8")
    paths["judgments"].write_text("\n".join(data.judgment_lines()) + "\n",
                                  encoding="utf-8")
    return paths
