import json

import pytest

from cofrank.corpus import (CorpusStats, compute_stats, ingest,
                            load_judgments, load_queries)
from cofrank.features import FeatureConfig, extract
from cofrank.letor_io import Dataset, build_header
from cofrank.text_pipeline import PipelineConfig
from cofrank import synth


def corpus_lines(docs):
    """docs: list of (doc_id, subject, lead, body, category) tuples."""
    return [
        json.dumps({"doc_id": d, "subject": s, "lead": l, "body": b,
                    "category": c})
        for d, s, l, b, c in docs
    ]


def make_corpus(docs, cfg=None):
    cfg = cfg or PipelineConfig()
    return ingest(corpus_lines(docs), cfg)


def make_stats(n_docs, df, cf, total_tokens, avgdl):
    """Fabricated statistics for formula-level unit tests."""
    return CorpusStats(n_docs=n_docs, df=df, cf=cf,
                       total_tokens=total_tokens, avgdl=avgdl)


@pytest.fixture(scope="session")
def pipeline_cfg():
    return PipelineConfig()


@pytest.fixture(scope="session")
def synth_seed7(pipeline_cfg):
    """The seed-7 synthetic benchmark: corpus, stats, queries, judgments."""
    data = synth.generate(7)
    corpus = ingest(data.corpus_lines(), pipeline_cfg)
    stats = compute_stats(corpus)
    queries = {q.query_id: q
               for q in load_queries(data.query_lines(), pipeline_cfg)}
    judgments = load_judgments(data.judgment_lines())
    return data, corpus, stats, queries, judgments


def extract_dataset(corpus, stats, queries, judgments, preset,
                    pipeline=None):
    cfg = FeatureConfig(preset=preset)
    instances = [
        extract(queries[j.query_id], corpus.get(j.doc_id), j, stats, cfg)
        for j in judgments
    ]
    header = build_header(pipeline or PipelineConfig(), cfg,
                          corpus.content_hash())
    return Dataset(instances, header=header)


@pytest.fixture(scope="session")
def dataset_faithful(synth_seed7):
    _, corpus, stats, queries, judgments = synth_seed7
    return extract_dataset(corpus, stats, queries, judgments,
                           "paper-faithful")


@pytest.fixture(scope="session")
def dataset_safe(synth_seed7):
    _, corpus, stats, queries, judgments = synth_seed7
    return extract_dataset(corpus, stats, queries, judgments, "leakage-safe")
