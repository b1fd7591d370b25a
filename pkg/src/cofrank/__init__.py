"""Combination-of-features news ranking toolkit.

Pipeline: ingest JSON Lines news documents, preprocess text, compute the
12-feature query-document vectors, emit LETOR datasets, train five ranking
models and evaluate them with MAP / P@k / NDCG@k / ERR@k.
"""

__version__ = "0.1.0"
