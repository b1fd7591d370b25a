from cofrank import synth
from cofrank.corpus import compute_stats, ingest, load_judgments, load_queries
from cofrank.features import query_scope
from cofrank.text_pipeline import DEFAULT_STOPWORDS, PipelineConfig, process


def test_benchmark_shape():
    data = synth.generate(7)
    assert len(data.corpus_records) == 150
    assert len(data.query_records) == 10
    assert len(data.judgment_rows) == 150
    relevant = [row for row in data.judgment_rows if row[2] == 1]
    assert len(relevant) == 100
    judged_ids = {doc_id for _, doc_id, _ in data.judgment_rows}
    assert judged_ids == {rec["doc_id"] for rec in data.corpus_records}


def test_every_relevant_doc_has_full_query_scope():
    cfg = PipelineConfig()
    data = synth.generate(7)
    corpus = ingest(data.corpus_lines(), cfg)
    queries = {q.query_id: q for q in load_queries(data.query_lines(), cfg)}
    for qid, doc_id, raw in data.judgment_rows:
        if raw == 1:
            assert query_scope(queries[qid], corpus.get(doc_id)) == 3


def test_same_seed_is_identical():
    a, b = synth.generate(7), synth.generate(7)
    assert a.corpus_lines() == b.corpus_lines()
    assert a.query_lines() == b.query_lines()
    assert a.judgment_lines() == b.judgment_lines()


def test_different_seeds_differ():
    assert synth.generate(1).corpus_lines() != synth.generate(2).corpus_lines()


def test_categories_cover_all_classes():
    data = synth.generate(7)
    names = {rec["category"].lower() for rec in data.corpus_records}
    assert names == {"political", "sports", "economic", "artistic"}


def test_twin_pair_differs_only_in_judgment():
    data = synth.generate(7)
    by_id = {rec["doc_id"]: rec for rec in data.corpus_records}
    for qid in range(10):
        twin_nonrel = by_id[f"d{qid}n04"]
        matches = [
            rec for rec in data.corpus_records
            if rec["doc_id"].startswith(f"d{qid}r")
            and (rec["subject"], rec["lead"], rec["body"], rec["category"])
            == (twin_nonrel["subject"], twin_nonrel["lead"],
                twin_nonrel["body"], twin_nonrel["category"])
        ]
        assert matches, f"query {qid} twin has no relevant partner"
        # the non-relevant twin's id sorts first, so score ties always place
        # it above its relevant partner
        assert all(twin_nonrel["doc_id"] < rec["doc_id"] for rec in matches)


def test_vocabulary_is_pipeline_safe():
    cfg = PipelineConfig()
    data = synth.generate(3)
    corpus = ingest(data.corpus_lines(), cfg)
    stats = compute_stats(corpus)
    for term in stats.vocabulary:
        assert term == term.lower()
        assert term not in DEFAULT_STOPWORDS
        assert 2 <= len(term) <= 25
        # reprocessing any emitted term is stable
        assert process(term, cfg) == [term]


def test_write_files(tmp_path):
    data = synth.generate(5)
    paths = synth.write_files(data, tmp_path / "out")
    assert paths["corpus"].exists()
    assert paths["queries"].exists()
    assert paths["judgments"].exists()
    corpus = ingest(paths["corpus"], PipelineConfig())
    assert len(corpus) == 150
    judgments = load_judgments(paths["judgments"])
    assert len(judgments) == 150


def test_custom_shape():
    spec = synth.SynthSpec(n_queries=4, n_relevant=5, n_nonrelevant=5)
    data = synth.generate(11, spec)
    assert len(data.corpus_records) == 40
    assert sum(1 for row in data.judgment_rows if row[2] == 1) == 20
