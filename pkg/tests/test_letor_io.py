import io
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cofrank.errors import DatasetFormatError
from cofrank.features import FeatureVector, Instance
from cofrank.letor_io import (Dataset, build_header, normalize_per_query,
                              read, write)


def inst(qid, doc_id, label, values):
    return Instance(query_id=qid, doc_id=doc_id, label=label,
                    features=FeatureVector(tuple(float(v) for v in values)))


def letor_line(label, qid, doc_id):
    feats = " ".join(f"{i}:{i}" for i in range(1, 13))
    comment = f" # {doc_id}" if doc_id is not None else ""
    return f"{label} qid:{qid} {feats}{comment}"


def rand_values(rng):
    return [rng.uniform(-50, 50) for _ in range(12)]


def roundtrip(dataset):
    buf = io.StringIO()
    write(dataset, buf)
    return read(io.StringIO(buf.getvalue()))


class TestWrite:
    def test_line_format(self):
        ds = Dataset([inst(0, "doc9", 1, range(12))])
        buf = io.StringIO()
        write(ds, buf)
        data_lines = [l for l in buf.getvalue().splitlines()
                      if not l.startswith("#")]
        assert data_lines == [
            "1 qid:0 1:0 2:1 3:2 4:3 5:4 6:5 7:6 8:7 9:8 10:9 11:10 12:11 "
            "# doc9"
        ]

    def test_relevant_line_starts_with_label_and_qid(self):
        ds = Dataset([inst(0, "a", 1, range(12))])
        buf = io.StringIO()
        write(ds, buf)
        line = [l for l in buf.getvalue().splitlines()
                if not l.startswith("#")][0]
        assert line.startswith("1 qid:0 ")

    def test_six_significant_digits(self):
        values = [math.pi] + [0.0] * 11
        ds = Dataset([inst(0, "a", 0, values)])
        buf = io.StringIO()
        write(ds, buf)
        assert "1:3.14159 " in buf.getvalue()

    def test_ordered_by_qid_then_doc_id(self):
        ds = Dataset([
            inst(1, "b", 0, range(12)),
            inst(0, "z", 1, range(12)),
            inst(1, "a", 0, range(12)),
            inst(0, "a", 1, range(12)),
        ])
        buf = io.StringIO()
        write(ds, buf)
        comments = [l.rsplit("# ", 1)[1] for l in buf.getvalue().splitlines()
                    if not l.startswith("#")]
        assert comments == ["a", "z", "a", "b"]

    def test_empty_dataset_header_only(self):
        ds = Dataset([], header={"normalized": "false"})
        buf = io.StringIO()
        write(ds, buf)
        lines = buf.getvalue().splitlines()
        assert lines == ["# cof-dataset v1", "# normalized: false"]


class TestRead:
    def test_roundtrip_preserves_structure(self):
        rng = random.Random(0)
        ds = Dataset([inst(q, f"d{i}", rng.randint(0, 1), rand_values(rng))
                      for q in range(3) for i in range(4)],
                     header={"masked_features": "1 2", "normalized": "false"})
        back = roundtrip(ds)
        assert len(back) == len(ds)
        assert back.header["masked_features"] == "1 2"
        assert back.masked == (1, 2)
        for a, b in zip(ds.instances, back.instances):
            assert (a.query_id, a.doc_id, a.label) == \
                (b.query_id, b.doc_id, b.label)
            for va, vb in zip(a.features.values, b.features.values):
                assert vb == pytest.approx(va, rel=1e-5, abs=1e-9)

    def test_roundtrip_is_exact_after_first_rendering(self):
        rng = random.Random(1)
        ds = Dataset([inst(0, f"d{i}", 1, rand_values(rng))
                      for i in range(5)])
        once = roundtrip(ds)
        twice = roundtrip(once)
        for a, b in zip(once.instances, twice.instances):
            assert a.features.values == b.features.values

    def test_malformed_line_number(self):
        lines = [letor_line(1, 0, "a"), "not a letor line"]
        with pytest.raises(DatasetFormatError) as err:
            read(lines)
        assert err.value.line_no == 2

    def test_non_contiguous_indices(self):
        line = "1 qid:0 1:1 3:2 # a"
        with pytest.raises(DatasetFormatError) as err:
            read([line])
        assert "contiguous" in str(err.value)

    def test_bad_label(self):
        with pytest.raises(DatasetFormatError):
            read([letor_line(2, 0, "a")])
        with pytest.raises(DatasetFormatError):
            read([letor_line("x", 0, "a")])

    def test_missing_qid_prefix(self):
        with pytest.raises(DatasetFormatError):
            read([letor_line(1, 0, "a").replace("qid:", "q=")])

    def test_wrong_feature_count(self):
        short = "1 qid:0 " + " ".join(f"{i}:1" for i in range(1, 12)) + " # a"
        with pytest.raises(DatasetFormatError) as err:
            read([short])
        assert "12" in str(err.value)

    def test_missing_comment_gets_synthetic_id(self):
        ds = read([letor_line(1, 0, None)])
        assert ds.instances[0].doc_id == "line1"

    def test_groups(self):
        ds = read([letor_line(1, 1, "a"), letor_line(0, 0, "b"),
                   letor_line(0, 1, "c")])
        groups = ds.groups()
        assert sorted(groups) == [0, 1]
        assert [i.doc_id for i in groups[1]] == ["a", "c"]


class TestNormalize:
    def test_constant_feature_maps_to_zero(self):
        ds = Dataset([inst(0, "a", 1, [5.0] * 12),
                      inst(0, "b", 0, [5.0] * 12)])
        norm = normalize_per_query(ds)
        for i in norm.instances:
            assert all(v == 0.0 for v in i.features.values)

    def test_min_max(self):
        ds = Dataset([inst(0, "a", 1, [2.0] * 12),
                      inst(0, "b", 0, [4.0] * 12)])
        norm = normalize_per_query(ds)
        assert all(v == 0.0 for v in norm.instances[0].features.values)
        assert all(v == 1.0 for v in norm.instances[1].features.values)

    def test_per_query_not_global(self):
        ds = Dataset([
            inst(0, "a", 1, [0.0] * 12), inst(0, "b", 0, [10.0] * 12),
            inst(1, "a", 1, [100.0] * 12), inst(1, "b", 0, [300.0] * 12),
        ])
        norm = normalize_per_query(ds)
        by_key = {(i.query_id, i.doc_id): i for i in norm.instances}
        assert by_key[(1, "a")].features.values[0] == 0.0
        assert by_key[(1, "b")].features.values[0] == 1.0

    def test_argsort_preserved(self):
        rng = random.Random(2)
        ds = Dataset([inst(0, f"d{i}", rng.randint(0, 1), rand_values(rng))
                      for i in range(8)])
        norm = normalize_per_query(ds)
        for f in range(12):
            before = sorted(range(8),
                            key=lambda i: ds.instances[i].features.values[f])
            after = sorted(range(8),
                           key=lambda i: norm.instances[i].features.values[f])
            assert before == after

    def test_idempotent(self):
        rng = random.Random(3)
        ds = Dataset([inst(q, f"d{i}", rng.randint(0, 1), rand_values(rng))
                      for q in range(2) for i in range(5)])
        once = normalize_per_query(ds)
        twice = normalize_per_query(once)
        for a, b in zip(once.instances, twice.instances):
            assert b.features.values == pytest.approx(a.features.values,
                                                      abs=1e-12)
        assert once.header["normalized"] == "true"

    @given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=10))
    @settings(max_examples=100)
    def test_values_always_in_unit_interval(self, column):
        ds = Dataset([inst(0, f"d{i:02d}", 0, [v] + [0.0] * 11)
                      for i, v in enumerate(column)])
        norm = normalize_per_query(ds)
        for i in norm.instances:
            assert 0.0 <= i.features.values[0] <= 1.0


def test_build_header_records_settings():
    from cofrank.features import FeatureConfig
    from cofrank.text_pipeline import PipelineConfig
    header = build_header(PipelineConfig(), FeatureConfig(preset="leakage-safe"),
                          corpus_hash="abc123", normalized=False)
    assert header["masked_features"] == "1 2"
    assert header["corpus_hash"] == "abc123"
    assert "stemmer=porter" in header["pipeline"]
    assert header["normalized"] == "false"
