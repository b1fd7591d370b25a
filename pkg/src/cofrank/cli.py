"""Command-line front end: ingest, stats, extract, split, train, evaluate,
rank, synth and reproduce.

Settings come from an optional TOML config file; every flag overrides the
file. The COF_LOG environment variable sets the logging level. Commands
exit nonzero with a single ``error: <command>: <reason>`` line on failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import rankers, synth
from .corpus import (choose_train_queries, compute_stats, ingest,
                     load_judgments, load_queries)
from .errors import CofRankError, ValidationError
from .features import Bm25Params, FeatureConfig, SmoothingConfig, extract
from .letor_io import Dataset, build_header, normalize_per_query, read, write_path
from .metrics import format_table, to_csv
from .text_pipeline import PipelineConfig, load_stopwords

logger = logging.getLogger("cofrank")

REPRODUCE_ORDER = ("adarank", "listnet", "mart", "lambdamart", "lambdarank")
REPRODUCE_LABELS = {
    "adarank": "AdaRank", "listnet": "ListNet", "mart": "MART",
    "lambdamart": "LambdaMART", "lambdarank": "LambdaRank",
}
SYNTHETIC_FOOTER = (
    "note: results computed on a synthetic corpus; the original IRNA news\n"
    "collection is not redistributable, so test-side values here are not\n"
    "comparable with results measured on that collection."
)


@dataclass
class RunConfig:
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    features: FeatureConfig = field(default_factory=FeatureConfig)
    train_overrides: dict = field(default_factory=dict)
    split_fraction: float = 0.7
    split_seed: int = 0
    synth_seed: int = 0


def _build_run_config(args) -> RunConfig:
    raw: dict = {}
    if getattr(args, "config", None):
        with open(args.config, "rb") as fh:
            raw = tomllib.load(fh)

    pipe_raw = dict(raw.get("pipeline", {}))
    pipe_kwargs = {}
    for key in ("min_len", "max_len", "stemmer", "digit_policy"):
        if key in pipe_raw:
            pipe_kwargs[key] = pipe_raw[key]
    if pipe_raw.get("stopwords_file"):
        pipe_kwargs["stopwords"] = load_stopwords(pipe_raw["stopwords_file"])
    pipeline = PipelineConfig(**pipe_kwargs)

    bm25_raw = raw.get("bm25", {})
    bm25 = Bm25Params(k1=float(bm25_raw.get("k1", 1.2)),
                      b=float(bm25_raw.get("b", 0.75)))
    sm_raw = raw.get("smoothing", {})
    smoothing = SmoothingConfig(
        method=sm_raw.get("method", "dirichlet"),
        mu=float(sm_raw.get("mu", 2000.0)),
        lam=float(sm_raw.get("lambda", 0.1)),
        delta=float(sm_raw.get("delta", 0.7)),
    )
    preset = raw.get("features", {}).get("preset", "leakage-safe")
    if getattr(args, "preset", None):
        preset = args.preset
    features = FeatureConfig(bm25=bm25, smoothing=smoothing, preset=preset)

    train_raw = dict(raw.get("train", {}))
    overrides = {}
    for toml_key, kw in (("rounds", "rounds"), ("learning_rate", "learning_rate"),
                         ("leaves", "leaves"), ("metric", "metric"),
                         ("k", "metric_k"), ("hidden_units", "hidden_units"),
                         ("seed", "seed")):
        if toml_key in train_raw:
            overrides[kw] = train_raw[toml_key]
    for flag, kw in (("rounds", "rounds"), ("learning_rate", "learning_rate"),
                     ("leaves", "leaves"), ("metric", "metric"),
                     ("k", "metric_k"), ("hidden_units", "hidden_units")):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[kw] = value
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed

    split_raw = raw.get("split", {})
    fraction = float(split_raw.get("fraction", 0.7))
    if getattr(args, "fraction", None) is not None:
        fraction = args.fraction
    split_seed = int(split_raw.get("seed", 0))
    if getattr(args, "seed", None) is not None:
        split_seed = args.seed
    synth_seed = int(raw.get("synth", {}).get("seed", 0))
    if getattr(args, "seed", None) is not None:
        synth_seed = args.seed

    return RunConfig(pipeline=pipeline, features=features,
                     train_overrides=overrides, split_fraction=fraction,
                     split_seed=split_seed, synth_seed=synth_seed)


def _extract_dataset(run: RunConfig, corpus_path, queries_path,
                     judgments_path, normalize: bool) -> Dataset:
    corpus = ingest(corpus_path, run.pipeline)
    stats = compute_stats(corpus)
    queries = {q.query_id: q for q in load_queries(queries_path, run.pipeline)}
    judgments = load_judgments(judgments_path)
    instances = []
    for judgment in judgments:
        if judgment.query_id not in queries:
            raise ValidationError(f"judgment references unknown query "
                                  f"{judgment.query_id}")
        instances.append(extract(queries[judgment.query_id],
                                 corpus.get(judgment.doc_id), judgment,
                                 stats, run.features))
    dataset = Dataset(instances, header=build_header(
        run.pipeline, run.features, corpus.content_hash()))
    if normalize:
        dataset = normalize_per_query(dataset)
    return dataset


def _split_dataset(dataset: Dataset, fraction: float,
                   seed: int) -> tuple[Dataset, Dataset]:
    train_ids = choose_train_queries(dataset.groups().keys(), fraction, seed)
    train = [i for i in dataset.instances if i.query_id in train_ids]
    test = [i for i in dataset.instances if i.query_id not in train_ids]
    head = dict(dataset.header)
    train_header = dict(head, split_side="train")
    test_header = dict(head, split_side="test")
    return (Dataset(train, dataset.feature_count, train_header),
            Dataset(test, dataset.feature_count, test_header))


# --- commands --------------------------------------------------------------

def cmd_ingest(args) -> int:
    run = _build_run_config(args)
    corpus = ingest(args.corpus, run.pipeline)
    stats = compute_stats(corpus)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "corpus.jsonl").write_text(
        Path(args.corpus).read_text(encoding="utf-8"), encoding="utf-8")
    (out_dir / "stats.json").write_text(stats.to_json() + "\n", encoding="utf-8")
    print(f"ingested {stats.n_docs} documents, avgdl {stats.avgdl:.4f}, "
          f"vocabulary {len(stats.df)}, hash {corpus.content_hash()[:12]}")
    return 0


def cmd_stats(args) -> int:
    run = _build_run_config(args)
    stats = compute_stats(ingest(args.corpus, run.pipeline))
    text = stats.to_json() + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_extract(args) -> int:
    run = _build_run_config(args)
    dataset = _extract_dataset(run, args.corpus, args.queries, args.judgments,
                               args.normalize)
    write_path(dataset, args.out)
    print(f"wrote {len(dataset)} instances over {len(dataset.groups())} "
          f"queries to {args.out}")
    return 0


def cmd_split(args) -> int:
    run = _build_run_config(args)
    dataset = read(args.dataset)
    train, test = _split_dataset(dataset, run.split_fraction, run.split_seed)
    write_path(train, args.train_out)
    write_path(test, args.test_out)
    print(f"train: {len(train.groups())} queries / {len(train)} instances; "
          f"test: {len(test.groups())} queries / {len(test)} instances")
    return 0


def cmd_train(args) -> int:
    run = _build_run_config(args)
    dataset = read(args.dataset)
    cfg = rankers.TrainConfig.for_algorithm(args.algorithm,
                                            **run.train_overrides)
    model = rankers.train(args.algorithm, dataset, cfg)
    rankers.save_path(model, args.out)
    print(f"trained {args.algorithm} on {len(dataset)} instances -> {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    model = rankers.load(args.model)
    dataset = read(args.dataset)
    side = args.split_tag or dataset.header.get("split_side", "train")
    rep = rankers.evaluate(model, dataset, side=side)
    table = format_table(rep)
    if args.table_out:
        Path(args.table_out).write_text(table, encoding="utf-8")
    sys.stdout.write(table)
    if args.csv_out:
        Path(args.csv_out).write_text(to_csv(rep), encoding="utf-8")
    return 0


def cmd_rank(args) -> int:
    model = rankers.load(args.model)
    dataset = read(args.dataset)
    lines = []
    for qid, group in sorted(dataset.groups().items()):
        ranked = rankers.rank(model, group)
        for position, (doc_id, score) in enumerate(
                zip(ranked.doc_ids, ranked.scores), start=1):
            lines.append(f"{qid}\t{position}\t{doc_id}\t{score:.6g}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_synth(args) -> int:
    run = _build_run_config(args)
    data = synth.generate(run.synth_seed)
    paths = synth.write_files(data, args.out_dir)
    print(f"wrote {len(data.corpus_records)} documents, "
          f"{len(data.query_records)} queries, "
          f"{len(data.judgment_rows)} judgments to {args.out_dir} "
          f"(seed {run.synth_seed})")
    return 0


def run_reproduce(seed: int, out_dir: Path | None = None
                  ) -> tuple[dict[str, dict[str, dict[str, float]]], str]:
    """Full benchmark-shaped run: synth -> extract -> split -> five models.

    Returns the per-algorithm mean metrics for both sides and the rendered
    four-table text.
    """
    pipeline = PipelineConfig()
    feat_cfg = FeatureConfig(preset="paper-faithful")
    results: dict[str, dict[str, dict[str, float]]] = {}
    stage = "synth"
    try:
        data = synth.generate(seed)
        stage = "extract"
        corpus = ingest(data.corpus_lines(), pipeline)
        stats = compute_stats(corpus)
        queries = {q.query_id: q
                   for q in load_queries(data.query_lines(), pipeline)}
        judgments = load_judgments(data.judgment_lines())
        instances = [extract(queries[j.query_id], corpus.get(j.doc_id), j,
                             stats, feat_cfg) for j in judgments]
        dataset = Dataset(instances, header=build_header(
            pipeline, feat_cfg, corpus.content_hash()))
        stage = "split"
        train_set, test_set = _split_dataset(dataset, 0.7, seed)
        for algo in REPRODUCE_ORDER:
            stage = f"train {algo}"
            cfg = rankers.TrainConfig.for_algorithm(algo, seed=seed)
            model = rankers.train(algo, train_set, cfg)
            if out_dir is not None:
                rankers.save_path(model, out_dir / f"model_{algo}.txt")
            stage = f"evaluate {algo}"
            results[algo] = {
                "training": rankers.evaluate(model, train_set, "train").mean,
                "testing": rankers.evaluate(model, test_set, "test").mean,
            }
    except CofRankError as exc:
        raise CofRankError(f"stage {stage} failed: {exc}") from exc

    lines = []
    for metric in ("MAP", "NDCG@10", "ERR@10", "P@10"):
        lines.append(f"Evaluation results in terms of {metric}")
        lines.append(f"{'algorithm':<12} {'training':>10} {'testing':>10}")
        for algo in REPRODUCE_ORDER:
            row = results[algo]
            lines.append(f"{REPRODUCE_LABELS[algo]:<12} "
                         f"{row['training'][metric]:>10.4f} "
                         f"{row['testing'][metric]:>10.4f}")
        lines.append("")
    lines.append(SYNTHETIC_FOOTER)
    lines.append(f"settings: seed={seed} preset=paper-faithful split=0.7 "
                 f"queries=10 docs/query=15")
    return results, "\n".join(lines) + "\n"


def reproduce_tables(seed: int, out_dir: Path | None = None) -> str:
    return run_reproduce(seed, out_dir)[1]


def cmd_reproduce(args) -> int:
    run = _build_run_config(args)
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    text = reproduce_tables(run.synth_seed, out_dir)
    sys.stdout.write(text)
    if out_dir is not None:
        (out_dir / "tables.txt").write_text(text, encoding="utf-8")
    return 0


# --- argument wiring --------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="TOML config file")
    parser.add_argument("--seed", type=int, default=None,
                        help="override every seed in the config")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cofrank",
        description="combination-of-features news ranking toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a corpus and store stats")
    _add_common(p)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("stats", help="export corpus statistics as JSON")
    _add_common(p)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("extract", help="compute features into a LETOR file")
    _add_common(p)
    p.add_argument("--corpus", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--judgments", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--preset", choices=["paper-faithful", "leakage-safe"])
    p.add_argument("--normalize", action="store_true",
                   help="min-max rescale features within each query")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("split", help="query-wise train/test split")
    _add_common(p)
    p.add_argument("--dataset", required=True)
    p.add_argument("--train-out", required=True)
    p.add_argument("--test-out", required=True)
    p.add_argument("--fraction", type=float, default=None)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("train", help="train one ranking model")
    _add_common(p)
    p.add_argument("--algorithm", required=True, choices=rankers.ALGORITHMS)
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--rounds", type=int, default=None)
    p.add_argument("--learning-rate", type=float, default=None,
                   dest="learning_rate")
    p.add_argument("--leaves", type=int, default=None)
    p.add_argument("--metric", choices=["MAP", "NDCG", "ERR"], default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--hidden-units", type=int, default=None,
                   dest="hidden_units")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="metric report for a model + dataset")
    _add_common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--split-tag", dest="split_tag")
    p.add_argument("--table-out", dest="table_out")
    p.add_argument("--csv-out", dest="csv_out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("rank", help="emit ranked lists for a dataset")
    _add_common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("synth", help="generate the synthetic benchmark corpus")
    _add_common(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("reproduce",
                       help="synth + extract + split + train all five + tables")
    _add_common(p)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_reproduce)

    return parser


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("COF_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CofRankError as exc:
        print(f"error: {args.command}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
