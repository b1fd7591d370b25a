"""Reading and writing datasets in the LETOR/SVMlight text format.

One line per instance: ``<label> qid:<query_id> 1:<v1> ... 12:<v12> # <doc_id>``
with reals rendered to 6 significant digits and lines ordered by
(query_id, doc_id). ``#``-prefixed lines carry provenance as ``key: value``
pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator

from .errors import DatasetFormatError, ValidationError
from .features import FeatureConfig, FeatureVector, Instance
from .text_pipeline import PipelineConfig

MAGIC = "cof-dataset v1"
FEATURE_COUNT = 12


def _sort_key(inst: Instance):
    return (inst.query_id, inst.doc_id)


@dataclass
class Dataset:
    """Instances grouped by query plus the provenance header."""

    instances: list[Instance]
    feature_count: int = FEATURE_COUNT
    header: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.instances = sorted(self.instances, key=_sort_key)
        for inst in self.instances:
            if len(inst.features.values) != self.feature_count:
                raise ValidationError(
                    f"instance ({inst.query_id}, {inst.doc_id}) has "
                    f"{len(inst.features.values)} features, expected "
                    f"{self.feature_count}"
                )

    def groups(self) -> dict[int, list[Instance]]:
        grouped: dict[int, list[Instance]] = {}
        for inst in self.instances:
            grouped.setdefault(inst.query_id, []).append(inst)
        return grouped

    @property
    def masked(self) -> tuple[int, ...]:
        raw = self.header.get("masked_features", "none").strip()
        if raw in ("", "none"):
            return ()
        return tuple(int(tok) for tok in raw.split())

    def __len__(self) -> int:
        return len(self.instances)


def build_header(pipeline: PipelineConfig | None = None,
                 features: FeatureConfig | None = None,
                 corpus_hash: str | None = None,
                 normalized: bool = False) -> dict[str, str]:
    """Provenance block recorded at the top of every dataset file."""
    header: dict[str, str] = {}
    if pipeline is not None:
        header["pipeline"] = pipeline.describe()
    if features is not None:
        header["features"] = features.describe()
        header["masked_features"] = \
            " ".join(str(i) for i in features.masked) or "none"
    if corpus_hash is not None:
        header["corpus_hash"] = corpus_hash
    header["normalized"] = "true" if normalized else "false"
    return header


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def write(dataset: Dataset, sink: IO[str]) -> None:
    """Serialize; the instance ordering and float rendering are pinned."""
    sink.write(f"# {MAGIC}\n")
    for key, value in dataset.header.items():
        sink.write(f"# {key}: {value}\n")
    for inst in dataset.instances:
        feats = " ".join(
            f"{i}:{_fmt(v)}" for i, v in enumerate(inst.features.values, start=1)
        )
        sink.write(f"{inst.label} qid:{inst.query_id} {feats} # {inst.doc_id}\n")


def write_path(dataset: Dataset, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        write(dataset, fh)


def _iter_lines(source) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            yield from fh
    else:
        yield from source


def read(source: str | Path | IO[str] | Iterable[str]) -> Dataset:
    """Parse a LETOR file back into a Dataset.

    Every data line must carry the full 12 features with indices contiguous
    from 1. The trailing ``# doc_id`` comment is preserved; a missing
    comment gets a synthetic ``line<no>`` id.
    """
    instances: list[Instance] = []
    header: dict[str, str] = {}
    for line_no, raw in enumerate(_iter_lines(source), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body != MAGIC and ": " in body:
                key, _, value = body.partition(": ")
                header[key.strip()] = value.strip()
            continue
        data, sep, comment = line.partition("#")
        doc_id = comment.strip() if sep else f"line{line_no}"
        fields = data.split()
        if len(fields) < 2:
            raise DatasetFormatError(line_no, "too few fields")
        try:
            label = int(fields[0])
        except ValueError:
            raise DatasetFormatError(line_no, f"bad label {fields[0]!r}") from None
        if label not in (0, 1):
            raise DatasetFormatError(line_no, f"label must be 0 or 1, got {label}")
        if not fields[1].startswith("qid:"):
            raise DatasetFormatError(line_no, "second field must be qid:<int>")
        try:
            query_id = int(fields[1][4:])
        except ValueError:
            raise DatasetFormatError(line_no, f"bad qid {fields[1]!r}") from None
        values: list[float] = []
        for expected, tok in enumerate(fields[2:], start=1):
            idx_str, _, val_str = tok.partition(":")
            try:
                idx = int(idx_str)
                value = float(val_str)
            except ValueError:
                raise DatasetFormatError(line_no, f"bad feature {tok!r}") from None
            if idx != expected:
                raise DatasetFormatError(
                    line_no, f"feature indices must be contiguous from 1; "
                    f"expected {expected}, got {idx}"
                )
            values.append(value)
        if len(values) != FEATURE_COUNT:
            raise DatasetFormatError(
                line_no, f"expected {FEATURE_COUNT} features, got {len(values)}"
            )
        instances.append(Instance(
            query_id=query_id, doc_id=doc_id, label=label,
            features=FeatureVector(tuple(values)),
        ))
    return Dataset(instances=instances, header=header)


def normalize_per_query(dataset: Dataset) -> Dataset:
    """Min-max rescale every feature to [0,1] within each query group.

    Constant features map to 0. Idempotent; the result's header records it.
    """
    normalized: list[Instance] = []
    for _, group in sorted(dataset.groups().items()):
        lows = list(group[0].features.values)
        highs = list(group[0].features.values)
        for inst in group[1:]:
            for i, v in enumerate(inst.features.values):
                lows[i] = min(lows[i], v)
                highs[i] = max(highs[i], v)
        for inst in group:
            values = tuple(
                (v - lo) / (hi - lo) if hi > lo else 0.0
                for v, lo, hi in zip(inst.features.values, lows, highs)
            )
            normalized.append(Instance(
                query_id=inst.query_id, doc_id=inst.doc_id, label=inst.label,
                features=FeatureVector(values),
            ))
    header = dict(dataset.header)
    header["normalized"] = "true"
    return Dataset(instances=normalized, feature_count=dataset.feature_count,
                   header=header)
