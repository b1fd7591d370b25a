"""Text preprocessing chain: tokenize -> stopwords -> length filter -> lowercase -> stem.

The stage order is fixed; every consumer of document or query text goes
through :func:`process` with one shared :class:`PipelineConfig`, so token
streams are bit-reproducible for a given config.

Note on stemming: the bundled Porter rules are not a strict fixpoint for a
small class of outputs (stems ending in a restored final "e", e.g.
"agreed" -> "agre" -> "agr"). Reprocessing already-processed text is stable
for the bundled synthetic corpora and for typical news vocabulary, but is
not guaranteed for arbitrary words; see the tests for the known case.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

from . import _porter
from .errors import ValidationError

if TYPE_CHECKING:
    from .corpus import CorpusStats

STEMMER_PORTER = "porter"
STEMMER_NONE = "none"
DIGITS_DROP = "drop"
DIGITS_KEEP = "keep"

# Pinned English stopword list. Reproducibility needs a fixed list; this one
# covers articles, pronouns, auxiliaries and common function words, plus the
# fragments that punctuation splitting produces from contractions.
DEFAULT_STOPWORDS = frozenset("""
a about above after again against ain all am an and any are aren as at be
because been before being below between both but by can cannot could couldn
did didn do does doesn doing don down during each few for from further had
hadn has hasn have haven having he her here hers herself him himself his how
i if in into is isn it its itself just ll ma me mightn more most mustn my
myself needn no nor not now of off on once only or other our ours ourselves
out over own re same shan she should shouldn so some such than that the
their theirs them themselves then there these they this those through to too
under until up ve very was wasn we were weren what when where which while
who whom why will with won wouldn would you your yours yourself yourselves
""".split())



@dataclass(frozen=True)
class PipelineConfig:
    """Configuration for the preprocessing chain.

    min_len/max_len bound the raw token length (checked before lowering and
    stemming); stopword matching is case-insensitive.
    """

    min_len: int = 2
    max_len: int = 25
    stopwords: frozenset[str] = DEFAULT_STOPWORDS
    stemmer: str = STEMMER_PORTER
    digit_policy: str = DIGITS_DROP

    def __post_init__(self):
        if not (1 <= self.min_len <= self.max_len):
            raise ValidationError(
                f"need 1 <= min_len <= max_len, got {self.min_len}..{self.max_len}"
            )
        if self.stemmer not in (STEMMER_PORTER, STEMMER_NONE):
            raise ValidationError(f"unknown stemmer {self.stemmer!r}")
        if self.digit_policy not in (DIGITS_DROP, DIGITS_KEEP):
            raise ValidationError(f"unknown digit policy {self.digit_policy!r}")

    def describe(self) -> str:
        """One-line echo for dataset/model provenance headers."""
        return (
            f"min_len={self.min_len} max_len={self.max_len} "
            f"stemmer={self.stemmer} digits={self.digit_policy} "
            f"stopwords={len(self.stopwords)}"
        )


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword override file: one lowercase word per line, UTF-8."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word:
            words.add(word.lower())
    return frozenset(words)


def tokenize(text: str, digit_policy: str = DIGITS_DROP) -> list[str]:
    """Split text into maximal runs of letters (plus digits if kept).

    Punctuation never reaches the output; with the drop policy, digit runs
    vanish entirely.
    """
    keep_digits = digit_policy == DIGITS_KEEP
    tokens: list[str] = []
    current: list[str] = []
    for ch in text:
        if ch.isalpha() or (keep_digits and ch.isdigit()):
            current.append(ch)
        elif current:
            tokens.append("".join(current))
            current = []
    if current:
        tokens.append("".join(current))
    return tokens


def process(text: str, cfg: PipelineConfig) -> list[str]:
    """Run the full chain; returns lowercase stemmed terms in text order."""
    out = []
    for token in tokenize(text, cfg.digit_policy):
        if token.lower() in cfg.stopwords:
            continue
        if not (cfg.min_len <= len(token) <= cfg.max_len):
            continue
        term = token.lower()
        if cfg.stemmer == STEMMER_PORTER:
            term = _porter.stem(term)
        out.append(term)
    return out


def top_terms(stats: "CorpusStats", k: int) -> list[str]:
    """The k highest collection-frequency terms; ties broken alphabetically."""
    if k <= 0:
        return []
    ordered = sorted(stats.cf, key=lambda t: (-stats.cf[t], t))
    return ordered[:k]
