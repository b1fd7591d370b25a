"""Exception types raised across the toolkit.

Every domain error derives from CofRankError so the CLI can catch one base
class and exit with a single-line reason.
"""


class CofRankError(Exception):
    """Base class for all toolkit errors."""


class ParseError(CofRankError):
    """Malformed input record; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ValidationError(CofRankError):
    """Input violates a documented contract (bad category, empty query...)."""


class EmptyCorpusError(CofRankError):
    """Operation needs a non-empty corpus (avgdl or |C| undefined)."""


class SplitError(CofRankError):
    """Train/test split impossible (fewer than 2 distinct queries)."""


class UndefinedMetricError(CofRankError):
    """Metric denominator is empty (no retrieved or no relevant documents)."""


class DatasetFormatError(CofRankError):
    """Malformed LETOR line; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class TrainingError(CofRankError):
    """Training cannot proceed (degenerate dataset, zero rounds...)."""


class DivergenceError(TrainingError):
    """Loss became non-finite; carries the epoch it happened at."""

    def __init__(self, epoch: int, message: str = "loss is not finite"):
        super().__init__(f"epoch {epoch}: {message}")
        self.epoch = epoch


class ModelFormatError(CofRankError):
    """Model file is truncated, has the wrong magic, or an unknown kind."""
