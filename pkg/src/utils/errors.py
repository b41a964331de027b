"""
Exception hierarchy for the dualization toolkit.

Precondition violations on public operations raise plain ``ValueError``;
the classes below cover failures that callers (mostly the CLI) need to tell
apart.
"""

from typing import Optional


class DualizationError(Exception):
    """Base class for all toolkit errors."""


class MatrixFormatError(DualizationError, ValueError):
    """Malformed matrix text or dump file."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class OracleCapExceededError(DualizationError):
    """The brute-force oracle refused a matrix with too many columns."""

    def __init__(self, n: int, cap: int):
        self.n = n
        self.cap = cap
        super().__init__(
            f"brute-force oracle refuses n={n} columns (cap is {cap}, 2^n subsets would be scanned)"
        )


class SamplingError(DualizationError):
    """Random submatrices kept having no irreducible coverings."""


class WorkerFailureError(DualizationError):
    """A parallel worker failed; the whole run is discarded."""

    def __init__(self, worker: int, diagnostic: str):
        self.worker = worker
        self.diagnostic = diagnostic
        super().__init__(f"worker {worker} failed: {diagnostic}")


class TimerResolutionError(DualizationError):
    """A measured wall time was zero, so a ratio metric is undefined."""
