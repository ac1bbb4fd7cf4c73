"""
Exception hierarchy for the Web Reputation Index system.

Every error raised by the services and the dataset store derives from
WebReputationError. Each class carries an ``exit_code`` class attribute that
the presentation layer turns into the process exit status:

    0  success (warnings allowed)
    1  I/O failures
    2  usage, parse, schema and data errors

Collector errors (FetchError, ExtractionError, ProbeError) are normally
caught inside the collector service and converted into Missing values; they
only reach the command layer when a whole probe run fails.

Example:
    >>> try:
    ...     NormalizationService.min_max_normalize({})
    ... except WebReputationError as e:
    ...     print(e.exit_code, e)
    2 cannot normalize an empty series
"""

from typing import Optional


class WebReputationError(Exception):
    """Base class for every domain error. Defaults to exit status 1."""

    exit_code: int = 1


class UsageError(WebReputationError):
    """Invalid command-line usage or configuration."""

    exit_code = 2


class NonFiniteValueError(WebReputationError):
    """A numeric value is NaN or infinite."""

    exit_code = 2


class EmptySeriesError(WebReputationError):
    exit_code = 2


class EmptyInputError(WebReputationError):
    exit_code = 2


class InsufficientEntitiesError(WebReputationError):
    """Min-max normalization needs at least two entities."""

    exit_code = 2


class NoPositiveIndicatorsError(WebReputationError):
    """Every positive indicator is degenerate, so C' is zero."""

    exit_code = 2


class DegenerateIndexError(WebReputationError):
    """All population-normalized values are equal; the final rescale is undefined."""

    exit_code = 2


class KOutOfRangeError(WebReputationError):
    exit_code = 2


class MismatchedUniverseError(WebReputationError):
    """Two rankings do not cover the same set of slugs."""

    exit_code = 2


class SchemaError(WebReputationError):
    """A file references indicators or fields outside the indicator universe."""

    exit_code = 2


class DatasetParseError(WebReputationError):
    """
    A dataset file could not be parsed.

    Attributes:
        row (Optional[int]): 1-based data row (header excluded) when known.
        column (Optional[str]): Column name when known.
    """

    exit_code = 2

    def __init__(
        self, message: str, row: Optional[int] = None, column: Optional[str] = None
    ) -> None:
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.row = row
        self.column = column


class DatasetIoError(WebReputationError):
    """Reading or writing a file failed at the operating-system level."""

    exit_code = 1


class FetchError(WebReputationError):
    """Network failure, non-success HTTP status, or a request absent from a cassette."""


class ExtractionError(WebReputationError):
    """An extraction rule could not find a value in a response body."""


class ProbeError(WebReputationError):
    """A single TCP connect attempt failed or timed out."""


class AllProbesFailedError(WebReputationError):
    """No probe location produced a latency measurement."""
