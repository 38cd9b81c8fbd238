"""Exception types shared across the certification pipeline."""

from __future__ import annotations


class ItemCertError(Exception):
    """Base class for all pipeline errors."""


class UnknownLevel(ItemCertError):
    """A level name does not belong to the given taxonomy framework."""


class ParseError(ItemCertError):
    """A structured text document (lexicon, policy, item line) failed to parse."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class DuplicateToken(ParseError):
    """The same token appears more than once in a lexicon or policy document."""


class EmptyInput(ItemCertError):
    """An operation received text that trims to empty."""


class EmptyLexicon(ItemCertError):
    """Classification was attempted against a lexicon with no entries."""


class InvalidThresholds(ItemCertError):
    """Decision thresholds violate 0 <= red_below < green_min <= 1."""


class ComponentMismatch(ItemCertError):
    """Certification components reference different item ids."""


class VersionConflict(ItemCertError):
    """Optimistic-concurrency check failed: the record changed under the caller."""


class NotReviewable(ItemCertError):
    """A review was submitted for a finalized record without the override flag."""


class ReVerificationFailed(ItemCertError):
    """Reviewer edits would drop the item into the Red category."""

    def __init__(self, message: str, trace: tuple[str, ...] = ()):
        self.trace = trace
        super().__init__(message)


class RecordNotFound(ItemCertError):
    """No certification record exists for the requested item id."""


class InvalidPage(ItemCertError):
    """Pagination parameters are out of range."""


class StorageFailure(ItemCertError):
    """The ledger or record store could not be read or written."""


class EmptySample(ItemCertError):
    """A workload metric was requested over an empty duration sample."""


class SupportMismatch(ItemCertError):
    """Two distributions do not share the same support."""


class NotNormalized(ItemCertError):
    """A distribution has negative mass or does not sum to one."""


class AdapterTimeout(ItemCertError):
    """The external generator did not answer within the configured timeout."""


class MalformedGeneration(ItemCertError):
    """A generator response is missing required fields or fails validation."""


class CalibrationFailure(ItemCertError):
    """The simulator could not construct a stem inside the requested confidence band."""

    def __init__(self, message: str, achieved: float | None = None):
        self.achieved = achieved
        super().__init__(message)


class ConfigError(ItemCertError):
    """The pipeline configuration file is malformed."""
