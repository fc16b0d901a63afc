"""Exception hierarchy shared across the package."""

from __future__ import annotations


class StreamstabError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(StreamstabError):
    """Input data violates a structural invariant."""


class MalformedRecordError(ValidationError):
    """A stream-file line could not be parsed."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class NonMonotonicTimestampError(ValidationError):
    """Segment timestamps within an utterance are not strictly increasing."""


class FinalPlacementError(ValidationError):
    """An utterance is missing a final segment, or the final is not last."""


class DuplicateFinalError(ValidationError):
    """An utterance contains more than one final segment."""


class EmptyCorpusError(ValidationError):
    """A corpus-level operation requires at least one utterance."""


class EmptyFinalError(ValidationError):
    """A final hypothesis contains no tokens."""


class EmptyTranscriptError(ValidationError):
    """A transcript given to the generator has no tokens."""


class InvalidIntervalError(StreamstabError):
    """A partial emission interval must be a positive number of ms."""


class SingleClassError(StreamstabError):
    """Gate training requires examples of both stability classes."""


class NonFiniteValueError(StreamstabError):
    """A feature, score, or loss value is NaN or infinite."""
