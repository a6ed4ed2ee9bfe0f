"""Exception hierarchy shared across the package.

Service-layer code maps these onto HTTP status codes; library code raises
them directly.
"""


class XaideskError(Exception):
    """Base class for all package errors."""


class EmptyTextError(XaideskError):
    """The input text tokenizes to zero tokens."""


class DegenerateNeighbourhoodError(XaideskError):
    """All sampled perturbation masks were identical, even after a reseed."""


class SampleMismatchError(XaideskError):
    """Two explanation results do not refer to the same sample."""


class PatchTooLargeError(XaideskError):
    """The occlusion patch does not fit inside the image."""


class SchemaViolationError(XaideskError):
    """An artifact record violates the metadata schema invariants."""


class NotFoundError(XaideskError):
    """A requested key, artifact or dataset does not exist."""


class BackendUnavailableError(XaideskError):
    """The storage backend could not be reached; the operation is retryable."""


class GeneratorUnavailableError(XaideskError):
    """The remote answer generator could not be reached."""


class MalformedCsvError(XaideskError):
    """The uploaded CSV could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class MissingColumnError(XaideskError):
    """The uploaded CSV is missing a required column."""
