"""Exception types shared across the package.

Every error that callers are expected to dispatch on carries a stable
machine-readable ``code`` string; everything else is a plain ``ValueError``.
"""

from __future__ import annotations


class RpmaugError(Exception):
    """Base class for package-specific errors."""

    code = "ERROR"


class ArchiveError(RpmaugError):
    """Base class for array/archive format errors."""

    code = "ARCHIVE"


class BadMagicError(ArchiveError):
    code = "BAD_MAGIC"


class UnsupportedVersionError(ArchiveError):
    code = "UNSUPPORTED_VERSION"


class MalformedHeaderError(ArchiveError):
    code = "MALFORMED_HEADER"


class UnsupportedDtypeError(ArchiveError):
    code = "UNSUPPORTED_DTYPE"


class FortranOrderError(ArchiveError):
    code = "FORTRAN_ORDER"


class TruncatedPayloadError(ArchiveError):
    code = "TRUNCATED"


class MissingMemberError(ArchiveError):
    code = "MISSING_MEMBER"


class WrongShapeError(ArchiveError):
    code = "WRONG_SHAPE"


class TargetRangeError(ArchiveError):
    code = "TARGET_RANGE"


class InvalidSampleError(RpmaugError, ValueError):
    """A sample failed its invariants where a valid one was required.

    Carries the full validation report so callers can inspect what broke.
    """

    code = "INVALID_SAMPLE"

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = list(report or [])


class DomainOverflowError(RpmaugError):
    """A rule pushed an attribute value outside its finite domain."""

    code = "DOMAIN_OVERFLOW"


class GenerationExhaustedError(RpmaugError):
    """Bounded retries ran out while generating a puzzle sample."""

    code = "GENERATION_EXHAUSTED"


class DegenerateVarianceError(RpmaugError, ValueError):
    """Covariance matrix is identically zero; no principal directions exist."""

    code = "DEGENERATE_VARIANCE"
