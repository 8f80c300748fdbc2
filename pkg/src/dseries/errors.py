"""Exception types shared across the toolkit."""


class DSeriesError(Exception):
    """Base class for toolkit errors."""


class ResourceLimitError(DSeriesError):
    """A configured resource cap was reached (CLI exit code 2)."""


class PrecisionLimitError(ResourceLimitError):
    """The requested enclosure precision exceeds the configured maximum,
    or the source cannot be refined that far (e.g. a finite partial-quotient
    prefix with no declared tail)."""


class TermLimitError(ResourceLimitError):
    """A summation range exceeds the configured term cap."""


class AmbiguousOrderError(DSeriesError):
    """Two candidate record distances could not be ordered at the working
    precision."""


class CertificateError(DSeriesError):
    """A certificate was supplied for a source it cannot apply to
    (CLI exit code 1)."""
