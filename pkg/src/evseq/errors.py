"""Exception taxonomy shared by every structure in the package.

The split matters for callers: position errors (RangeError) are recoverable
caller bugs, select overflow (NotFoundError) is a legitimate "no such
occurrence" outcome, and the remaining classes map onto distinct CLI exit
codes.
"""


class EvseqError(Exception):
    """Base class for every error raised by this package."""


class RangeError(EvseqError, IndexError):
    """A position, day, employee or time argument is outside its domain."""


class NotFoundError(EvseqError, LookupError):
    """select(b, j) was asked for more occurrences than exist."""


class DomainError(EvseqError, ValueError):
    """A symbol or activity is outside the declared alphabet."""


class BuildError(EvseqError, ValueError):
    """A structure could not be constructed from the given arguments."""


class IngestError(EvseqError, ValueError):
    """Input data (TSV rows, tuples) is malformed or inconsistent."""


class FormatError(EvseqError, ValueError):
    """A serialized payload or query line does not match the format."""


class IntegrityError(EvseqError, ValueError):
    """A serialized payload failed its checksum or header validation."""


class UnsupportedQueryError(EvseqError, ValueError):
    """The structure cannot answer this query kind."""


class UsageError(EvseqError, ValueError):
    """Bad command line invocation."""
