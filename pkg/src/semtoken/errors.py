"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto distinct exit codes (see ``semtoken.cli``):
format/data corruption -> 4, alignment -> 5, plain I/O failures -> 3.
"""


class SemtokenError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(SemtokenError):
    """A file does not follow the expected binary or record format."""


class DataError(SemtokenError):
    """A file parsed structurally but carries invalid data (e.g. NaN)."""


class CorruptionError(SemtokenError):
    """A compressed sequence references token ranges that cannot exist."""


class AlignmentError(SemtokenError):
    """Two artifacts that must describe the same token stream disagree."""
