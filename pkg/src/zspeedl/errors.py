"""Exception hierarchy shared across the toolkit.

The CLI maps these onto process exit codes: usage errors exit 1, data
errors exit 2, numerical failures exit 3.
"""


class ZspeedlError(Exception):
    """Base class for all toolkit errors."""


class UsageError(ZspeedlError):
    """Bad invocation: unknown method, malformed flag, missing argument."""

    exit_code = 1


class DataError(ZspeedlError):
    """Invalid or inconsistent data: bad files, shape mismatches, split violations."""

    exit_code = 2


class FormatError(DataError):
    """Malformed binary array file.

    ``code`` distinguishes the failure: "bad_magic", "bad_version",
    "bad_dtype", "truncated", "non_finite".
    """

    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class NumericalError(ZspeedlError):
    """Numerical failure: singular system, non-convergence, non-finite loss."""

    exit_code = 3
