"""Exception hierarchy. Every error carries the process exit code that the
command-line interface reports for it.
"""


class PalindromicError(Exception):
    exit_code = 1


class VerificationError(PalindromicError):
    """A mathematical check came out negative."""
    exit_code = 1


class InputError(PalindromicError, ValueError):
    """Malformed data or a violated precondition."""
    exit_code = 2


class PreconditionError(InputError):
    pass


class EmptyPlaneError(InputError):
    pass


class DegenerateError(InputError):
    pass


class ZeroElementError(InputError, ZeroDivisionError):
    pass


class ResourceCapError(PalindromicError):
    """An iteration, search or refinement cap was exhausted."""
    exit_code = 3


class InternalError(PalindromicError, AssertionError):
    """A certified identity failed. This always indicates a bug."""
    exit_code = 4
