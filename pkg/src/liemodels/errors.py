"""Exception types shared by all modules.

The CLI maps them onto exit codes: invalid input and parse problems exit 1,
an insufficient degree window exits 2, a failed internal check exits 3.
"""


class LieModelsError(Exception):
    exit_code = 1


class InvalidInput(LieModelsError):
    exit_code = 1


class ParseError(InvalidInput):
    def __init__(self, message, location=None):
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location


class PreconditionError(InvalidInput):
    pass


class UnsupportedCase(InvalidInput):
    pass


class WindowError(LieModelsError):
    """A requested degree lies outside the computed window."""

    exit_code = 2


class VerificationError(LieModelsError):
    """An internal consistency check failed."""

    exit_code = 3
