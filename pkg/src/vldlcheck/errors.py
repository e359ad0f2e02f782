"""Exception hierarchy shared by every stage of the pipeline.

Exit codes: input problems map to 2, resource exhaustion to 3. The CLI
relies on `exit_code` instead of isinstance chains.
"""


class VldlError(Exception):
    exit_code = 1


class InputError(VldlError):
    """Malformed or inconsistent input: parse errors, alphabet mismatches."""

    exit_code = 2


class UnsupportedInputError(InputError):
    """Input is well-formed but outside a documented restriction
    (e.g. the acceptance oracle requires a well-matched period)."""


class MalformedWitnessError(InputError):
    """A regular tree handed to decode() is not a stack tree."""


class ResourceError(VldlError):
    """A configured stage cap was exceeded."""

    exit_code = 3

    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage
